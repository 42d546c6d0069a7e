"""Brute-force verifiers kept independent of the pattern and corrector code.

Operators are assembled here from Kronecker products rather than reusing
``commutator_operator``, so agreement between the two is a real check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import Field
from .matrices import Matrix, gauss_rank
from .polys import frobenius_block, is_irreducible, is_monic, poly_embed


def _kron(field: Field, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Kronecker product with entries multiplied one by one."""
    (a, b), (c, d) = P.shape, Q.shape
    out = Matrix.zeros(field, a * c, b * d).data
    for i in range(a):
        for j in range(b):
            if field.is_zero(P[i, j]):
                continue
            out[i * c : (i + 1) * c, j * d : (j + 1) * d] = P[i, j] * Q
    return out


def sylvester_operator(Phi: Matrix, Psi: Matrix) -> Matrix:
    """Matrix of X -> X Psi - Phi X on row-major vec(X), X of shape m x n.

    vec(X Psi) = (I_m kron Psi^T) vec X and vec(Phi X) = (Phi kron I_n) vec X.
    """
    field = Phi.field
    m, n = Phi.shape[0], Psi.shape[0]
    Im = Matrix.identity(field, m).data
    In = Matrix.identity(field, n).data
    op = _kron(field, Im, Psi.data.T) - _kron(field, Phi.data, In)
    return Matrix(op, field)


def tangent_dim(A: Matrix, tol: float | None = None) -> int:
    """dim T(A) as the rank of the Kronecker-built commutator operator."""
    return gauss_rank(sylvester_operator(A, A), tol)


def codim(A: Matrix, tol: float | None = None) -> int:
    """n^2 - dim T(A), the codimension of the similarity class of A."""
    n = A.shape[0]
    return n * n - tangent_dim(A, tol)


@dataclass(frozen=True)
class LemmaCase:
    """Pair of Frobenius blocks Phi = Phi(p^r), Psi = Phi(q^s).

    ``p`` and ``q`` are monic coefficient lists, leading coefficient first.
    """

    field: Field
    p: tuple
    q: tuple
    r: int
    s: int

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(self.p))
        object.__setattr__(self, "q", tuple(self.q))
        for poly in (self.p, self.q):
            if len(poly) < 2 or not is_monic(self.field, poly_embed(self.field, poly)):
                raise ValueError(f"{list(poly)} is not a monic polynomial of positive degree")
        if self.r < 1 or self.s < 1:
            raise ValueError("exponents must be positive")

    @property
    def m(self) -> int:
        return self.r * (len(self.p) - 1)

    @property
    def n(self) -> int:
        return self.s * (len(self.q) - 1)

    @property
    def same(self) -> bool:
        if len(self.p) != len(self.q):
            return False
        K = self.field
        return all(K.is_zero(K.embed(a) - K.embed(b)) for a, b in zip(self.p, self.q))

    def blocks(self) -> tuple[Matrix, Matrix]:
        return frobenius_block(self.field, self.p, self.m), frobenius_block(self.field, self.q, self.n)

    def irreducibility(self) -> dict:
        """Decided irreducibility of p and q (None where only asserted)."""
        return {"p": is_irreducible(self.field, list(self.p)), "q": is_irreducible(self.field, list(self.q))}


def pair_tangent_dim(case: LemmaCase) -> int:
    """Rank of X -> X Psi - Phi X on m x n matrices, by elimination."""
    Phi, Psi = case.blocks()
    return gauss_rank(sylvester_operator(Phi, Psi))


def expected_pair_dim(case: LemmaCase) -> int:
    m, n = case.m, case.n
    if not case.same:
        return m * n
    if case.r >= case.s:
        return (m - 1) * n
    return m * (n - 1)


def _complement_rank(op: Matrix, m: int, n: int, positions) -> tuple[int, int]:
    """(rank of stacked [T basis | unit matrices], number of units)."""
    field = op.field
    units = Matrix.zeros(field, m * n, len(positions)).data
    one = field.one()
    for c, (i, j) in enumerate(positions):
        units[i * n + j, c] = one
    stacked = Matrix(np.concatenate([op.data, units], axis=1), field)
    return gauss_rank(stacked), len(positions)


def lemma42_check(case: LemmaCase) -> dict:
    """Compare the operator rank with the closed-form table and certify complements.

    Sub-claims: ``alpha`` (p != q: the image is everything), ``beta``
    (p = q, r >= s: last-row units complete the image) and ``gamma``
    (p = q, r <= s: first-column units complete it).
    """
    Phi, Psi = case.blocks()
    op = sylvester_operator(Phi, Psi)
    m, n = case.m, case.n
    dim = gauss_rank(op)
    expected = expected_pair_dim(case)
    claims = {}
    if not case.same:
        claims["alpha"] = dim == m * n
    else:
        if case.r >= case.s:
            rank, k = _complement_rank(op, m, n, [(m - 1, j) for j in range(n)])
            claims["beta"] = rank == m * n and dim + k == m * n
        if case.r <= case.s:
            rank, k = _complement_rank(op, m, n, [(i, 0) for i in range(m)])
            claims["gamma"] = rank == m * n and dim + k == m * n
    return {
        "p": [str(c) for c in case.p],
        "q": [str(c) for c in case.q],
        "r": case.r,
        "s": case.s,
        "m": m,
        "n": n,
        "dim": dim,
        "expected": expected,
        "table_ok": dim == expected,
        "claims": claims,
        "irreducible": case.irreducibility(),
        "ok": dim == expected and all(claims.values()),
    }
