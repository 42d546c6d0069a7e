"""Corrector matrices F_ij and the neighborhood radius.

For every position (i, j) off the star pattern, F_ij solves

    E_ij + F_ij A - A F_ij  supported on the stars,

and F_ij = 0 at star positions.  With a = ||A|| and
f = max(sum ||F_ij||, 1/3) every perturbation X with
||X|| < 1 / (48 sqrt(n) (a + 1) f^2) is reducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OutsideRadius, UnsupportedMode
from .fields import Field
from .matrices import Matrix, commutator_operator, matrix_norm, solve_linear
from .patterns import StarPattern

DEFAULT_MARGIN = 1e-6


def default_mode(field: Field) -> str:
    return "particular" if field.exact else "min_norm"


@dataclass(frozen=True)
class CorrectorSet:
    """All n^2 correctors plus the constants a, f, v and the radius rho.

    ``G`` is the n^2-by-n^2 matrix whose column ``i*n + j`` is vec(F_ij), so
    that vec(sum_ij m_ij F_ij) = G vec(M).
    """

    A: Matrix
    pattern: StarPattern
    G: Matrix
    mode: str
    a: float
    f: float
    v: float
    rho: float

    @property
    def field(self) -> Field:
        return self.A.field

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def F(self, i: int, j: int) -> Matrix:
        n = self.n
        return Matrix(self.G.data[:, i * n + j].reshape(n, n).copy(), self.field)

    def norms(self) -> np.ndarray:
        n = self.n
        out = np.zeros((n, n))
        for i in range(n):
            for j in range(n):
                out[i, j] = matrix_norm(self.F(i, j))
        return out

    def combine(self, M: Matrix) -> Matrix:
        """sum_ij m_ij F_ij (star entries of M contribute nothing)."""
        n = self.n
        return Matrix((self.G.data @ M.data.reshape(-1)).reshape(n, n), self.field)

    def to_json(self) -> dict:
        field = self.field
        Fs = []
        for i, j in self.pattern.off_positions():
            Fs.append({"i": i + 1, "j": j + 1, "F": self.F(i, j).to_json()})
        return {
            "mode": self.mode,
            "n": self.n,
            "a": self.a,
            "f": self.f,
            "v": self.v,
            "rho": self.rho,
            "field": field.config(),
            "correctors": Fs,
        }


def constants(n: int, a: float, fsum: float) -> tuple[float, float, float]:
    """(f, v, rho), rounding f up and rho down."""
    f = max(fsum, 1.0 / 3.0)
    if fsum > 1.0 / 3.0:
        f = math.nextafter(f, math.inf)
    rn = math.sqrt(n)
    v = 3.0 * rn * (a + 1.0) * f
    rho = math.nextafter(1.0 / (48.0 * rn * (a + 1.0) * f * f), 0.0)
    return f, v, rho


def solve_correctors(A: Matrix, D: StarPattern, mode: str | None = None) -> CorrectorSet:
    """Solve every corrector system at once.

    The unknown is vec(F); the equations are the off-pattern coordinates of
    F A - A F = -E_ij.  ``particular`` zeroes free variables after
    left-to-right elimination, ``min_norm`` (complex only) returns the
    least-norm F_ij for each position, which minimizes f.
    """
    field = A.field
    n = A.shape[0]
    mode = (mode or default_mode(field)).replace("-", "_")
    if mode == "min_norm" and field.exact:
        raise UnsupportedMode("min_norm correctors need the complex backend")
    if mode not in ("min_norm", "particular"):
        raise UnsupportedMode(f"unknown corrector mode {mode!r}")
    off = D.off_positions()
    L = commutator_operator(A)
    rows = [i * n + j for i, j in off]
    G = Matrix.zeros(field, n * n)
    if off:
        L_off = Matrix(L.data[rows, :], field)
        B = (-Matrix.identity(field, len(off))).data
        X = solve_linear(L_off, B, mode=mode)
        for col, pos in enumerate(rows):
            G.data[:, pos] = X[:, col]
    a = matrix_norm(A)
    cs = CorrectorSet(A, D, G, mode, a, 0.0, 0.0, 0.0)
    fsum = float(cs.norms().sum())
    f, v, rho = constants(n, a, fsum)
    return CorrectorSet(A, D, G, mode, a, f, v, rho)


def radius(cs: CorrectorSet) -> float:
    return cs.rho


def in_radius(X: Matrix, cs: CorrectorSet) -> bool:
    return matrix_norm(X) < cs.rho


def tau1_factor(cs: CorrectorSet) -> float:
    """24 sqrt(n) (a + 1) f^2, so that tau_1(eps) = eps / factor."""
    return 24.0 * math.sqrt(cs.n) * (cs.a + 1.0) * cs.f * cs.f


def epsilon_for(X: Matrix, cs: CorrectorSet, margin: float = DEFAULT_MARGIN) -> float:
    """Smallest eps in (0, 1/2] (up to ``margin``) with ||X|| < eps / (24 sqrt(n) (a+1) f^2)."""
    nx = matrix_norm(X)
    if nx >= cs.rho:
        raise OutsideRadius(f"||X|| = {nx:.6g} is not below the radius {cs.rho:.6g}", norm=nx, rho=cs.rho)
    eps = min(0.5, nx * tau1_factor(cs) * (1.0 + margin))
    return max(eps, margin)


def corrector_residual(cs: CorrectorSet, i: int, j: int) -> Matrix:
    """E_ij + F_ij A - A F_ij, which must vanish off the pattern."""
    A = cs.A
    F = cs.F(i, j)
    E = Matrix.unit(cs.field, cs.n, i, j)
    return E + F @ A - A @ F
