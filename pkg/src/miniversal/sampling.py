"""Random scalars, matrices and perturbations for every backend.

The generator is seeded from ``MINIVERSAL_SEED`` unless a seed is passed.
On non-Archimedean fields norms take discrete values, so a perturbation
"of norm t" is the largest available norm not exceeding t: the sample is
rescaled by powers of p (or T) until it fits.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

import numpy as np

from .fields import ComplexField, Field, LaurentField, PadicField
from .matrices import Matrix, matrix_norm

SEED_ENV = "MINIVERSAL_SEED"


def make_rng(seed: int | None = None) -> np.random.Generator:
    if seed is None:
        seed = int(os.environ.get(SEED_ENV, "0"))
    return np.random.default_rng(seed)


def random_scalar(field: Field, rng: np.random.Generator, vmin: int = -3, vmax: int = 3):
    """A random nonzero element with valuation drawn from [vmin, vmax] where that makes sense."""
    if isinstance(field, ComplexField):
        return complex(*rng.standard_normal(2)) * 10.0 ** rng.integers(vmin, vmax + 1)
    v = int(rng.integers(vmin, vmax + 1))
    if isinstance(field, PadicField):
        p = field.p
        num = int(rng.integers(1, 10 * p))
        while num % p == 0:
            num = int(rng.integers(1, 10 * p))
        den = int(rng.integers(1, 10 * p))
        while den % p == 0:
            den = int(rng.integers(1, 10 * p))
        sign = 1 if rng.random() < 0.5 else -1
        return field.embed(Fraction(sign * num, den) * Fraction(p) ** v)
    if isinstance(field, LaurentField):
        terms = int(rng.integers(1, 4))
        coeffs = [_random_coeff(field, rng, nonzero=(i == 0)) for i in range(terms)]
        return field.from_coeffs(v, coeffs)
    raise TypeError(f"no sampler for {field!r}")


def _random_coeff(field: LaurentField, rng, nonzero: bool = False):
    if field.q is not None:
        lo = 1 if nonzero else 0
        return int(rng.integers(lo, field.q))
    while True:
        c = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
        if c or not nonzero:
            return c


def _small_int_matrix(n: int, rng, lo: int = -3, hi: int = 3) -> np.ndarray:
    return rng.integers(lo, hi + 1, size=(n, n))


def _embed_ints(field: Field, ints) -> Matrix:
    return Matrix.from_rows(field, [[field.embed(int(x)) for x in row] for row in ints])


def _unimodular(n: int, rng) -> tuple[np.ndarray, np.ndarray]:
    """A random integer matrix with determinant 1 and its integer inverse."""
    L = np.tril(rng.integers(-1, 2, size=(n, n)), -1) + np.eye(n, dtype=int)
    U = np.triu(rng.integers(-1, 2, size=(n, n)), 1) + np.eye(n, dtype=int)
    Li = np.rint(np.linalg.inv(L)).astype(int)
    Ui = np.rint(np.linalg.inv(U)).astype(int)
    return L @ U, Ui @ Li


def random_structured(field: Field, n: int, rng) -> Matrix:
    """A conjugate of a random Jordan-type matrix with repeated small integer eigenvalues.

    Conjugation is by an integer unimodular matrix, so the entries stay
    integers and the similarity class (hence the codimension) is known exactly.
    """
    J = np.zeros((n, n), dtype=int)
    eigs = rng.integers(-1, 2, size=n)
    eigs.sort()
    for i in range(n):
        J[i, i] = eigs[i]
        if i + 1 < n and eigs[i] == eigs[i + 1] and rng.random() < 0.6:
            J[i, i + 1] = 1
    P, Pi = _unimodular(n, rng)
    return _embed_ints(field, Pi @ J @ P)


def random_matrix(field: Field, n: int, rng, kind: str = "mixed") -> Matrix:
    """Random test matrix: ``dense`` small integers, ``structured`` conjugated Jordan forms, or ``mixed``."""
    if kind == "mixed":
        kind = "structured" if rng.random() < 0.6 else "dense"
    if kind == "structured":
        return random_structured(field, n, rng)
    if kind == "dense":
        return _embed_ints(field, _small_int_matrix(n, rng, -1 if rng.random() < 0.5 else -3, 3))
    raise ValueError(f"unknown kind {kind!r}")


def _raw_perturbation(field: Field, n: int, rng) -> Matrix:
    if isinstance(field, ComplexField):
        return Matrix(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)), field)
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            if rng.random() < 0.15:
                row.append(field.zero())
            else:
                row.append(random_scalar(field, rng, 0, 2))
        rows.append(row)
    return Matrix.from_rows(field, rows)


def scale_to_norm(X: Matrix, target: float) -> Matrix:
    """Rescale X to norm ``target`` (complex) or the largest reachable norm <= ``target``."""
    field = X.field
    nx = matrix_norm(X)
    if nx == 0:
        return X
    if isinstance(field, ComplexField):
        Y = Matrix(X.data * (target / nx), field)
        while matrix_norm(Y) > target:
            Y = Matrix(Y.data * (1.0 - 1e-15), field)
        return Y
    base = field.magnitude_base
    if isinstance(field, PadicField):
        unit = field.embed(field.p)
    else:
        unit = field.monomial(1, 1)
    k = math.floor(math.log(nx / target, base))
    scale = unit**k if k >= 0 else unit.inverse() ** (-k)
    Y = X * scale
    while matrix_norm(Y) > target:
        Y = Y * unit
    return Y


def random_perturbation(field: Field, n: int, target: float, rng) -> Matrix:
    return scale_to_norm(_raw_perturbation(field, n, rng), target)


__all__ = [
    "SEED_ENV",
    "make_rng",
    "random_scalar",
    "random_matrix",
    "random_structured",
    "random_perturbation",
    "scale_to_norm",
]
