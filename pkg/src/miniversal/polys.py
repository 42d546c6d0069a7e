"""Univariate polynomials as coefficient lists, leading coefficient first."""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .fields import ComplexField, Field, LaurentField, LaurentSeries, PadicField, PadicNumber
from .matrices import Matrix


def poly_embed(field: Field, coeffs) -> list:
    return [field.embed(c) if not isinstance(c, (PadicNumber, LaurentSeries)) else c for c in coeffs]


def poly_mul(field: Field, a, b) -> list:
    out = [field.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def poly_pow(field: Field, a, r: int) -> list:
    out = [field.one()]
    for _ in range(r):
        out = poly_mul(field, out, a)
    return out


def is_monic(field: Field, coeffs) -> bool:
    return bool(coeffs) and field.is_zero(field.embed(coeffs[0]) - field.one())


def companion(field: Field, coeffs) -> Matrix:
    """Frobenius block of the monic polynomial x^m + c1 x^(m-1) + ... + cm.

    Ones on the superdiagonal, last row ``-cm ... -c1``.
    """
    cs = poly_embed(field, coeffs)
    if not is_monic(field, cs):
        raise ValueError("companion matrix needs a monic polynomial")
    m = len(cs) - 1
    M = Matrix.zeros(field, m)
    one = field.one()
    for i in range(m - 1):
        M.data[i, i + 1] = one
    for j in range(m):
        M.data[m - 1, j] = -cs[m - j]
    return M


def frobenius_block(field: Field, poly, size: int) -> Matrix:
    """Companion matrix of ``poly**r`` where ``size = r * deg(poly)``."""
    d = len(poly) - 1
    if d < 1 or size % d:
        raise ValueError(f"block size {size} is not a multiple of deg p = {d}")
    return companion(field, poly_pow(field, poly_embed(field, poly), size // d))


def _rational_coeffs(coeffs):
    try:
        return [Fraction(c) for c in coeffs]
    except (TypeError, ValueError):
        return None


def _rational_roots(cs: list[Fraction]) -> bool:
    """True iff the rational polynomial has a rational root."""
    from math import lcm

    den = 1
    for c in cs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in cs]
    if ints[-1] == 0:
        return True
    lead, const = abs(ints[0]), abs(ints[-1])
    divs = lambda n: [d for d in range(1, n + 1) if n % d == 0]  # noqa: E731
    for pnum in divs(const):
        for qden in divs(lead):
            for s in (1, -1):
                x = Fraction(s * pnum, qden)
                v = Fraction(0)
                for c in cs:
                    v = v * x + c
                if v == 0:
                    return True
    return False


def _roots_mod(ints: list[int], q: int) -> list[int]:
    roots = []
    for x in range(q):
        v = 0
        for c in ints:
            v = (v * x + c) % q
        if v == 0:
            roots.append(x)
    return roots


def _deriv_at(ints, x, q):
    d = len(ints) - 1
    v = 0
    for i, c in enumerate(ints[:-1]):
        v = (v * x + c * (d - i)) % q
    return v


def is_irreducible(field: Field, coeffs):
    """Irreducibility of a monic polynomial over ``field``.

    Returns True/False when decidable and None otherwise (the caller's
    assertion is then accepted).  Decided cases: degree 1; the complex
    field; degree <= 3 with constant coefficients over Laurent series
    (root test over Q or GF(q)); over Q_p, monic p-integral polynomials
    that are irreducible mod p or have a simple root mod p.
    """
    d = len(coeffs) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    if isinstance(field, ComplexField):
        return False
    cs = _rational_coeffs(coeffs)
    if cs is None:
        return None
    if isinstance(field, LaurentField):
        if d > 3:
            return None
        if field.q is None:
            return not _rational_roots(cs)
        ints = [int(field.coeff(c)) for c in cs]
        return not _roots_mod(ints, field.q)
    if isinstance(field, PadicField):
        p = field.p
        if any(c.denominator % p == 0 for c in cs):
            return None
        ints = [c.numerator * pow(c.denominator, -1, p) % p for c in cs]
        roots = _roots_mod(ints, p)
        if any(_deriv_at(ints, r, p) != 0 for r in roots):
            return False
        if d <= 3 and not roots:
            return True
        if d > 3 and _irreducible_mod_p(ints, p):
            return True
        return None
    return None


def _irreducible_mod_p(ints, p) -> bool:
    """Brute force over monic factors of degree <= d/2 (tiny p and d only)."""
    d = len(ints) - 1
    if p ** (d // 2) > 5000:
        return False
    for k in range(1, d // 2 + 1):
        for tail in product(range(p), repeat=k):
            g = [1, *tail]
            r = list(ints)
            for i in range(len(r) - k):
                c = r[i]
                if c:
                    for j in range(k + 1):
                        r[i + j] = (r[i + j] - c * g[j]) % p
            if not any(r[-k:]):
                return False
    return True
