"""Star patterns: direct complements of the tangent space T(A).

A pattern is a set of matrix positions (the stars).  The matrices supported
on the stars form a subspace D(F); a pattern is valid for A when
F^{n x n} = T(A) (+) D(F).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .errors import AmbiguousRank, NotAComplement, SpecError
from .fields import ComplexField, Field
from .matrices import Matrix, block_diag, commutator_operator, gauss_rank, matrix_norm
from .polys import frobenius_block, is_irreducible, is_monic, poly_embed


@dataclass(frozen=True)
class StarPattern:
    """Star positions of an n-by-n 0/* matrix, stored 0-based."""

    n: int
    stars: frozenset = dc_field(default_factory=frozenset)

    def __post_init__(self):
        stars = frozenset((int(i), int(j)) for i, j in self.stars)
        for i, j in stars:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"star ({i + 1}, {j + 1}) outside a {self.n}x{self.n} pattern")
        object.__setattr__(self, "stars", stars)

    def __len__(self):
        return len(self.stars)

    def __contains__(self, ij):
        return tuple(ij) in self.stars

    def mask(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.stars:
            m[i, j] = True
        return m

    def sorted_stars(self) -> list:
        return sorted(self.stars)

    def off_positions(self) -> list:
        return [(i, j) for i in range(self.n) for j in range(self.n) if (i, j) not in self.stars]

    def to_json(self) -> dict:
        return {"n": self.n, "stars": [[i + 1, j + 1] for i, j in self.sorted_stars()]}

    @classmethod
    def from_json(cls, obj) -> "StarPattern":
        return cls(int(obj["n"]), frozenset((int(i) - 1, int(j) - 1) for i, j in obj["stars"]))

    @classmethod
    def full(cls, n: int) -> "StarPattern":
        return cls(n, frozenset((i, j) for i in range(n) for j in range(n)))

    def render(self) -> str:
        m = self.mask()
        return "\n".join(" ".join("*" if x else "0" for x in row) for row in m)


# ---------------------------------------------------------------------------
# block specifications


@dataclass(frozen=True)
class BlockGroup:
    """Blocks sharing one label: an eigenvalue, a rotation pair (a, b) or a polynomial."""

    label: object
    sizes: tuple

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))


@dataclass(frozen=True)
class BlockSpec:
    kind: str  # "jordan" | "real_jordan" | "frobenius"
    groups: tuple

    def __post_init__(self):
        object.__setattr__(self, "kind", self.kind.replace("-", "_"))
        object.__setattr__(self, "groups", tuple(self.groups))

    @property
    def n(self) -> int:
        return sum(sum(g.sizes) for g in self.groups)

    def multiplicities(self) -> list:
        return [list(g.sizes) for g in self.groups]

    def to_json(self, field: Field | None = None) -> dict:
        groups = []
        for g in self.groups:
            if self.kind == "frobenius":
                groups.append({"poly": [_label_json(c, field) for c in g.label], "sizes": list(g.sizes)})
            elif _is_rotation(g.label):
                groups.append({"rotation": [_label_json(c, field) for c in g.label], "sizes": list(g.sizes)})
            else:
                groups.append({"eigenvalue": _label_json(g.label, field), "sizes": list(g.sizes)})
        return {"kind": self.kind, "groups": groups}

    @classmethod
    def from_json(cls, obj) -> "BlockSpec":
        kind = obj["kind"].replace("-", "_")
        groups = []
        for g in obj["groups"]:
            if "poly" in g:
                label = tuple(g["poly"])
            elif "rotation" in g:
                label = tuple(g["rotation"])
            else:
                ev = g["eigenvalue"]
                label = complex(ev[0], ev[1]) if isinstance(ev, list) else ev
            groups.append(BlockGroup(label, g["sizes"]))
        return cls(kind, groups)


def _label_json(x, field):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (int, float, str)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    return field.to_json(x) if field is not None else str(x)
    if isinstance(x, float):
        return x
    if field is not None:
        return field.to_json(field.embed(x))
    return str(x)


def _is_rotation(label) -> bool:
    return isinstance(label, tuple) and len(label) == 2


@dataclass
class CanonicalBuild:
    A: Matrix
    pattern: StarPattern
    spec: BlockSpec


def validate_spec(spec: BlockSpec, field: Field) -> None:
    """Raise SpecError naming the first violated invariant."""
    if spec.kind not in ("jordan", "real_jordan", "frobenius"):
        raise SpecError(f"unknown block kind {spec.kind!r}")
    if not spec.groups:
        raise SpecError("block spec has no groups")
    seen = []
    for g in spec.groups:
        if not g.sizes or any(s < 1 for s in g.sizes):
            raise SpecError("block sizes must be positive")
        if any(a < b for a, b in zip(g.sizes, g.sizes[1:])):
            raise SpecError(f"sizes {list(g.sizes)} are not weakly decreasing")
        if spec.kind == "frobenius":
            if not isinstance(g.label, (tuple, list)) or len(g.label) < 2:
                raise SpecError("frobenius groups need a polynomial of degree >= 1")
            poly = poly_embed(field, g.label)
            if not is_monic(field, poly):
                raise SpecError(f"polynomial {list(g.label)} is not monic")
            d = len(g.label) - 1
            if any(s % d for s in g.sizes):
                raise SpecError(f"sizes {list(g.sizes)} are not multiples of deg p = {d}")
            if is_irreducible(field, list(g.label)) is False:
                raise SpecError(f"polynomial {list(g.label)} is reducible over {field!r}")
            key = ("poly", poly)
        elif _is_rotation(g.label):
            if spec.kind != "real_jordan":
                raise SpecError("rotation blocks C_m(a, b) belong to real_jordan specs")
            if not field.archimedean:
                raise SpecError("real Jordan specs need the complex backend restricted to reals")
            a, b = (field.embed(x) for x in g.label)
            if a.imag or b.imag or not b.real > 0:
                raise SpecError("rotation blocks need real a and real b > 0")
            if any(s % 2 for s in g.sizes):
                raise SpecError(f"rotation block sizes {list(g.sizes)} must be even")
            key = ("rot", [a, b])
        else:
            if isinstance(g.label, (tuple, list)):
                raise SpecError(f"{spec.kind} groups need a scalar eigenvalue")
            lam = field.embed(g.label)
            if spec.kind == "real_jordan" and complex(lam).imag:
                raise SpecError("real Jordan eigenvalues must be real")
            key = ("ev", [lam])
        for tag, vals in seen:
            if tag == key[0] and len(vals) == len(key[1]):
                if all(field.is_zero(x - y) for x, y in zip(vals, key[1])):
                    raise SpecError("group labels must be pairwise distinct")
        seen.append(key)


def jordan_block(field: Field, lam, m: int) -> Matrix:
    lam = field.embed(lam)
    J = Matrix.zeros(field, m)
    one = field.one()
    for i in range(m):
        J.data[i, i] = lam
        if i + 1 < m:
            J.data[i, i + 1] = one
    return J


def rotation_block(field: Field, a, b, m: int) -> Matrix:
    """C_m(a, b): 2x2 blocks [[a, b], [-b, a]] on the diagonal, I_2 above it."""
    if m % 2:
        raise SpecError("rotation blocks have even size")
    a, b = field.embed(a), field.embed(b)
    C = Matrix.zeros(field, m)
    one = field.one()
    for k in range(0, m, 2):
        C.data[k, k] = a
        C.data[k, k + 1] = b
        C.data[k + 1, k] = -b
        C.data[k + 1, k + 1] = a
        if k + 2 < m:
            C.data[k, k + 2] = one
            C.data[k + 1, k + 3] = one
    return C


def _group_stars(sizes, offset):
    """0-down blocks on and above the diagonal, 0-left blocks below it."""
    stars = set()
    starts = np.concatenate([[0], np.cumsum(sizes)])
    k = len(sizes)
    for j in range(k):
        r0, rows = offset + int(starts[j]), sizes[j]
        for l in range(k):
            c0, cols = offset + int(starts[l]), sizes[l]
            if j <= l:
                stars.update((r0 + rows - 1, c0 + c) for c in range(cols))
            else:
                stars.update((r0 + r, c0) for r in range(rows))
    return stars


def canonical_pattern(spec: BlockSpec, field: Field | None = None) -> CanonicalBuild:
    """Assemble the canonical matrix of ``spec`` and its closed-form star pattern."""
    field = field or ComplexField()
    validate_spec(spec, field)
    blocks = []
    stars = set()
    offset = 0
    for g in spec.groups:
        for s in g.sizes:
            if spec.kind == "frobenius":
                blocks.append(frobenius_block(field, g.label, s))
            elif _is_rotation(g.label):
                blocks.append(rotation_block(field, g.label[0], g.label[1], s))
            else:
                blocks.append(jordan_block(field, g.label, s))
        stars |= _group_stars(list(g.sizes), offset)
        offset += sum(g.sizes)
    A = block_diag(field, blocks)
    return CanonicalBuild(A, StarPattern(offset, frozenset(stars)), spec)


# ---------------------------------------------------------------------------
# greedy construction


class _Span:
    """Incrementally row-reduced set of vectors, pivoting on the largest residual entry."""

    def __init__(self, field: Field, thresh: float, band: float):
        self.field = field
        self.thresh = thresh
        self.band = band
        self.rows = []
        self.pivots = []

    def insert(self, v) -> bool:
        field = self.field
        v = np.array(v, dtype=field.dtype)
        for c, row in zip(self.pivots, self.rows):
            x = v[c]
            if not field.is_zero(x):
                v = v - row * x
        v[self.pivots] = field.zero()
        mags = Matrix(v.reshape(1, -1), field).magnitudes()[0]
        c = int(np.argmax(mags))
        piv = mags[c]
        if piv == 0 or piv <= self.thresh:
            if self.band and piv > self.thresh / self.band:
                raise AmbiguousRank(
                    f"residual pivot {piv:.3e} within the tolerance band around {self.thresh:.3e}",
                    pivot=piv,
                )
            return False
        if self.band and piv <= self.thresh * self.band:
            raise AmbiguousRank(
                f"residual pivot {piv:.3e} within the tolerance band around {self.thresh:.3e}",
                pivot=piv,
            )
        self.rows.append(v * (1 / v[c]))
        self.pivots.append(c)
        return True


AMBIGUITY_BAND = 100.0


def greedy_pattern(A: Matrix, tol: float | None = None, band: float = AMBIGUITY_BAND) -> StarPattern:
    """Keep each matrix unit E_11, E_12, ..., E_nn (row-major order) that is not
    a combination of T(A) and the units kept before it."""
    field = A.field
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("A must be square")
    gens = commutator_operator(A).data.T
    scale = max(Matrix(gens, field).max_abs(), 1.0)
    if field.exact:
        thresh, band = 0.0, 0.0
    else:
        thresh = (field.default_rank_tol if tol is None else tol) * scale
    span = _Span(field, thresh, band)
    for g in gens:
        span.insert(g)
    stars = set()
    for i in range(n):
        for j in range(n):
            e = Matrix.unit(field, n, i, j).vec()
            if span.insert(e):
                stars.add((i, j))
    return StarPattern(n, frozenset(stars))


# ---------------------------------------------------------------------------
# certification


@dataclass(frozen=True)
class Certificate:
    dim_t: int
    star_count: int
    stacked_rank: int

    @property
    def codimension(self) -> int:
        return self.star_count

    def to_json(self) -> dict:
        return {"dimT": self.dim_t, "starCount": self.star_count, "stackedRank": self.stacked_rank}


def certify_pattern(A: Matrix, D: StarPattern, tol: float | None = None) -> Certificate:
    """Check F^{n x n} = T(A) (+) D(F) by two rank computations.

    Raises NotAComplement when dim T(A) + #stars != n^2 or the stacked basis
    of T(A) and the star units is rank deficient.
    """
    field = A.field
    n = A.shape[0]
    if D.n != n:
        raise ValueError(f"pattern is {D.n}x{D.n} but A is {n}x{n}")
    op = commutator_operator(A)
    dim_t = gauss_rank(op, tol)
    units = Matrix.zeros(field, len(D), n * n).data
    one = field.one()
    for r, (i, j) in enumerate(D.sorted_stars()):
        units[r, i * n + j] = one
    stacked = Matrix(np.concatenate([op.data.T, units], axis=0), field)
    rank = gauss_rank(stacked, tol)
    if dim_t + len(D) != n * n or rank != n * n:
        raise NotAComplement(
            f"not a complement: dim T(A) = {dim_t}, stars = {len(D)}, stacked rank = {rank}, n^2 = {n * n}",
            dim_t=dim_t,
            star_count=len(D),
            stacked_rank=rank,
        )
    return Certificate(dim_t, len(D), rank)


def offpattern_norm(M: Matrix, D: StarPattern) -> float:
    """Norm over the non-star coordinates only."""
    if D.n != M.shape[0] or M.shape[0] != M.shape[1]:
        raise ValueError("pattern and matrix sizes differ")
    masked = M.data.copy()
    zero = M.field.zero()
    for i, j in D.stars:
        masked[i, j] = zero
    return matrix_norm(Matrix(masked, M.field))


def project_off(M: Matrix, D: StarPattern) -> Matrix:
    """Copy of M with its star entries zeroed."""
    out = M.data.copy()
    zero = M.field.zero()
    for i, j in D.stars:
        out[i, j] = zero
    return Matrix(out, M.field)


def jordan_codimension(spec: BlockSpec) -> int:
    """Sum over groups of sum_{j,l} min(m_j, m_l)."""
    return sum(min(a, b) for g in spec.groups for a in g.sizes for b in g.sizes)


def pattern_of(spec_or_sizes) -> StarPattern:
    """Closed-form pattern from multiplicity lists alone."""
    if isinstance(spec_or_sizes, BlockSpec):
        groups = spec_or_sizes.multiplicities()
    else:
        groups = [list(g) for g in spec_or_sizes]
    stars, offset = set(), 0
    for sizes in groups:
        stars |= _group_stars(sizes, offset)
        offset += sum(sizes)
    return StarPattern(offset, frozenset(stars))


__all__ = [
    "StarPattern",
    "BlockGroup",
    "BlockSpec",
    "CanonicalBuild",
    "Certificate",
    "greedy_pattern",
    "canonical_pattern",
    "certify_pattern",
    "offpattern_norm",
    "project_off",
    "jordan_block",
    "rotation_block",
    "validate_spec",
    "jordan_codimension",
    "pattern_of",
]
