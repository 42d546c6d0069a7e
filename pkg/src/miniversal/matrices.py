"""Dense matrices over any field backend.

A :class:`Matrix` wraps a 2-D numpy array (``complex128`` for the complex
backend, ``object`` for the exact backends) together with its field.
Elimination routines pivot on the entry of largest absolute value; on the
non-Archimedean backends that is the entry of least valuation.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InconsistentSystem, SingularMatrix, UnsupportedMode
from .fields import ComplexField, Field


def _magnitudes(field: Field, arr: np.ndarray) -> np.ndarray:
    """Absolute values as a float array (zero exactly where the entry is zero)."""
    if field.archimedean:
        return np.abs(arr)
    out = np.zeros(arr.size, dtype=float)
    base = field.magnitude_base
    for k, x in enumerate(arr.ravel()):
        if x:
            out[k] = max(base ** (-x.val), 5e-324)
    return out.reshape(arr.shape)


class Matrix:
    """An m-by-n matrix with entries in ``field``."""

    __slots__ = ("field", "data")

    def __init__(self, data, field: Field):
        arr = np.asarray(data, dtype=field.dtype)
        if arr.ndim != 2:
            raise ValueError("matrix data must be two-dimensional")
        self.field = field
        self.data = arr

    # construction -----------------------------------------------------------

    @classmethod
    def from_rows(cls, field: Field, rows) -> "Matrix":
        rows = [list(r) for r in rows]
        m = len(rows)
        n = len(rows[0]) if m else 0
        if any(len(r) != n for r in rows):
            raise ValueError("ragged matrix rows")
        arr = np.empty((m, n), dtype=field.dtype)
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                arr[i, j] = field.embed(x)
        return cls(arr, field)

    @classmethod
    def zeros(cls, field: Field, m: int, n: int | None = None) -> "Matrix":
        n = m if n is None else n
        if field.dtype is object:
            arr = np.empty((m, n), dtype=object)
            arr.fill(field.zero())
        else:
            arr = np.zeros((m, n), dtype=field.dtype)
        return cls(arr, field)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        M = cls.zeros(field, n)
        one = field.one()
        for i in range(n):
            M.data[i, i] = one
        return M

    @classmethod
    def unit(cls, field: Field, n: int, i: int, j: int, m: int | None = None) -> "Matrix":
        """Matrix unit E_ij (0-based indices) of shape n-by-n, or n-by-m."""
        M = cls.zeros(field, n, m)
        M.data[i, j] = field.one()
        return M

    @classmethod
    def from_vec(cls, field: Field, v, m: int, n: int) -> "Matrix":
        return cls(np.asarray(v, dtype=field.dtype).reshape(m, n), field)

    # basic protocol ---------------------------------------------------------

    @property
    def shape(self):
        return self.data.shape

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def copy(self) -> "Matrix":
        return Matrix(self.data.copy(), self.field)

    def __getitem__(self, idx):
        return self.data[idx]

    def vec(self) -> np.ndarray:
        """Row-major vectorization."""
        return self.data.reshape(-1).copy()

    @property
    def T(self) -> "Matrix":
        return Matrix(self.data.T.copy(), self.field)

    def _check(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if other.field != self.field:
            raise TypeError("matrices over different fields")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Matrix(self.data + other.data, self.field)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Matrix(self.data - other.data, self.field)

    def __neg__(self):
        return Matrix(-self.data, self.field)

    def __matmul__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return Matrix(self.data @ other.data, self.field)

    def __mul__(self, scalar):
        if isinstance(scalar, Matrix):
            return NotImplemented
        if _is_literal(scalar):
            scalar = self.field.embed(scalar)
        return Matrix(self.data * scalar, self.field)

    __rmul__ = __mul__

    def __repr__(self):
        return f"Matrix({self.data.tolist()!r}, {self.field!r})"

    # predicates -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.magnitudes().any()

    def magnitudes(self) -> np.ndarray:
        return _magnitudes(self.field, self.data)

    def max_abs(self) -> float:
        mags = self.magnitudes()
        return float(mags.max()) if mags.size else 0.0

    def allclose(self, other: "Matrix", atol: float = 0.0) -> bool:
        """Entrywise agreement: exact (at retained precision) when ``atol == 0``."""
        return (self - other).max_abs() <= atol

    def trace(self):
        s = self.field.zero()
        for i in range(min(self.shape)):
            s = s + self.data[i, i]
        return s

    def to_json(self):
        return [[self.field.to_json(x) for x in row] for row in self.data]

    @classmethod
    def from_json(cls, field: Field, rows) -> "Matrix":
        arr = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=field.dtype)
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                arr[i, j] = field.from_json(x)
        return cls(arr, field)


def _is_literal(x) -> bool:
    from fractions import Fraction

    return isinstance(x, (int, Fraction, np.integer)) and not isinstance(x, bool)


def as_matrix(M, field: Field | None = None) -> Matrix:
    if isinstance(M, Matrix):
        return M
    if field is None:
        field = ComplexField()
    return Matrix.from_rows(field, M)


# ---------------------------------------------------------------------------
# norms


def matrix_norm(M: Matrix) -> float:
    """sqrt of the sum of squared absolute values of the entries."""
    if M.field.archimedean:
        return float(np.sqrt(np.sum(np.abs(M.data) ** 2)))
    total = sum((abs(x) ** 2 for x in M.data.ravel() if x), start=0)
    return math.sqrt(total)


def vector_norm(field: Field, v) -> float:
    return matrix_norm(Matrix(np.asarray(v, dtype=field.dtype).reshape(1, -1), field))


# ---------------------------------------------------------------------------
# elimination


def _threshold(field: Field, scale: float, tol: float | None) -> float:
    if tol is None:
        tol = field.default_rank_tol
    if field.exact:
        return 0.0
    return tol * scale


def gauss_rank(M: Matrix, tol: float | None = None) -> int:
    """Rank by elimination with complete pivoting on absolute value.

    A pivot counts iff its absolute value exceeds ``tol`` times the largest
    initial entry; exact backends always use ``tol = 0``.
    """
    field = M.field
    a = M.data.copy()
    mags = _magnitudes(field, a)
    if not mags.size:
        return 0
    thresh = _threshold(field, float(mags.max()), tol)
    m, n = a.shape
    rank = 0
    for r in range(min(m, n)):
        sub = mags[r:, r:]
        i, j = divmod(int(np.argmax(sub)), sub.shape[1])
        piv = sub[i, j]
        if piv <= thresh or piv == 0:
            break
        i += r
        j += r
        a[[r, i]] = a[[i, r]]
        a[:, [r, j]] = a[:, [j, r]]
        p = a[r, r]
        if r + 1 < m:
            factors = a[r + 1 :, r] / p
            a[r + 1 :, r + 1 :] = a[r + 1 :, r + 1 :] - np.outer(factors, a[r, r + 1 :])
            mags = np.zeros_like(mags)
            mags[r + 1 :, r + 1 :] = _magnitudes(field, a[r + 1 :, r + 1 :])
        rank += 1
    return rank


def _rref(a: np.ndarray, field: Field, ncols: int, thresh: float):
    """In-place reduced row echelon form on the first ``ncols`` columns.

    Columns are scanned left to right; within a column the row pivot is the
    entry of largest absolute value.  Returns the list of pivot columns.
    """
    m = a.shape[0]
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= m:
            break
        mags = _magnitudes(field, a[r:, c])
        i = int(np.argmax(mags))
        if mags[i] <= thresh or mags[i] == 0:
            continue
        i += r
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = 1 / a[r, c]
        a[r] = a[r] * inv
        others = [k for k in range(m) if k != r]
        if others:
            factors = a[others, c].copy()
            a[others] = a[others] - np.outer(factors, a[r])
        pivots.append(c)
        r += 1
    return pivots


def solve_linear(M: Matrix, b, mode: str = "particular", tol: float | None = None) -> np.ndarray:
    """Solve ``M x = b``.

    ``b`` may be a vector or a 2-D array of right-hand sides (one per column).
    ``particular`` sets free variables to zero after left-to-right
    elimination; ``min_norm`` (complex only) returns the least-norm solution.
    """
    field = M.field
    b = np.asarray(b, dtype=field.dtype)
    single = b.ndim == 1
    B = b.reshape(-1, 1) if single else b
    m, n = M.shape
    if B.shape[0] != m:
        raise ValueError("right-hand side has the wrong length")
    mode = mode.replace("-", "_")
    if mode == "min_norm":
        if field.exact:
            raise UnsupportedMode("min_norm solving needs the complex backend")
        X, *_ = np.linalg.lstsq(M.data, B, rcond=None)
        resid = np.abs(M.data @ X - B).max() if B.size else 0.0
        scale = (np.abs(M.data).max() if M.data.size else 0.0) * (np.abs(X).max() if X.size else 0.0)
        scale = max(scale, np.abs(B).max() if B.size else 0.0, 1.0)
        if resid > 1e-9 * scale:
            raise InconsistentSystem(f"least-squares residual {resid:.3e} is not zero")
        return X[:, 0] if single else X
    if mode != "particular":
        raise UnsupportedMode(f"unknown solve mode {mode!r}")
    aug = np.concatenate([M.data, B], axis=1).copy()
    scale = max(float(_magnitudes(field, M.data).max()) if M.data.size else 0.0, 0.0)
    thresh = _threshold(field, scale, tol)
    pivots = _rref(aug, field, n, thresh)
    rest = aug[len(pivots) :, n:]
    if rest.size:
        rmags = _magnitudes(field, rest)
        bscale = max(scale, float(_magnitudes(field, B).max()), 1.0)
        if rmags.max() > _threshold(field, bscale, tol if tol is not None else 1e-9):
            raise InconsistentSystem("system has no solution")
    X = Matrix.zeros(field, n, B.shape[1]).data
    for r, c in enumerate(pivots):
        X[c] = aug[r, n:]
    return X[:, 0] if single else X


def invert(M: Matrix) -> Matrix:
    """Inverse by Gauss-Jordan elimination with partial pivoting."""
    field = M.field
    n, m = M.shape
    if n != m:
        raise ValueError("only square matrices can be inverted")
    aug = np.concatenate([M.data, Matrix.identity(field, n).data], axis=1)
    scale = M.max_abs()
    thresh = 0.0 if field.exact else 64 * np.finfo(float).eps * n * scale
    if scale == 0:
        raise SingularMatrix("zero matrix")
    pivots = _rref(aug, field, n, thresh)
    if len(pivots) < n:
        raise SingularMatrix(f"matrix has rank {len(pivots)} < {n}")
    return Matrix(aug[:, n:].copy(), field)


def determinant(M: Matrix):
    cp = charpoly(M)
    n = M.shape[0]
    return cp[-1] if n % 2 == 0 else -cp[-1]


def charpoly(M: Matrix) -> list:
    """Characteristic polynomial coefficients, leading 1 first (Berkowitz, division free)."""
    field = M.field
    a = M.data
    n = a.shape[0]
    one, zero = field.one(), field.zero()
    coeffs = [one]
    if n == 0:
        return coeffs
    coeffs = [one, -a[0, 0]]
    for r in range(1, n):
        A_r = a[:r, :r]
        R = a[r, :r]
        c = a[:r, r]
        col = [one, -a[r, r]]
        w = c.copy()
        for _ in range(r):
            s = zero
            for x, y in zip(R, w):
                s = s + x * y
            col.append(-s)
            w = A_r @ w
        new = []
        for i in range(r + 2):
            s = zero
            for j in range(min(i, r) + 1):
                if i - j < len(col):
                    s = s + col[i - j] * coeffs[j]
            new.append(s)
        coeffs = new
    return coeffs


# ---------------------------------------------------------------------------
# commutator operator


def commutator_operator(P: Matrix, Q: Matrix | None = None) -> Matrix:
    """Matrix of X -> XQ - PX acting on row-major vec(X), X of shape m-by-n.

    With a single argument this is X -> XA - AX, whose image is T(A).
    Column ``k*n + l`` is vec of the image of the unit E_kl.
    """
    if Q is None:
        Q = P
    field = P.field
    m, n = P.shape[0], Q.shape[0]
    out = Matrix.zeros(field, m * n).data
    for k in range(m):
        for l in range(n):
            Z = Matrix.zeros(field, m, n).data
            Z[k, :] = Z[k, :] + Q.data[l, :]
            Z[:, l] = Z[:, l] - P.data[:, k]
            out[:, k * n + l] = Z.reshape(-1)
    return Matrix(out, field)


def tangent_basis_rows(A: Matrix) -> np.ndarray:
    """Rows vec(E_kl A - A E_kl) spanning T(A)."""
    return commutator_operator(A).data.T.copy()


def block_diag(field: Field, blocks) -> Matrix:
    blocks = list(blocks)
    n = sum(b.shape[0] for b in blocks)
    out = Matrix.zeros(field, n)
    k = 0
    for b in blocks:
        s = b.shape[0]
        out.data[k : k + s, k : k + s] = b.data
        k += s
    return out
