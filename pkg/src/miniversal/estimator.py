"""Estimator-style front end: fit on A, transform nearby matrices to normal form.

``fit`` learns everything that depends on A alone (star pattern,
certificate, correctors, radius); ``transform`` then maps any B = A + X
with ||X|| < rho to A + D(X).
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_is_fitted

from .correctors import DEFAULT_MARGIN, CorrectorSet, solve_correctors
from .fields import ComplexField, Field, field_from_config
from .matrices import Matrix, as_matrix
from .patterns import (
    AMBIGUITY_BAND,
    BlockSpec,
    Certificate,
    StarPattern,
    canonical_pattern,
    certify_pattern,
    greedy_pattern,
)
from .reducer import DEFAULT_K_MAX, ReductionResult, VerificationReport, reduce, verify_reduction


def resolve_field(field) -> Field:
    if field is None:
        return ComplexField()
    if isinstance(field, Field):
        return field
    if isinstance(field, dict):
        return field_from_config(field)
    if field == "complex":
        return ComplexField()
    raise ValueError(f"cannot interpret {field!r} as a field")


def check_square(M, field: Field, name: str = "A") -> Matrix:
    """Coerce ``M`` to a square Matrix over ``field``."""
    if isinstance(M, Matrix):
        if M.field != field:
            raise ValueError(f"{name} lives over {M.field!r}, expected {field!r}")
        out = M
    else:
        out = as_matrix(M, field)
    if out.data.ndim != 2 or out.shape[0] != out.shape[1] or out.shape[0] == 0:
        raise ValueError(f"{name} must be a non-empty square matrix, got shape {out.data.shape}")
    return out


class MiniversalDeformation(BaseEstimator, TransformerMixin):
    """Reduce matrices near A to the miniversal normal form A + D(X).

    Parameters
    ----------
    field : Field, config dict, "complex" or None
        Scalar backend; None means complex doubles.
    pattern : "auto", "greedy", "canonical" or StarPattern
        "auto" uses the closed-form pattern when fitting on a BlockSpec
        and the greedy construction otherwise.
    mode : "min_norm", "particular" or None
        Corrector solve; None picks min_norm on complex, particular otherwise.
    tol_stop, k_max, margin : reducer controls.
    rank_tol : float or None
        Rank tolerance on the complex backend.
    certify : bool
        Rank-check the pattern before solving for correctors.
    """

    def __init__(
        self,
        field=None,
        pattern="auto",
        mode=None,
        tol_stop=None,
        k_max=DEFAULT_K_MAX,
        margin=DEFAULT_MARGIN,
        rank_tol=None,
        certify=True,
    ):
        self.field = field
        self.pattern = pattern
        self.mode = mode
        self.tol_stop = tol_stop
        self.k_max = k_max
        self.margin = margin
        self.rank_tol = rank_tol
        self.certify = certify

    def fit(self, A, y=None):
        """Learn pattern, correctors and radius for ``A`` (a matrix or a BlockSpec)."""
        field = resolve_field(self.field)
        spec = None
        if isinstance(A, BlockSpec):
            spec = A
            build = canonical_pattern(spec, field)
            A = build.A
        else:
            A = check_square(A, field)
        if isinstance(self.pattern, StarPattern):
            D = self.pattern
            if D.n != A.shape[0]:
                raise ValueError(f"pattern is {D.n}x{D.n} but A is {A.shape[0]}x{A.shape[0]}")
        elif self.pattern == "canonical" or (self.pattern == "auto" and spec is not None):
            if spec is None:
                raise ValueError("the canonical pattern needs a BlockSpec input")
            D = build.pattern
        elif self.pattern in ("greedy", "auto"):
            D = greedy_pattern(A, self.rank_tol, AMBIGUITY_BAND)
        else:
            raise ValueError(f"unknown pattern option {self.pattern!r}")
        self.certificate_: Certificate | None = certify_pattern(A, D, self.rank_tol) if self.certify else None
        self.A_ = A
        self.spec_ = spec
        self.pattern_ = D
        self.correctors_: CorrectorSet = solve_correctors(A, D, self.mode)
        self.radius_ = self.correctors_.rho
        self.n_features_in_ = A.shape[0]
        return self

    def perturbation(self, B) -> Matrix:
        check_is_fitted(self, "correctors_")
        B = check_square(B, self.A_.field, "B")
        if B.shape != self.A_.shape:
            raise ValueError(f"B has shape {B.shape}, A has {self.A_.shape}")
        return B - self.A_

    def reduce(self, B) -> ReductionResult:
        """Full reduction record for B = A + X."""
        X = self.perturbation(B)
        return reduce(self.A_, X, self.correctors_, self.tol_stop, self.k_max, self.margin)

    def transform(self, B):
        """Normal form S^{-1} B S = A + D(X); arrays in, arrays out."""
        res = self.reduce(B)
        N = self.A_ + res.Dres
        return N if isinstance(B, Matrix) else N.data

    def verify(self, B, res: ReductionResult) -> VerificationReport:
        X = self.perturbation(B)
        return verify_reduction(self.A_, X, res, self.pattern_)

    def __sklearn_is_fitted__(self):
        return hasattr(self, "correctors_")


__all__ = ["MiniversalDeformation", "NotFittedError", "check_square", "resolve_field"]
