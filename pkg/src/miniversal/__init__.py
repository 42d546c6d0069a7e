"""Miniversal deformations of matrices over complete valued fields.

Given a square matrix A over C, Q_p or F((T)), the package finds a star
pattern D complementing the tangent space of the similarity orbit of A,
solves for the corrector matrices, and reduces every nearby A + X to
A + D(X) by an explicitly convergent product of similarities.
"""

from .correctors import CorrectorSet, epsilon_for, solve_correctors
from .errors import (
    AmbiguousRank,
    DivisionByZero,
    InconsistentSystem,
    MiniversalError,
    MonitorViolation,
    NoConvergence,
    NotAComplement,
    OutsideRadius,
    PrecisionExhausted,
    SingularMatrix,
    SpecError,
    UnsupportedMode,
)
from .estimator import MiniversalDeformation
from .fields import ComplexField, LaurentField, PadicField, absolute_value, field_from_config
from .matrices import Matrix, charpoly, commutator_operator, gauss_rank, invert, matrix_norm, solve_linear
from .oracle import LemmaCase, codim, lemma42_check, pair_tangent_dim
from .patterns import (
    BlockGroup,
    BlockSpec,
    StarPattern,
    canonical_pattern,
    certify_pattern,
    greedy_pattern,
    offpattern_norm,
)
from .reducer import ReductionResult, reduce, verify_reduction

__version__ = "0.1.0"

__all__ = [
    "AmbiguousRank",
    "BlockGroup",
    "BlockSpec",
    "ComplexField",
    "CorrectorSet",
    "DivisionByZero",
    "InconsistentSystem",
    "LaurentField",
    "LemmaCase",
    "Matrix",
    "MiniversalDeformation",
    "MiniversalError",
    "MonitorViolation",
    "NoConvergence",
    "NotAComplement",
    "OutsideRadius",
    "PadicField",
    "PrecisionExhausted",
    "ReductionResult",
    "SingularMatrix",
    "SpecError",
    "StarPattern",
    "UnsupportedMode",
    "absolute_value",
    "canonical_pattern",
    "certify_pattern",
    "charpoly",
    "codim",
    "commutator_operator",
    "epsilon_for",
    "field_from_config",
    "gauss_rank",
    "greedy_pattern",
    "invert",
    "lemma42_check",
    "matrix_norm",
    "offpattern_norm",
    "pair_tangent_dim",
    "reduce",
    "solve_correctors",
    "solve_linear",
    "verify_reduction",
]
