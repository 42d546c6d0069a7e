"""Exception types raised across the package."""


class MiniversalError(Exception):
    """Base class for all package errors."""


class DivisionByZero(MiniversalError, ZeroDivisionError):
    pass


class PrecisionExhausted(MiniversalError, ArithmeticError):
    """A truncated p-adic or Laurent computation has no significant digits left."""


class SingularMatrix(MiniversalError, ArithmeticError):
    pass


class InconsistentSystem(MiniversalError, ArithmeticError):
    pass


class UnsupportedMode(MiniversalError, ValueError):
    pass


class AmbiguousRank(MiniversalError, ArithmeticError):
    """A pivot fell inside the tolerance band around the rank cutoff."""

    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot


class SpecError(MiniversalError, ValueError):
    pass


class NotAComplement(MiniversalError):
    """The star pattern does not span a direct complement of T(A)."""

    def __init__(self, message, dim_t=None, star_count=None, stacked_rank=None):
        super().__init__(message)
        self.dim_t = dim_t
        self.star_count = star_count
        self.stacked_rank = stacked_rank


class OutsideRadius(MiniversalError, ValueError):
    def __init__(self, message, norm=None, rho=None):
        super().__init__(message)
        self.norm = norm
        self.rho = rho


class NoConvergence(MiniversalError):
    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class MonitorViolation(MiniversalError):
    def __init__(self, message, step=None, trace=None):
        super().__init__(message)
        self.step = step
        self.trace = trace
