"""The reducing iteration and its runtime bound monitors.

Starting from M_1 = X, each step forms C_k = sum m_ij^(k) F_ij and

    A + M_{k+1} = (I - C_k)^{-1} (A + M_k) (I - C_k),

accumulating S = (I - C_1)(I - C_2)...  For ||X|| < eps / (24 sqrt(n)(a+1) f^2)
the iterates obey

    ||M_k|| < tau_k,   ||M_k||_D < delta_k,   ||C_k|| <= delta_k f,

with tau_1 = delta_1 = eps / (8 f v), tau_{k+1} = tau_k + delta_k v and
delta_{k+1} = delta_k eps.  Every step is checked against these bounds.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field as dc_field

import numpy as np

from .correctors import DEFAULT_MARGIN, CorrectorSet, epsilon_for
from .errors import MonitorViolation, NoConvergence
from .matrices import Matrix, charpoly, determinant, invert, matrix_norm
from .patterns import StarPattern, offpattern_norm

DEFAULT_K_MAX = 200


def _omega(k: int, eps: float) -> float:
    """Tail product prod_{i >= k} (1 + eps^i), multiplied until a factor is within 1e-16 of 1."""
    prod = 1.0
    term = eps**k
    while term > 1e-16:
        prod *= 1.0 + term
        term *= eps
    return prod


def product_bound(eps: float) -> float:
    """-1 + (1 + eps)(1 + eps^2)(1 + eps^3)..."""
    return _omega(1, eps) - 1.0


@dataclass(frozen=True)
class TraceRow:
    k: int
    norm_M: float
    norm_M_D: float
    delta_k: float
    tau_k: float
    norm_C: float

    def as_tuple(self):
        return (self.k, self.norm_M, self.norm_M_D, self.delta_k, self.tau_k, self.norm_C)


TRACE_COLUMNS = ("k", "norm_M", "norm_M_D", "delta_k", "tau_k", "norm_C")


@dataclass
class IterationState:
    k: int
    M: Matrix
    S: Matrix
    delta: float
    tau: float
    eps: float
    C: Matrix | None = None


@dataclass
class ReductionResult:
    S: Matrix
    Dres: Matrix
    converged: bool
    steps: int
    trace: list
    epsilon: float
    delta_1: float
    bounds: dict = dc_field(default_factory=dict)

    def trace_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for row in self.trace:
            w.writerow([row.k, *(repr(float(x)) for x in row.as_tuple()[1:])])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "S": self.S.to_json(),
            "D": self.Dres.to_json(),
            "converged": self.converged,
            "steps": self.steps,
            "epsilon": self.epsilon,
            "delta_1": self.delta_1,
            "bounds": dict(self.bounds),
            "trace": [dict(zip(TRACE_COLUMNS, r.as_tuple())) for r in self.trace],
        }


def _slack(cs: CorrectorSet, *norms: float) -> float:
    """Rounding allowance for monitor comparisons (zero on exact backends)."""
    if cs.field.exact:
        return 0.0
    return 64.0 * np.finfo(float).eps * cs.n * (1.0 + cs.a + sum(norms))


def _check_monitors(state: IterationState, cs: CorrectorSet, trace) -> tuple[float, float]:
    nm = matrix_norm(state.M)
    nd = offpattern_norm(state.M, cs.pattern)
    slack = _slack(cs, nm)
    if not nm < state.tau + slack:
        raise MonitorViolation(f"step {state.k}: ||M_k|| = {nm:.6g} >= tau_k = {state.tau:.6g}", state.k, trace)
    if not nd < state.delta + slack:
        raise MonitorViolation(
            f"step {state.k}: ||M_k||_D = {nd:.6g} >= delta_k = {state.delta:.6g}", state.k, trace
        )
    return nm, nd


def initial_state(X: Matrix, cs: CorrectorSet, margin: float = DEFAULT_MARGIN) -> IterationState:
    eps = epsilon_for(X, cs, margin)
    delta1 = eps / (8.0 * cs.f * cs.v)
    return IterationState(1, X, Matrix.identity(cs.field, cs.n), delta1, delta1, eps)


def step(state: IterationState, cs: CorrectorSet) -> IterationState:
    """One similarity step; returns the state for k + 1 (monitors not yet checked)."""
    field = cs.field
    n = cs.n
    A = cs.A
    C = cs.combine(state.M)
    nc = matrix_norm(C)
    if not nc < 1.0:
        raise MonitorViolation(f"step {state.k}: ||C_k|| = {nc:.6g} is not below 1", state.k)
    I = Matrix.identity(field, n)
    Ak = A + state.M
    inv = invert(I - C)
    M_next = state.M + inv @ (C @ Ak - Ak @ C)
    S_next = state.S @ (I - C)
    state.C = C
    return IterationState(
        state.k + 1,
        M_next,
        S_next,
        state.delta * state.eps,
        state.tau + state.delta * cs.v,
        state.eps,
    )


def default_tol_stop(cs: CorrectorSet) -> float:
    return 0.0 if cs.field.exact else 1e-12 * (1.0 + cs.a)


def reduce(
    A: Matrix,
    X: Matrix,
    cs: CorrectorSet,
    tol_stop: float | None = None,
    k_max: int = DEFAULT_K_MAX,
    margin: float = DEFAULT_MARGIN,
) -> ReductionResult:
    """Reduce A + X to A + D(X) with D(X) supported on the stars.

    Raises OutsideRadius when ||X|| >= rho, NoConvergence when ``k_max``
    steps leave an off-pattern residual above ``tol_stop`` and
    MonitorViolation when a step breaks the certified bounds.
    """
    field = cs.field
    if A is not cs.A and not (A.field == field and A.shape == cs.A.shape and (A - cs.A).is_zero()):
        raise ValueError("correctors were computed for a different A")
    if X.field != field or X.shape != A.shape:
        raise ValueError("perturbation must match A in size and field")
    if tol_stop is None:
        tol_stop = default_tol_stop(cs)
    state = initial_state(X, cs, margin)
    eps, delta1 = state.eps, state.delta
    floor = field.ulp() * field.ulp() if field.exact else 0.0
    trace = []
    converged = False
    while True:
        nm, nd = _check_monitors(state, cs, trace)
        done = nd <= tol_stop
        if done or state.k >= k_max or (field.exact and state.delta < floor):
            trace.append(TraceRow(state.k, nm, nd, state.delta, state.tau, 0.0))
            converged = done
            break
        nxt = step(state, cs)
        nc = matrix_norm(state.C)
        trace.append(TraceRow(state.k, nm, nd, state.delta, state.tau, nc))
        if not nc <= state.delta * cs.f + _slack(cs, nc):
            raise MonitorViolation(
                f"step {state.k}: ||C_k|| = {nc:.6g} > delta_k f = {state.delta * cs.f:.6g}", state.k, trace
            )
        state = nxt
    S, Dres = state.S, state.M
    I = Matrix.identity(field, cs.n)
    bounds = {
        "S_bound": product_bound(eps),
        "S_minus_I": matrix_norm(S - I),
        "D_bound": eps / (2.0 * cs.f),
        "D_norm": matrix_norm(Dres),
    }
    bounds["S_bound_ok"] = bounds["S_minus_I"] < bounds["S_bound"]
    bounds["D_bound_ok"] = bounds["D_norm"] <= bounds["D_bound"]
    bounds["tau_chain_ok"] = all(r.tau_k <= 3.0 * delta1 * cs.v for r in trace)
    bounds["C_small_ok"] = all(r.norm_C < 0.1 for r in trace)
    if X.is_zero():
        bounds["S_identity_at_zero"] = S.allclose(I)
    result = ReductionResult(S, Dres, converged, state.k, trace, eps, delta1, bounds)
    if not converged:
        raise NoConvergence(
            f"off-pattern residual {trace[-1].norm_M_D:.3e} above {tol_stop:.3e} after {state.k} steps",
            result,
        )
    return result


@dataclass
class VerificationReport:
    checks: dict
    details: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "details": dict(self.details)}


def _scalar_close(field, x, y, rel: float) -> tuple[bool, float]:
    if field.exact:
        d = x - y
        return field.is_zero(d), float(field.abs(d))
    d = abs(complex(x) - complex(y))
    return d <= rel * max(1.0, abs(complex(x))), d


def verify_reduction(
    A: Matrix,
    X: Matrix,
    res: ReductionResult,
    D: StarPattern,
    rel_tol: float = 1e-8,
) -> VerificationReport:
    """Recompute S^{-1}(A + X)S - A independently and compare.

    Checks: (1) agreement with ``Dres``; (2) ``Dres`` supported on the stars;
    (3) trace, determinant and characteristic polynomial of A + X and
    A + Dres agree.  Exact backends compare at retained precision.
    """
    field = A.field
    S, Dres = res.S, res.Dres
    B = A + X
    recomputed = invert(S) @ B @ S - A
    diff = (recomputed - Dres).max_abs()
    nA = matrix_norm(A)
    if field.exact:
        eq_ok = diff == 0
        off = offpattern_norm(Dres, D)
        in_ok = off == 0
    else:
        eq_ok = diff <= 1e-9 * (1.0 + nA + matrix_norm(X))
        off = offpattern_norm(Dres, D)
        in_ok = off <= 1e-9 * (1.0 + nA)
    N = A + Dres
    tr_ok, tr_d = _scalar_close(field, B.trace(), N.trace(), rel_tol)
    det_ok, det_d = _scalar_close(field, determinant(B), determinant(N), rel_tol)
    cp_ok, cp_d = True, 0.0
    for x, y in zip(charpoly(B), charpoly(N)):
        ok, d = _scalar_close(field, x, y, rel_tol)
        cp_ok &= ok
        cp_d = max(cp_d, d)
    checks = {
        "recomputed_equal": bool(eq_ok),
        "in_pattern": bool(in_ok),
        "trace": bool(tr_ok),
        "determinant": bool(det_ok),
        "charpoly": bool(cp_ok),
    }
    details = {
        "max_abs_difference": float(diff),
        "offpattern_norm": float(off),
        "trace_difference": tr_d,
        "det_difference": det_d,
        "charpoly_difference": cp_d,
    }
    return VerificationReport(checks, details)


__all__ = [
    "IterationState",
    "ReductionResult",
    "TraceRow",
    "VerificationReport",
    "initial_state",
    "step",
    "reduce",
    "verify_reduction",
    "product_bound",
]
