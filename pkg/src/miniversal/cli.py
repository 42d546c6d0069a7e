"""Command-line front end: JSON job file in, JSON report out.

Exit codes: 0 ok, 1 bad input or failed verification, 2 NotAComplement,
3 OutsideRadius, 4 NoConvergence, 5 MonitorViolation.  Machine-readable
JSON goes to stdout, a one-line human summary to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .correctors import DEFAULT_MARGIN, CorrectorSet, solve_correctors
from .errors import (
    MiniversalError,
    MonitorViolation,
    NoConvergence,
    NotAComplement,
    OutsideRadius,
    SpecError,
)
from .fields import Field, field_from_config
from .matrices import Matrix
from .oracle import LemmaCase, codim, lemma42_check
from .patterns import BlockSpec, Certificate, StarPattern, canonical_pattern, certify_pattern, greedy_pattern
from .reducer import DEFAULT_K_MAX, ReductionResult, reduce, verify_reduction
from .sampling import make_rng, random_perturbation

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_A_COMPLEMENT = 2
EXIT_OUTSIDE_RADIUS = 3
EXIT_NO_CONVERGENCE = 4
EXIT_MONITOR = 5

COMMANDS = ("pattern", "correctors", "radius", "reduce", "verify", "lemma-dims")


class JobError(ValueError):
    """Malformed job file."""


@dataclass
class Job:
    raw: dict
    field: Field
    A: Matrix | None
    spec: BlockSpec | None
    X: Matrix | None
    pattern: StarPattern | None
    options: dict


def load_job(raw: dict, precision: int | None = None) -> Job:
    if "job" in raw and isinstance(raw["job"], dict):
        # a reduce report fed back in: the job section describes the inputs
        raw = {**raw["job"], "result": raw.get("result")}
    field = field_from_config(raw.get("field", {"kind": "complex"}), precision)
    has_A, has_blocks = "A" in raw, "blocks" in raw
    if has_A and has_blocks:
        raise JobError("give exactly one of 'A' and 'blocks'")
    A = spec = None
    if has_A:
        A = Matrix.from_json(field, raw["A"])
        if A.data.ndim != 2 or A.shape[0] != A.shape[1]:
            raise JobError("A must be square")
    elif has_blocks:
        spec = BlockSpec.from_json(raw["blocks"])
    pattern = StarPattern.from_json(raw["pattern"]) if raw.get("pattern") else None
    X = None
    if isinstance(raw.get("X"), list):
        X = Matrix.from_json(field, raw["X"])
    return Job(raw, field, A, spec, X, pattern, dict(raw.get("options", {})))


def _matrix_and_pattern(job: Job) -> tuple[Matrix, StarPattern, str]:
    if job.spec is not None:
        build = canonical_pattern(job.spec, job.field)
        A, D, source = build.A, build.pattern, "canonical"
    elif job.A is not None:
        A, D, source = job.A, None, "greedy"
    else:
        raise JobError("job needs 'A' or 'blocks'")
    if job.pattern is not None:
        D, source = job.pattern, "override"
        if D.n != A.shape[0]:
            raise JobError("pattern size does not match A")
    elif D is None:
        D = greedy_pattern(A, job.options.get("rank_tol"))
    return A, D, source


def _certified(job: Job) -> tuple[Matrix, StarPattern, str, Certificate]:
    A, D, source = _matrix_and_pattern(job)
    cert = certify_pattern(A, D, job.options.get("rank_tol"))
    return A, D, source, cert


def _correctors(job: Job) -> tuple[Matrix, StarPattern, Certificate, CorrectorSet]:
    A, D, _, cert = _certified(job)
    return A, D, cert, solve_correctors(A, D, job.options.get("mode"))


def _job_section(job: Job, A: Matrix, D: StarPattern, X: Matrix) -> dict:
    out = {"field": job.field.config(), "A": A.to_json(), "pattern": D.to_json(), "X": X.to_json()}
    if job.options:
        out["options"] = job.options
    return out


def cmd_pattern(job: Job) -> tuple[dict, str]:
    A, D, source, cert = _certified(job)
    out = {
        "pattern": D.to_json(),
        "source": source,
        "certificate": cert.to_json(),
        "codim": codim(A),
        "render": D.render().splitlines(),
    }
    return out, f"pattern: {len(D)} stars ({source}), dim T = {cert.dim_t}, certified"


def cmd_correctors(job: Job) -> tuple[dict, str]:
    _, D, cert, cs = _correctors(job)
    out = cs.to_json()
    out["pattern"] = D.to_json()
    out["certificate"] = cert.to_json()
    return out, f"correctors: {len(cs.pattern.off_positions())} solved ({cs.mode}), f = {cs.f:.6g}"


def cmd_radius(job: Job) -> tuple[dict, str]:
    _, _, _, cs = _correctors(job)
    out = {"a": cs.a, "f": cs.f, "v": cs.v, "rho": cs.rho, "mode": cs.mode}
    return out, f"radius: rho = {cs.rho:.6g} (a = {cs.a:.6g}, f = {cs.f:.6g}, {cs.mode})"


def _perturbation(job: Job, cs: CorrectorSet) -> Matrix:
    raw = job.raw.get("X")
    n = cs.n
    if raw is None:
        return Matrix.zeros(job.field, n)
    if isinstance(raw, dict) and "sample" in raw:
        scale = float(raw["sample"].get("scale", 0.5))
        return random_perturbation(job.field, n, scale * cs.rho, make_rng(raw["sample"].get("seed")))
    X = job.X
    if X is None or X.shape != (n, n):
        raise JobError("X must be an n x n matrix matching A")
    return X


def cmd_reduce(job: Job) -> tuple[dict, str, ReductionResult]:
    A, D, _, cs = _correctors(job)
    X = _perturbation(job, cs)
    opts = job.options
    res = reduce(
        A,
        X,
        cs,
        tol_stop=opts.get("tol_stop"),
        k_max=int(opts.get("k_max", DEFAULT_K_MAX)),
        margin=float(opts.get("margin", DEFAULT_MARGIN)),
    )
    report = verify_reduction(A, X, res, D)
    out = {"job": _job_section(job, A, D, X), "result": res.to_json(), "verification": report.to_json()}
    summary = (
        f"reduce: {res.steps} steps, residual {res.trace[-1].norm_M_D:.3e}, "
        f"bounds {'ok' if res.bounds['S_bound_ok'] and res.bounds['D_bound_ok'] else 'FAILED'}, "
        f"verification {'ok' if report.ok else 'FAILED'}"
    )
    return out, summary, res


def cmd_verify(job: Job) -> tuple[dict, str]:
    result = job.raw.get("result")
    if not result:
        raise JobError("verify needs a 'result' section with S and D")
    A, D, _ = _matrix_and_pattern(job)
    X = job.X if job.X is not None else Matrix.zeros(job.field, A.shape[0])
    S = Matrix.from_json(job.field, result["S"])
    Dres = Matrix.from_json(job.field, result["D"])
    res = ReductionResult(S, Dres, True, int(result.get("steps", 0)), [], 0.0, 0.0)
    report = verify_reduction(A, X, res, D)
    failed = [k for k, v in report.checks.items() if not v]
    return report.to_json(), "verify: all checks passed" if report.ok else f"verify: FAILED {', '.join(failed)}"


def _lemma_cases(job: Job) -> list[LemmaCase]:
    raw = job.raw.get("lemma")
    if raw is None:
        raise JobError("lemma-dims needs a 'lemma' section")
    items = raw if isinstance(raw, list) else [raw]
    return [LemmaCase(job.field, tuple(c["p"]), tuple(c["q"]), int(c["r"]), int(c["s"])) for c in items]


def cmd_lemma_dims(job: Job) -> tuple[dict, str]:
    reports = [lemma42_check(c) for c in _lemma_cases(job)]
    ok = all(r["ok"] for r in reports)
    out = {"cases": reports, "ok": ok}
    return out, f"lemma-dims: {sum(r['ok'] for r in reports)}/{len(reports)} cases match the table"


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 1 so that 2 stays reserved for NotAComplement."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="miniversal", description="Miniversal deformations of matrices over complete fields.")
    p.add_argument("--job", required=True, help="JSON job file ('-' reads stdin)")
    p.add_argument("--cmd", required=True, choices=COMMANDS)
    p.add_argument("--mode", choices=("min-norm", "particular"), help="corrector solve mode")
    p.add_argument("--precision", type=int, help="relative precision N for p-adic and Laurent backends")
    p.add_argument("--tol-stop", type=float, help="stop once the off-pattern residual is at most this")
    p.add_argument("--k-max", type=int, help="maximum number of reduction steps")
    p.add_argument("--trace", help="write the per-step trace of 'reduce' to this CSV file")
    return p


def _read_json(path: str) -> dict:
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, default=_json_default)
    sys.stdout.write("\n")


def _json_default(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if hasattr(x, "item"):
        return x.item()
    return str(x)


def _fail(code: int, kind: str, message: str, **extra) -> int:
    _emit({"error": kind, "message": message, **extra})
    print(f"{kind}: {message}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        raw = _read_json(args.job)
        if args.mode:
            raw.setdefault("options", {})["mode"] = args.mode.replace("-", "_")
        if args.tol_stop is not None:
            raw.setdefault("options", {})["tol_stop"] = args.tol_stop
        if args.k_max is not None:
            raw.setdefault("options", {})["k_max"] = args.k_max
        job = load_job(raw, args.precision)
        if args.cmd == "reduce":
            out, summary, res = cmd_reduce(job)
            if args.trace:
                with open(args.trace, "w") as fh:
                    fh.write(res.trace_csv())
            code = EXIT_OK
        else:
            handler = {
                "pattern": cmd_pattern,
                "correctors": cmd_correctors,
                "radius": cmd_radius,
                "verify": cmd_verify,
                "lemma-dims": cmd_lemma_dims,
            }[args.cmd]
            out, summary = handler(job)
            code = EXIT_OK if out.get("ok", True) else EXIT_INPUT
        _emit(out)
        print(summary, file=sys.stderr)
        return code
    except NotAComplement as e:
        return _fail(
            EXIT_NOT_A_COMPLEMENT,
            "NotAComplement",
            str(e),
            dimT=e.dim_t,
            starCount=e.star_count,
            stackedRank=e.stacked_rank,
        )
    except OutsideRadius as e:
        return _fail(EXIT_OUTSIDE_RADIUS, "OutsideRadius", str(e), norm=e.norm, rho=e.rho)
    except NoConvergence as e:
        extra = {"result": e.result.to_json()} if e.result is not None else {}
        if args.trace and e.result is not None:
            with open(args.trace, "w") as fh:
                fh.write(e.result.trace_csv())
        return _fail(EXIT_NO_CONVERGENCE, "NoConvergence", str(e), **extra)
    except MonitorViolation as e:
        return _fail(EXIT_MONITOR, "MonitorViolation", str(e), step=e.step)
    except (JobError, SpecError, MiniversalError, ValueError, KeyError, TypeError, OSError) as e:
        return _fail(EXIT_INPUT, type(e).__name__, str(e))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())


__all__ = ["main", "build_parser", "load_job", "Job", "JobError"]
