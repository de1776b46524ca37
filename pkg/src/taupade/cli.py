"""Command-line front end: solve, filter, tabulate and locate poles.

Every subcommand writes plain CSV files into ``--out``.  Numbers are
written as shortest round-trip decimals; anything that could not be
computed (failed stage, non-finite value) is written as ``FAIL``.

Outputs
-------
tau_coeffs.csv      ``k, c``
report.csv          ``n, condition_estimate, residual_norm`` and, when an
                    oracle is attached, ``error_norm, ratio``
froissart.csv       ``p, q, count``
poles.csv           ``p, q, re, im``
filter_coeffs.csv   ``p, q, coeff, index, value`` (coeff is ``a`` or ``b``)
curves.csv          ``t, tau, filter`` plus ``exact, tau_error, filter_error``
                    with an oracle
errors.csv          ``stage, message`` (only when a stage failed)
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from numpy.polynomial import legendre as npleg

from .exceptions import ProblemSpecError, TauPadeError
from .fpade import RationalApproximant, direct_poles, frobenius_pade
from .froissart import FroissartTable, froissart_table, select_filter
from .oracles import SeriesOracle, example1_operator, example1_oracle, example2_operator, example2_oracle
from .orthopoly import BasisKind, CoeffSeries, make_basis, weighted_norm
from .problemfile import FilterSpec, ProblemSpec, load_builtin, parse_problem, spec_from_operator
from .taumethod import PolyOperator, TauSolution, residual, tau_solve

__all__ = ["RunReport", "run_pipeline", "detect_oracle", "write_report", "main", "FAIL"]

FAIL = "FAIL"
DEFAULT_BLOCK = 25
_ORACLE_RTOL = 1e-13


@dataclass
class RunReport:
    """Everything one pipeline run produced.

    ``error_table`` rows are ``(n, condition_estimate, residual_norm)`` or,
    with an oracle, ``(n, condition_estimate, residual_norm, error_norm,
    ratio)``; entries that could not be computed are ``nan``.
    """

    spec: ProblemSpec
    tau: TauSolution | None = None
    oracle: SeriesOracle | None = None
    error_table: list = field(default_factory=list)
    froissart: FroissartTable | None = None
    selected_filter: tuple | None = None
    filter: RationalApproximant | None = None
    pole_estimates: list = field(default_factory=list)
    curves: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)

    @property
    def tau_coeffs(self):
        return None if self.tau is None else self.tau.coeffs.coeffs

    @property
    def has_oracle(self):
        return self.oracle is not None


def _close(x, y):
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return x.shape == y.shape and np.allclose(x, y, rtol=_ORACLE_RTOL, atol=0.0)


def _same_operator(a: PolyOperator, b: PolyOperator) -> bool:
    if a.nu != b.nu or a.basis != b.basis or len(a.conditions) != len(b.conditions):
        return False
    if not all(_close(pa, pb) for pa, pb in zip(a.p, b.p)):
        return False
    if not _close(np.trim_zeros(a.rhs.coeffs, "b"), np.trim_zeros(b.rhs.coeffs, "b")):
        return False
    for ca, cb in zip(a.conditions, b.conditions):
        if len(ca.terms) != len(cb.terms) or not _close([ca.value], [cb.value]):
            return False
        if not _close(np.array(ca.terms, dtype=float), np.array(cb.terms, dtype=float)):
            return False
    return True


def detect_oracle(spec: ProblemSpec):
    """The built-in closed-form oracle matching ``spec``, if any."""
    op = spec.operator
    if spec.basis == BasisKind.CHEBYSHEV.value and _same_operator(op, example1_operator()):
        return example1_oracle(max(spec.n, 2))
    if spec.basis == BasisKind.LEGENDRE.value and op.nu == 2 and len(op.p[2]) == 3:
        lead = op.p[2]
        if lead[2] <= 0:
            return None
        # lead = (1 + a^2 - 2 a t)^2 -> 4 a^2 t^2 term fixes |a|, the t term its sign
        alpha = math.copysign(math.sqrt(lead[2]) / 2.0, -lead[1])
        if not 0.0 < abs(alpha) < 1.0:
            return None
        if _same_operator(op, example2_operator(alpha)):
            return example2_oracle(alpha)
    return None


def _timed(report, stage, fn, *args, **kwargs):
    start = time.perf_counter()
    try:
        return fn(*args, **kwargs)
    except (TauPadeError, np.linalg.LinAlgError, ValueError) as exc:
        report.errors[stage] = f"{type(exc).__name__}: {exc}"
        return None
    finally:
        report.timings[stage] = report.timings.get(stage, 0.0) + time.perf_counter() - start


def _error_row(spec, oracle, n, sol=None):
    nan = float("nan")
    if sol is None:
        try:
            sol = tau_solve(spec.operator, spec.operator.basis, n)
        except (TauPadeError, np.linalg.LinAlgError):
            return n, nan, nan, nan
    res = weighted_norm(residual(spec.operator, sol))
    err = oracle.error_norm(sol.coeffs) if oracle is not None else nan
    return n, sol.system_condition_estimate, res, err


def _error_table(spec, oracle, sol, sweep_start):
    n = spec.n
    start = n if sweep_start is None else max(spec.operator.nu, min(sweep_start, n))
    lo = start - 1 if oracle is not None and start > spec.operator.nu else start
    rows = [_error_row(spec, oracle, k, sol if k == n else None) for k in range(lo, n + 1)]
    if oracle is None:
        return [r[:3] for r in rows]
    out = []
    for prev, row in zip([None] + rows[:-1], rows):
        if row[0] < start:
            continue
        ratio = row[3] / prev[3] if prev is not None and prev[3] > 0 else float("nan")
        out.append(row + (ratio,))
    return out


def _pole_sweep(kind, c):
    n = len(c) - 1
    rows = []
    for q, top in ((1, n - 2), (2, n - 4)):
        for p in range(1, top + 1):
            try:
                poles = direct_poles(kind, c, p, q)
            except TauPadeError:
                rows.append((p, q, float("nan"), float("nan")))
                continue
            rows.extend((p, q, z.real, z.imag) for z in poles)
    return rows


def _curves(report, grid):
    t = np.linspace(-1.0, 1.0, grid)
    out = {"t": t, "tau": report.tau(t)}
    if report.filter is not None:
        num = report.filter.numerator(t)
        den = report.filter.denominator(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            out["filter"] = np.where(np.abs(den) > 0, num / den, np.nan)
    else:
        out["filter"] = np.full_like(t, np.nan)
    if report.oracle is not None:
        with np.errstate(invalid="ignore"):
            exact = report.oracle.y(t)
        out["exact"] = exact
        out["tau_error"] = np.abs(exact - out["tau"])
        out["filter_error"] = np.abs(exact - out["filter"])
    return out


def run_pipeline(spec: ProblemSpec, oracle="auto", *, table=None, filter=None, poles=True, grid=201, workers=None, sweep_start=None) -> RunReport:
    """Run solve -> Froissart table -> filter selection -> Padé filter -> pole sweep.

    Parameters
    ----------
    spec : ProblemSpec
    oracle : SeriesOracle, None or "auto"
        ``"auto"`` attaches the built-in oracle when ``spec`` is one of the
        shipped examples; ``None`` disables error columns.
    table, filter : bool, optional
        Whether to build the Froissart table and the selected filter.  Both
        default to "spec has a filter block"; a filter needs the table.
    poles : bool
        Run the direct (p, 1) and (p, 2) pole sweep on the Tau coefficients.
    grid : int
        Number of points of the evaluation grid on [-1, 1]; 0 skips curves.
    sweep_start : int, optional
        Add error-table rows for every degree from ``sweep_start`` to ``n``.

    Stage failures are stored in ``report.errors``; nothing is raised.
    """
    if isinstance(oracle, str) and oracle == "auto":
        oracle = detect_oracle(spec)
    report = RunReport(spec, oracle=oracle)
    if table is None:
        table = spec.filter is not None
    if filter is None:
        filter = spec.filter is not None
    fspec = spec.filter or FilterSpec(DEFAULT_BLOCK, DEFAULT_BLOCK)
    basis = spec.operator.basis

    report.tau = _timed(report, "tau_solve", tau_solve, spec.operator, basis, spec.n)
    if report.tau is None:
        nan = float("nan")
        report.error_table = [(spec.n, nan, nan) + ((nan, nan) if oracle is not None else ())]
        return report
    report.error_table = _timed(report, "error_table", _error_table, spec, oracle, report.tau, sweep_start) or []
    c = report.tau.coeffs.coeffs

    if table or filter:
        report.froissart = _timed(
            report, "froissart_table", froissart_table, basis, c, fspec.pmax, fspec.qmax, fspec.tol, workers
        )
    if filter and report.froissart is not None:
        report.selected_filter = select_filter(report.froissart, fspec.strategy)
        if report.selected_filter is None:
            report.errors["select_filter"] = "no clean diagonal cell in the Froissart table"
        else:
            p, q = report.selected_filter
            report.filter = _timed(report, "frobenius_pade", frobenius_pade, basis, c, p, q)
    if poles:
        report.pole_estimates = _timed(report, "pole_sweep", _pole_sweep, basis.kind, c) or []
    if grid:
        report.curves = _timed(report, "curves", _curves, report, grid) or {}
    return report


def _fmt(x):
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    return repr(x) if math.isfinite(x) else FAIL


def _write_csv(path: Path, header, rows):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def write_report(report: RunReport, out_dir) -> list:
    """Write the CSV files of ``report`` into ``out_dir``; returns their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def emit(name, header, rows):
        path = out / name
        _write_csv(path, header, rows)
        written.append(path)

    if report.tau is not None:
        emit("tau_coeffs.csv", ["k", "c"], enumerate(report.tau_coeffs))
    header = ["n", "condition_estimate", "residual_norm"]
    if report.has_oracle:
        header += ["error_norm", "ratio"]
    emit("report.csv", header, report.error_table)
    if report.froissart is not None:
        rows = [(p, q, FAIL if k is None else k) for p, q, k in report.froissart.cells()]
        emit("froissart.csv", ["p", "q", "count"], rows)
    if report.selected_filter is not None:
        p, q = report.selected_filter
        rows = []
        if report.filter is not None:
            rows += [(p, q, "a", i, v) for i, v in enumerate(report.filter.a)]
            rows += [(p, q, "b", i, v) for i, v in enumerate(report.filter.b)]
        else:
            rows.append((p, q, FAIL, FAIL, FAIL))
        emit("filter_coeffs.csv", ["p", "q", "coeff", "index", "value"], rows)
    if report.pole_estimates:
        emit("poles.csv", ["p", "q", "re", "im"], report.pole_estimates)
    if report.curves:
        cols = list(report.curves)
        emit("curves.csv", cols, zip(*(report.curves[k] for k in cols)))
    if report.errors:
        emit("errors.csv", ["stage", "message"], sorted(report.errors.items()))
    return written


def _convert_rhs(coeffs, src: BasisKind, dst: BasisKind):
    if src is dst:
        return coeffs
    if src is BasisKind.CHEBYSHEV:
        return npleg.poly2leg(npcheb.cheb2poly(coeffs))
    return npcheb.poly2cheb(npleg.leg2poly(coeffs))


def _override(spec: ProblemSpec, args) -> ProblemSpec:
    """Apply ``--n``, ``--basis`` and the filter flags to a parsed spec."""
    op = spec.operator
    if args.basis is not None and args.basis != spec.basis:
        dst = make_basis(args.basis)
        rhs = CoeffSeries(dst, _convert_rhs(op.rhs.coeffs, op.basis.kind, dst.kind))
        op = op.with_rhs(rhs)
        spec = replace(spec, basis=dst.kind.value, operator=op)
    if args.n is not None:
        if args.n < op.nu:
            raise ProblemSpecError(f"n={args.n} is below the operator order {op.nu}", path="n")
        spec = replace(spec, n=args.n)
    f = spec.filter or FilterSpec(DEFAULT_BLOCK, DEFAULT_BLOCK)
    if args.pmax is not None or args.qmax is not None or args.tol is not None or spec.filter is None:
        f = FilterSpec(
            args.pmax if args.pmax is not None else f.pmax,
            args.qmax if args.qmax is not None else f.qmax,
            args.tol if args.tol is not None else f.tol,
            f.strategy,
        )
        if f.pmax < 1 or f.qmax < 1 or not f.tol > 0:
            raise ProblemSpecError("pmax, qmax must be >= 1 and tol > 0", path="filter")
        spec = replace(spec, filter=f)
    return spec


_STAGES = {
    "solve": dict(table=False, filter=False, poles=False),
    "table": dict(table=True, filter=False, poles=False),
    "filter": dict(table=True, filter=True, poles=False),
    "poles": dict(table=False, filter=False, poles=True),
    "example1": dict(table=True, filter=True, poles=True),
    "example2": dict(table=True, filter=True, poles=True),
}


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="Tau degree (overrides the problem file)")
    common.add_argument("--basis", choices=[k.value for k in BasisKind])
    common.add_argument("--pmax", type=int, help="Froissart table rows")
    common.add_argument("--qmax", type=int, help="Froissart table columns")
    common.add_argument("--tol", type=float, help="doublet distance tolerance (default 1e-5)")
    common.add_argument("--out", default=".", help="output directory (default: current)")
    common.add_argument("--grid", type=int, default=201, help="evaluation grid size, 0 to skip (default 201)")
    common.add_argument("--workers", type=int, default=None, help="threads for the Froissart table")
    common.add_argument("--sweep-start", type=int, default=None, help="first degree of the error table")

    parser = argparse.ArgumentParser(prog="taupade", description="Tau solutions and their Frobenius-Padé filters.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in [
        ("solve", "Tau solution and residual"),
        ("table", "Froissart table of the Tau coefficients"),
        ("filter", "select and build a clean-diagonal filter"),
        ("poles", "direct (p,1) and (p,2) pole sweep"),
    ]:
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("problem", help="JSON problem file")
    sub.add_parser("example1", parents=[common], help="(t+1)y' - y/2 = 0, y(0) = pi*sqrt(2)/4")
    p2 = sub.add_parser("example2", parents=[common], help="Legendre generating-function example")
    p2.add_argument("--alpha", type=float, default=0.9, help="0 < |alpha| < 1 (default 0.9)")
    return parser


def _load(args) -> ProblemSpec:
    if args.command.startswith("example") and args.sweep_start is None:
        args.sweep_start = 9
    if args.command == "example1":
        spec = load_builtin("example1")
    elif args.command == "example2":
        if args.alpha == 0.9:
            spec = load_builtin("example2_alpha0.9")
        else:
            try:
                op = example2_operator(args.alpha)
            except TauPadeError as exc:
                raise ProblemSpecError(str(exc), path="alpha") from None
            spec = spec_from_operator(op, 150, FilterSpec(DEFAULT_BLOCK, DEFAULT_BLOCK))
    else:
        try:
            text = Path(args.problem).read_bytes()
        except OSError as exc:
            raise ProblemSpecError(f"cannot read {args.problem}: {exc.strerror}") from None
        spec = parse_problem(text)
    return _override(spec, args)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        spec = _load(args)
    except ProblemSpecError as exc:
        print(f"taupade: {exc}", file=sys.stderr)
        return 2
    if args.grid < 0:
        parser.error("--grid must be >= 0")

    report = run_pipeline(
        spec, grid=args.grid, workers=args.workers, sweep_start=args.sweep_start, **_STAGES[args.command]
    )
    paths = write_report(report, args.out)

    if report.tau is not None:
        print(f"n={spec.n} basis={spec.basis} condition={report.tau.system_condition_estimate:.3e}")
    if report.selected_filter is not None:
        print(f"selected filter {report.selected_filter}")
    for stage, msg in sorted(report.errors.items()):
        print(f"{stage}: FAILED ({msg})", file=sys.stderr)
    for stage, secs in report.timings.items():
        print(f"time {stage}: {secs:.3f} s")
    for path in paths:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
