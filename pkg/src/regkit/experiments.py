"""Experiment runners and record serialization for the command line.

Records serialize to CSV with a fixed header (or to JSON with the same
keys).  Floats are written at 17 significant digits so files re-parse
losslessly.  Wall-clock timings are measured and reported in console
summaries but written as 0 in machine output: runs with identical flags
and seed must produce byte-identical files.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass

import numpy as np

from .discrepancy import DiscrepancyConfig, regularized_solve_auto
from .errors import (
    ConvergenceError,
    DataTooNoisyError,
    InvalidParameterError,
    NoRootBelowError,
)
from .operators import svd_decompose
from .problems import add_noise, make_problem
from .tikhonov import (
    apriori_alpha_schedule,
    solve_primal,
    solve_spectral,
    solution_operator_norm,
)

__all__ = [
    "ExperimentRecord",
    "CSV_HEADER",
    "records_to_csv",
    "parse_records_csv",
    "record_to_json",
    "records_to_json",
    "run_solve",
    "run_choose_alpha",
    "run_sweep",
    "sweep_summary",
    "BoundsRow",
    "BoundsReport",
    "run_verify_bounds",
    "bounds_table",
]

CSV_HEADER = "problem,n,delta,C,alpha,residual,error_to_y,u_norm,y_norm,wall_ms"

#: Marker in the C column for fixed-alpha solves.
C_FIXED = "fixed"
#: Marker in the C column for the a-priori schedule alpha = delta.
C_APRIORI = "apriori"


@dataclass(frozen=True)
class ExperimentRecord:
    """One solved instance, as written to CSV/JSON."""

    problem: str
    n: int
    delta: float
    C: str
    alpha: float
    residual: float
    error_to_y: float
    u_norm: float
    y_norm: float
    wall_ms: float


def _f17(value):
    return f"{float(value):.17g}"


def _record_fields(record):
    return [
        record.problem,
        str(record.n),
        _f17(record.delta),
        record.C,
        _f17(record.alpha),
        _f17(record.residual),
        _f17(record.error_to_y),
        _f17(record.u_norm),
        _f17(record.y_norm),
        "0",  # wall time excluded from machine output (determinism)
    ]


def records_to_csv(records):
    lines = [CSV_HEADER]
    lines.extend(",".join(_record_fields(r)) for r in records)
    return "\n".join(lines) + "\n"


def parse_records_csv(text):
    lines = [ln for ln in text.strip().splitlines() if ln]
    if not lines or lines[0] != CSV_HEADER:
        raise InvalidParameterError("CSV header does not match the record schema")
    records = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 10:
            raise InvalidParameterError(f"malformed CSV row: {ln!r}")
        records.append(
            ExperimentRecord(
                problem=parts[0],
                n=int(parts[1]),
                delta=float(parts[2]),
                C=parts[3],
                alpha=float(parts[4]),
                residual=float(parts[5]),
                error_to_y=float(parts[6]),
                u_norm=float(parts[7]),
                y_norm=float(parts[8]),
                wall_ms=float(parts[9]),
            )
        )
    return records


def _record_dict(record):
    keys = CSV_HEADER.split(",")
    values = _record_fields(record)
    out = {}
    for key, raw in zip(keys, values):
        if key in ("problem", "C"):
            out[key] = raw
        elif key == "n":
            out[key] = int(raw)
        else:
            out[key] = float(raw)
    return out


def record_to_json(record):
    return json.dumps(_record_dict(record), indent=2) + "\n"


def records_to_json(records):
    return json.dumps([_record_dict(r) for r in records], indent=2) + "\n"


def _solve_instance(problem, data_vector, alpha):
    if problem.decomp is not None:
        return solve_spectral(problem.decomp, data_vector, alpha)
    return solve_primal(problem.op, data_vector, alpha)


def _finish(problem, solution, delta, c_label, started):
    wall = (time.perf_counter() - started) * 1e3
    return ExperimentRecord(
        problem=problem.name,
        n=problem.n,
        delta=float(delta),
        C=c_label,
        alpha=solution.alpha,
        residual=solution.residual_norm,
        error_to_y=float(np.linalg.norm(solution.u - problem.y)),
        u_norm=solution.solution_norm,
        y_norm=float(np.linalg.norm(problem.y)),
        wall_ms=wall,
    )


def run_solve(name, n, alpha, params=None):
    """Solve one instance with exact data at a fixed alpha."""
    started = time.perf_counter()
    problem = make_problem(name, n, **(params or {}))
    solution = _solve_instance(problem, problem.f, alpha)
    return _finish(problem, solution, 0.0, C_FIXED, started)


def run_choose_alpha(name, n, delta, seed, C=1.5, params=None):
    """Select alpha by residual matching on noisy data, then solve."""
    started = time.perf_counter()
    problem = make_problem(name, n, **(params or {}))
    noisy = add_noise(problem, delta, seed)
    cfg = DiscrepancyConfig(C=float(C))
    system = problem.decomp if problem.decomp is not None else problem.op
    solution, _selection = regularized_solve_auto(
        system, noisy.f_delta, noisy.delta, cfg
    )
    return _finish(problem, solution, noisy.delta, _f17(C), started)


def run_sweep(name, n, deltas, seed, rule="discrepancy", C=1.5, params=None):
    """One record per noise level; failures are recorded in-row as NaN.

    Rows are ordered by the given deltas regardless of execution order.
    The same seed drives every row, so the perturbation direction is
    shared and only its amplitude changes along the sweep.
    """
    deltas = [float(d) for d in deltas]
    if any(d <= 0 for d in deltas):
        raise InvalidParameterError("all noise levels must be positive")
    if not all(b < a for a, b in zip(deltas, deltas[1:])):
        raise InvalidParameterError("noise levels must be strictly decreasing")
    problem = make_problem(name, n, **(params or {}))
    system = problem.decomp if problem.decomp is not None else problem.op
    records = []
    for delta in deltas:
        started = time.perf_counter()
        noisy = add_noise(problem, delta, seed)
        try:
            if rule == "discrepancy":
                cfg = DiscrepancyConfig(C=float(C))
                solution, _sel = regularized_solve_auto(
                    system, noisy.f_delta, noisy.delta, cfg
                )
                label = _f17(C)
            elif rule == "apriori":
                alpha = apriori_alpha_schedule(noisy.delta)
                solution = _solve_instance(problem, noisy.f_delta, alpha)
                label = C_APRIORI
            else:
                raise InvalidParameterError(
                    f"unknown rule {rule!r}; expected 'discrepancy' or 'apriori'"
                )
        except (DataTooNoisyError, NoRootBelowError, ConvergenceError):
            label = _f17(C) if rule == "discrepancy" else C_APRIORI
            records.append(
                ExperimentRecord(
                    problem=problem.name,
                    n=problem.n,
                    delta=noisy.delta,
                    C=label,
                    alpha=math.nan,
                    residual=math.nan,
                    error_to_y=math.nan,
                    u_norm=math.nan,
                    y_norm=float(np.linalg.norm(problem.y)),
                    wall_ms=(time.perf_counter() - started) * 1e3,
                )
            )
            continue
        records.append(_finish(problem, solution, noisy.delta, label, started))
    return records


def sweep_summary(records):
    """One-line summary: worst solution-to-exact norm ratio and error decay."""
    valid = [r for r in records if math.isfinite(r.error_to_y)]
    failed = len(records) - len(valid)
    if not valid:
        return f"sweep: no successful rows ({failed} failed)"
    largest = max(valid, key=lambda r: r.delta)
    smallest = min(valid, key=lambda r: r.delta)
    ratio = smallest.error_to_y / largest.error_to_y if largest.error_to_y else math.nan
    worst_norm = max(r.u_norm / r.y_norm for r in valid if r.y_norm)
    line = (
        f"sweep: max ||u||/||y|| = {worst_norm:.6f}, "
        f"error({smallest.delta:g})/error({largest.delta:g}) = {ratio:.6f}"
    )
    if failed:
        line += f" ({failed} row(s) failed)"
    return line


@dataclass(frozen=True)
class BoundsRow:
    n: int
    alpha: float
    operator_norm: float
    bound: float
    measured: float
    margin: float


@dataclass(frozen=True)
class BoundsReport:
    family: str
    rows: tuple
    violations: int


def run_verify_bounds(family, ns, alphas, params=None, slack=1e-12):
    """Measure the solution-map norm across a family of growing operators.

    For each size and alpha, checks measured <= (1 + slack) / (2 sqrt(alpha));
    the margin column reports bound - measured.
    """
    rows = []
    violations = 0
    for n in ns:
        problem = make_problem(family, int(n), **(params or {}))
        decomp = problem.decomp or svd_decompose(problem.op)
        op_norm = float(decomp.singular_values[0]) if decomp.rank else 0.0
        for alpha in alphas:
            a = float(alpha)
            bound = 1.0 / (2.0 * math.sqrt(a))
            measured = solution_operator_norm(decomp, a)
            if measured > bound * (1.0 + slack):
                violations += 1
            rows.append(
                BoundsRow(
                    n=int(n),
                    alpha=a,
                    operator_norm=op_norm,
                    bound=bound,
                    measured=measured,
                    margin=bound - measured,
                )
            )
    return BoundsReport(family=family, rows=tuple(rows), violations=violations)


def bounds_table(report):
    header = f"{'n':>6} {'alpha':>10} {'||A||':>14} {'bound':>14} {'measured':>14} {'margin':>14}"
    lines = [f"family: {report.family}", header]
    for row in report.rows:
        lines.append(
            f"{row.n:>6} {row.alpha:>10.3g} {row.operator_norm:>14.6e} "
            f"{row.bound:>14.6e} {row.measured:>14.6e} {row.margin:>14.6e}"
        )
    lines.append(
        "all bounds hold" if report.violations == 0
        else f"VIOLATIONS: {report.violations}"
    )
    return "\n".join(lines) + "\n"
