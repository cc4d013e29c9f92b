"""Acceptance suite: one test per criterion, one printed line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the PASS/FAIL
lines alongside the test results.
"""

import subprocess
import sys
import time

import numpy as np
import pytest

from regkit import (
    DataTooNoisyError,
    DenseOperator,
    DiscrepancyConfig,
    add_noise,
    diagonal_decomposition,
    discrepancy_value,
    functional_value,
    make_problem,
    regularized_solve_auto,
    solution_operator_norm,
    solve_alpha,
    solve_dual,
    solve_primal,
    solve_shifted_normal,
    solve_spectral,
    svd_decompose,
)
from regkit.experiments import run_sweep, run_verify_bounds

from conftest import philox


def _report(criterion, ok, detail):
    status = "PASS" if ok else "FAIL"
    print(f"[{criterion}] {status}: {detail}")
    assert ok, f"{criterion}: {detail}"


# Shared acceptance grids.
GRID_PROBLEMS = [("diagonal", 16), ("hilbert", 16), ("deriv2", 32),
                 ("phillips", 32), ("gradient_family", 16)]
SWEEP_SEED = 7


def test_criterion_1_solver_path_agreement():
    """Primal, dual, and spectral solutions agree to 1e-8 on random operators."""
    started = time.perf_counter()
    rng = philox(20240801)
    worst = 0.0
    for _ in range(50):
        m = int(rng.integers(2, 61))
        n = int(rng.integers(2, 41))
        op = DenseOperator(rng.standard_normal((m, n)))
        f = rng.standard_normal(m)
        decomp = svd_decompose(op)
        for alpha in (1e-6, 1e-3, 1.0, 1e3):
            u_primal = solve_primal(op, f, alpha).u
            u_dual = solve_dual(op, f, alpha).u
            u_spectral = solve_spectral(decomp, f, alpha).u
            scale = np.linalg.norm(u_spectral) + 1e-300
            worst = max(
                worst,
                np.linalg.norm(u_primal - u_dual) / (np.linalg.norm(u_primal) + 1e-300),
                np.linalg.norm(u_primal - u_spectral) / scale,
                np.linalg.norm(u_dual - u_spectral) / scale,
            )
    wall = time.perf_counter() - started
    _report(
        "acceptance-1 solver-path-agreement",
        worst <= 1e-8 and wall < 10.0,
        f"max relative disagreement {worst:.3e} over 50 operators x 4 alphas "
        f"(limit 1e-8), wall {wall:.1f}s (limit 10s)",
    )


def test_criterion_2_uniform_norm_bound():
    """Solution-map norm stays below 1/(2 sqrt(alpha)) while ||A|| grows."""
    started = time.perf_counter()
    sizes = [16, 32, 64, 128, 256, 512, 1024]
    alphas = [1e-4, 1e-2, 1.0]
    report = run_verify_bounds("gradient_family", sizes, alphas)
    norms = sorted({row.n: row.operator_norm for row in report.rows}.items())
    growth = norms[-1][1] / norms[0][1]
    sharp_ok = True
    sharp_worst = 0.0
    for alpha in alphas:
        decomp = diagonal_decomposition([np.sqrt(alpha), 1.0, 0.01])
        bound = 1.0 / (2.0 * np.sqrt(alpha))
        measured = solution_operator_norm(decomp, alpha)
        rel = abs(measured - bound) / bound
        sharp_worst = max(sharp_worst, rel)
        sharp_ok = sharp_ok and rel <= 1e-12 and measured <= bound * (1 + 1e-12)
    wall = time.perf_counter() - started
    _report(
        "acceptance-2 uniform-norm-bound",
        report.violations == 0 and growth > 10.0 and sharp_ok and wall < 60.0,
        f"{len(report.rows)} (n, alpha) pairs, 0 violations expected "
        f"(got {report.violations}); ||A|| growth x{growth:.0f} (need >10); "
        f"sharpness deviation {sharp_worst:.2e} (limit 1e-12); wall {wall:.1f}s",
    )


def test_criterion_3_global_minimizer_identity():
    """F(u+h) - F(u) equals ||Ah||^2 + alpha ||h||^2 at the minimizer."""
    rng = philox(33)
    cases = [
        ("diagonal", 8, 1e-3), ("diagonal", 16, 1e-1), ("hilbert", 8, 1e-4),
        ("hilbert", 16, 1e-2), ("deriv2", 16, 1e-3), ("deriv2", 32, 1e-5),
        ("phillips", 16, 1e-2), ("phillips", 32, 1e-4),
        ("gradient_family", 12, 1e-1), ("gradient_family", 24, 1.0),
    ]
    worst = 0.0
    decreased = 0
    for name, n, alpha in cases:
        prob = make_problem(name, n)
        fd = add_noise(prob, 1e-2, 4).f_delta
        sol = solve_primal(prob.op, fd, alpha)
        base = functional_value(prob.op, sol.u, fd, alpha)
        for _ in range(100):
            h = rng.standard_normal(prob.op.domain_dim)
            h *= rng.choice([1e-2, 0.3, 1.0]) * (sol.solution_norm + 1.0) / np.linalg.norm(h)
            gap = functional_value(prob.op, sol.u + h, fd, alpha) - base
            expected = (
                np.linalg.norm(prob.op.apply(h)) ** 2 + alpha * np.linalg.norm(h) ** 2
            )
            worst = max(worst, abs(gap - expected) / base)
            if gap < 0:
                decreased += 1
    _report(
        "acceptance-3 global-minimizer",
        worst <= 1e-9 and decreased == 0,
        f"1000 perturbations on 10 problems: worst identity defect {worst:.2e} "
        f"(limit 1e-9), {decreased} perturbations decreased the functional",
    )


def test_criterion_4_error_identity_and_exact_data_convergence():
    """u_alpha - y = -alpha (A^T A + alpha I)^{-1} y, and u_alpha -> y."""
    worst = 0.0
    for name, n in [("diagonal", 8), ("hilbert", 8), ("deriv2", 16), ("phillips", 16)]:
        prob = make_problem(name, n)
        y_norm = np.linalg.norm(prob.y)
        for alpha in (1e-6, 1e-3, 1.0):
            u = solve_primal(prob.op, prob.f, alpha).u
            w, _ = solve_shifted_normal(prob.op, prob.y, alpha)
            worst = max(worst, np.linalg.norm(u - prob.y + alpha * w) / y_norm)
    prob = make_problem("diagonal", 8)
    y_norm = np.linalg.norm(prob.y)
    errors = [
        np.linalg.norm(solve_spectral(prob.decomp, prob.f, 10.0 ** (-k)).u - prob.y)
        for k in range(13)
    ]
    monotone = all(b < a for a, b in zip(errors, errors[1:]))
    _report(
        "acceptance-4 error-identity",
        worst <= 1e-10 and monotone and errors[-1] <= 1e-6 * y_norm,
        f"identity defect {worst:.2e} (limit 1e-10); exact-data error monotone from "
        f"{errors[0]:.2e} to {errors[-1]:.2e} (final limit {1e-6 * y_norm:.2e})",
    )


def test_criterion_5_discrepancy_monotonicity_and_limits():
    """g is nondecreasing with the proved limits at both ends."""
    grid = np.logspace(-12, 12, 50)
    delta = 1e-3
    worst_inf = 0.0
    worst_zero = 0.0
    monotone = True
    null_bound = True
    for name, n in GRID_PROBLEMS:
        prob = make_problem(name, n)
        for seed in range(5):
            noisy = add_noise(prob, delta, seed)
            fd = noisy.f_delta
            values = np.array([discrepancy_value(prob.decomp, fd, a) for a in grid])
            monotone = monotone and bool(
                np.all(values[1:] >= values[:-1] * (1 - 1e-12))
            )
            data_sq = np.linalg.norm(fd) ** 2
            worst_inf = max(
                worst_inf,
                abs(discrepancy_value(prob.decomp, fd, 1e14) - data_sq) / data_sq,
            )
            null_sq = np.linalg.norm(fd - prob.decomp.project_range(fd)) ** 2
            worst_zero = max(
                worst_zero, abs(discrepancy_value(prob.decomp, fd, 1e-14) - null_sq)
            )
            null_bound = null_bound and null_sq <= noisy.delta**2 * (1 + 1e-10)
    _report(
        "acceptance-5 discrepancy-monotonicity-and-limits",
        monotone and worst_inf <= 1e-6 and worst_zero <= 1e-6 and null_bound,
        f"nondecreasing on 50-point grids across {len(GRID_PROBLEMS)} problems x 5 seeds; "
        f"g(1e14) off ||f||^2 by {worst_inf:.2e} rel (limit 1e-6); "
        f"g(1e-14) off null norm^2 by {worst_zero:.2e} (limit 1e-6); "
        f"null component within delta^2",
    )


def test_criterion_6_root_certificates():
    """Residual matching hits C*delta with a bracketing certificate."""
    worst_resid = 0.0
    roots = 0
    no_root_cells = []
    certificates = True
    for name, n in GRID_PROBLEMS:
        prob = make_problem(name, n)
        for delta in (1e-1, 1e-2, 1e-3, 1e-4):
            for seed in (1, 2, 3):
                noisy = add_noise(prob, delta, seed)
                for C in (1.1, 1.5, 2.0):
                    cfg = DiscrepancyConfig(C=C)
                    threshold = C * noisy.delta
                    if np.linalg.norm(noisy.f_delta) <= threshold:
                        # The residual equation has no root here; the
                        # solver must say so rather than invent one.
                        with pytest.raises(DataTooNoisyError):
                            solve_alpha(prob.decomp, noisy.f_delta, noisy.delta, cfg)
                        no_root_cells.append((name, delta, seed, C))
                        continue
                    sel = solve_alpha(prob.decomp, noisy.f_delta, noisy.delta, cfg)
                    roots += 1
                    worst_resid = max(
                        worst_resid,
                        abs(sel.achieved_residual - threshold) / threshold,
                    )
                    target = threshold**2
                    certificates = certificates and (
                        discrepancy_value(prob.decomp, noisy.f_delta, sel.alpha / 2)
                        < target
                        < discrepancy_value(prob.decomp, noisy.f_delta, 2 * sel.alpha)
                    )
    scalar = diagonal_decomposition([1.0])
    scalar_worst = 0.0
    for C in (1.1, 1.5, 2.0):
        sel = solve_alpha(scalar, [1.0], 0.1 / C, DiscrepancyConfig(C=C))
        scalar_worst = max(scalar_worst, abs(sel.alpha - 1.0 / 9.0) / (1.0 / 9.0))
    _report(
        "acceptance-6 root-certificate",
        worst_resid <= 1e-8 and certificates and scalar_worst <= 1e-10,
        f"{roots} roots: worst residual error {worst_resid:.2e} (limit 1e-8), "
        f"all g(alpha/2) < (C delta)^2 < g(2 alpha); "
        f"{len(no_root_cells)} cells correctly rejected for ||f_delta|| <= C delta; "
        f"scalar closed-form root off by {scalar_worst:.2e} (limit 1e-10)",
    )


def test_criterion_7_solution_norm_bound():
    """||u_delta|| <= ||y|| in every residual-matched experiment."""
    worst = 0.0
    runs = 0
    for name, n in GRID_PROBLEMS:
        prob = make_problem(name, n)
        y_norm = np.linalg.norm(prob.y)
        for delta in (1e-1, 1e-2, 1e-3, 1e-4):
            for seed in (1, 2, 3):
                noisy = add_noise(prob, delta, seed)
                if np.linalg.norm(noisy.f_delta) <= 1.5 * noisy.delta:
                    continue
                solution, _ = regularized_solve_auto(
                    prob.decomp, noisy.f_delta, noisy.delta
                )
                worst = max(worst, solution.solution_norm / y_norm)
                runs += 1
    for name in ("deriv2", "phillips"):
        for record in run_sweep(name, 64, [1e-1, 1e-2, 1e-3, 1e-4, 1e-5],
                                seed=SWEEP_SEED):
            if np.isfinite(record.u_norm):
                worst = max(worst, record.u_norm / record.y_norm)
                runs += 1
    _report(
        "acceptance-7 solution-norm-bound",
        worst <= 1.0 + 1e-10,
        f"max ||u_delta|| / ||y|| = {worst:.12f} over {runs} experiments "
        f"(limit 1 + 1e-10)",
    )


def test_criterion_8_convergence_under_both_rules():
    """Error decays along the noise sweep under both parameter rules."""
    deltas = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5]
    details = []
    ok = True
    for name in ("deriv2", "phillips"):
        started = time.perf_counter()
        for rule in ("discrepancy", "apriori"):
            records = run_sweep(name, 64, deltas, seed=SWEEP_SEED, rule=rule)
            errors = [r.error_to_y for r in records]
            alphas = [r.alpha for r in records]
            finite = all(np.isfinite(e) for e in errors)
            ratio = errors[-1] / errors[0] if finite else np.inf
            decreasing = all(b < a for a, b in zip(alphas, alphas[1:]))
            ok = ok and finite and ratio <= 0.2 and decreasing
            details.append(f"{name}/{rule}: ratio {ratio:.4f}, alpha decreasing {decreasing}")
        wall = time.perf_counter() - started
        ok = ok and wall < 30.0
        details.append(f"{name} wall {wall:.1f}s (limit 30s)")
    _report(
        "acceptance-8 convergence-under-both-rules",
        ok,
        "; ".join(details) + " (ratio limit 0.2)",
    )


def test_criterion_9_cli_determinism(tmp_path):
    """Byte-identical CSV and JSON from repeated CLI runs."""
    sweep_cmd = [
        sys.executable, "-m", "regkit", "sweep", "--problem", "phillips",
        "--n", "32", "--deltas", "1e-2,1e-3,1e-4", "--seed", "9",
    ]
    outputs = []
    for run in range(2):
        out = tmp_path / f"sweep_{run}.csv"
        proc = subprocess.run(
            sweep_cmd + ["--out", str(out)], capture_output=True, text=True
        )
        assert proc.returncode == 0, proc.stderr
        outputs.append(out.read_bytes())
    csv_identical = outputs[0] == outputs[1]

    choose_cmd = [
        sys.executable, "-m", "regkit", "choose-alpha", "--problem", "diagonal",
        "--n", "8", "--delta", "1e-3", "--seed", "4",
    ]
    runs = [
        subprocess.run(choose_cmd, capture_output=True, text=True) for _ in range(2)
    ]
    json_identical = (
        runs[0].returncode == 0
        and runs[0].returncode == runs[1].returncode
        and runs[0].stdout == runs[1].stdout
    )
    _report(
        "acceptance-9 cli-determinism",
        csv_identical and json_identical,
        f"sweep CSV byte-identical: {csv_identical}; "
        f"choose-alpha JSON byte-identical: {json_identical}",
    )
