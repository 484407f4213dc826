"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line in the summary."""
import json
import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import matrix_power_probability, record_acceptance
from grover_exact import core, scanner, validation
from grover_exact.core import PhaseConfig, SearchInstance
from grover_exact.oracle import evolve_density, full_circuit_probability

PI = math.pi


def cli(argv, env=None):
    return subprocess.run(
        [sys.executable, "-m", "grover_exact", *argv],
        capture_output=True,
        text=True,
        env={**os.environ, **(env or {})},
        check=False,
    )


def test_ac1_li_li_regression():
    t0 = time.perf_counter()
    p = core.success_probability(SearchInstance(1 / 3, 1.0, 1), PhaseConfig(PI / 2, -PI / 2))
    errs = [abs(p - 25 / 27)]
    for lam in np.linspace(0.0, 1.0, 100):
        got = core.success_probability(SearchInstance(float(lam), 1.0, 1), PhaseConfig(PI / 2, -PI / 2))
        errs.append(abs(got - core.li_li_polynomial(float(lam))))
    elapsed = time.perf_counter() - t0
    ok = max(errs) <= 1e-12 and elapsed < 1.0
    record_acceptance(1, "Li&Li regression", ok, f"max_err={max(errs):.2e} time={elapsed:.2f}s")
    assert ok


def test_ac2_oracle_equivalence():
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    cases = validation.random_instances(rng, 10_000)
    cot = validation.cot_singular_instances(rng, 500)
    degen = validation.degenerate_instances(rng, 500)
    errs = []
    for inst, ph in cases + cot + degen:
        g = core.build_g(ph, inst.lam)
        ref = matrix_power_probability(g, core.build_initial_density(inst.lam, inst.xi), inst.m)
        errs.append(abs(core.success_probability(inst, ph) - ref))
    elapsed = time.perf_counter() - t0
    n_cot = sum(1 for inst, ph in cot if inst.m > 1)
    n_deg = sum(
        1 for inst, ph in degen if abs(math.sin(math.acos(min(1.0, abs(core.build_g(ph, inst.lam).trace().real) / 2)))) <= 1e-8
    )
    ok = max(errs) <= 1e-10 and elapsed < 10.0 and len(errs) >= 10_000 and n_cot > 0 and n_deg > 0
    record_acceptance(
        2, "oracle equivalence", ok,
        f"n={len(errs)} cot={n_cot} degenerate={n_deg} max_err={max(errs):.2e} time={elapsed:.2f}s",
    )
    assert ok


def test_ac3_full_hilbert_reduction():
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    errs = []
    for n in range(2, 11):
        size = 1 << n
        for count in sorted({1, 2, size // 2, size - 1}):
            marked = rng.choice(size, size=count, replace=False).tolist()
            lam = count / size
            for _ in range(20):
                ph = PhaseConfig(*rng.uniform(-PI, PI, size=2))
                m = int(rng.integers(0, 21))
                full = full_circuit_probability(n, marked, ph, m)
                errs.append(abs(full - core.success_probability(SearchInstance(lam, 1.0, m), ph)))
    elapsed = time.perf_counter() - t0
    ok = max(errs) <= 1e-9 and elapsed < 60.0
    record_acceptance(3, "full-Hilbert reduction", ok, f"n={len(errs)} max_err={max(errs):.2e} time={elapsed:.2f}s")
    assert ok


def test_ac4_threshold_reproduction():
    t0 = time.perf_counter()
    lb08 = scanner.lambda_lower_bound(0.268 * PI, 3, 0.8)
    lb09 = scanner.lambda_lower_bound(0.234 * PI, 3, 0.9)
    opt = scanner.optimize_alpha(3, 0.8)
    elapsed = time.perf_counter() - t0
    ok = (
        abs(lb08 - 0.14) <= 0.005
        and abs(lb09 - 0.229) <= 0.005
        and abs(opt.alpha_over_pi - 0.268) <= 0.005
        and elapsed < 30.0
    )
    record_acceptance(
        4, "threshold reproduction", ok,
        f"lb(0.8)={lb08:.5f} lb(0.9)={lb09:.5f} alpha*={opt.alpha_over_pi:.5f}pi time={elapsed:.2f}s",
    )
    assert ok


def test_ac5_exact_success_root():
    roots = scanner.exact_success_roots(0.268 * PI, 3)
    near = [r for r in roots if abs(r - 0.2965) <= 0.001]
    ph = PhaseConfig.matched(0.268 * PI)
    p = [evolve_density(core.build_g(ph, r), core.build_initial_density(r, 1.0), 3)[1, 1].real for r in near]
    ok = bool(near) and min(p) > 1 - 1e-6
    detail = f"root={near[0]:.6f} oracle_P={p[0]:.12f}" if near else f"roots={roots}"
    record_acceptance(5, "exact-success root", ok, detail)
    assert ok


def test_ac6_xi_sensitivity():
    ratio = scanner.xi_sensitivity(0.2, 0.268 * PI, 3)
    res = cli(["sensitivity", "--lambda", "0.2", "--alpha", "0.268pi", "--iters", "3", "--format", "json"])
    manifest = json.loads(res.stderr.strip().splitlines()[-1].removeprefix("# manifest "))
    assumptions = manifest["settings"].get("assumptions", [])
    recorded = res.returncode == 0 and any("beta = -alpha" in a for a in assumptions)

    rng = np.random.default_rng(6)
    errs = []
    for inst, ph in validation.random_instances(rng, 2000):
        general = core.success_probability(SearchInstance(inst.lam, 0.0, inst.m), ph)
        errs.append(abs(core.success_probability_xi0(inst.lam, ph, inst.m) - general))
    ok = abs(ratio - 0.60) <= 0.05 and recorded and max(errs) <= 1e-10
    record_acceptance(
        6, "xi-sensitivity", ok,
        f"ratio={ratio:.5f} assumption_recorded={recorded} xi0_max_err={max(errs):.2e}",
    )
    assert ok


def test_ac7_coherence_dynamics():
    rng = np.random.default_rng(7)
    errs = []
    while len(errs) < 1000:
        inst, ph = validation.random_instances(rng, 1)[0]
        if inst.xi == 0.0:
            continue
        rho0 = core.build_initial_density(inst.lam, inst.xi)
        ref = evolve_density(core.build_g(ph, inst.lam), rho0, inst.m)[1, 0] / rho0[1, 0]
        errs.append(abs(core.coherence_ratio(inst, ph) - ref))
    c0 = core.coherence_ratio(SearchInstance(0.3, 0.7, 0), PhaseConfig(1.0, 2.0))
    exact = c0.real == 1.0 and c0.imag == 0.0
    ok = max(errs) <= 1e-9 and exact
    record_acceptance(7, "coherence dynamics", ok, f"n={len(errs)} max_err={max(errs):.2e} m0={c0}")
    assert ok


def test_ac8_structural_invariants():
    results = validation.check_structure(np.random.default_rng(8), 2000)
    ok = all(r.passed for r in results)
    detail = " ".join(f"{r.name}={r.max_error:.1e}" for r in results)
    record_acceptance(8, "structural invariants", ok, detail)
    assert ok


def test_ac9_standard_grover_collapse():
    rng = np.random.default_rng(9)
    errs = []
    for _ in range(100):
        lam = float(rng.uniform(0.0, 1.0))
        m = int(rng.integers(0, 51))
        p = core.success_probability(SearchInstance(lam, 1.0, m), PhaseConfig(PI, PI))
        errs.append(abs(p - math.sin((2 * m + 1) * math.asin(math.sqrt(lam))) ** 2))
    kopt = core.grover_optimal_iterations(0.25)
    ok = max(errs) <= 1e-10 and kopt == 1.0
    record_acceptance(9, "standard-Grover collapse", ok, f"max_err={max(errs):.2e} k_opt(0.25)={kopt!r}")
    assert ok


@pytest.mark.slow
def test_ac10_determinism():
    validate = ["validate", "--seed", "11", "--samples", "500", "--format", "json"]
    a, b = cli(validate), cli(validate)
    same_validate = a.returncode == b.returncode == 0 and a.stdout == b.stdout

    scan = ["scan", "--alpha", "0.268pi", "--iters", "3", "--threshold", "0.8", "--lambda-grid", "0.001:1:2000", "--format", "csv"]
    optimize = ["optimize", "--iters", "1-3", "--threshold", "0.8", "--format", "csv"]
    outs = {}
    for threads in ("1", "3", "0"):
        env = {"GROVER_EXACT_THREADS": threads}
        outs[threads] = (cli(scan, env).stdout, cli(optimize, env).stdout)
    same_scan = len(set(outs.values())) == 1 and all(o[0] and o[1] for o in outs.values())
    ok = same_validate and same_scan
    record_acceptance(10, "determinism", ok, f"validate_identical={same_validate} thread_independent={same_scan}")
    assert ok
