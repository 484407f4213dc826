import math
import os
import subprocess
import sys

import numpy as np
import pytest

from grover_exact import core, kernels
from grover_exact.core import PhaseConfig, SearchInstance

PI = math.pi


def test_selected_backend_is_known():
    assert kernels.BACKEND in kernels.available_backends()


def test_pure_python_override():
    env = dict(os.environ, GROVER_EXACT_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import grover_exact; print(grover_exact.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


def test_grid_matches_scalar(backend, rng):
    lams = np.concatenate([[0.0, 1.0], rng.uniform(size=200)])
    for _ in range(20):
        a, b = rng.uniform(-PI, PI, 2)
        xi = float(rng.uniform(-1, 1))
        m = int(rng.integers(0, 40))
        grid = backend.success_grid(a, b, xi, m, lams)
        ref = [core.success_probability(SearchInstance(float(x), xi, m), PhaseConfig(a, b)) for x in lams]
        np.testing.assert_allclose(grid, ref, atol=1e-12, rtol=0)


def test_grid_degenerate_points(backend):
    lams = np.linspace(0, 1, 11)
    for a in (0.0, 1e-11, 3e-10):
        grid = backend.success_grid(a, -a, 0.7, 25, lams)
        ref = [core.success_probability(SearchInstance(float(x), 0.7, 25), PhaseConfig.matched(a)) for x in lams]
        np.testing.assert_allclose(grid, ref, atol=1e-14)


def test_backends_agree_on_threshold_scan():
    names = kernels.available_backends()
    if len(names) < 2:
        pytest.skip("compiled kernels not built")
    fast, slow = (kernels.get_backend(n) for n in names)
    alphas = np.linspace(0.05 * PI, PI, 300)
    lams = np.linspace(0.001, 1, 1000)
    for m, th in [(1, 0.9), (3, 0.8), (5, 0.95)]:
        np.testing.assert_array_equal(
            fast.last_failure_indices(alphas, m, th, lams, 1.0),
            slow.last_failure_indices(alphas, m, th, lams, 1.0),
        )


def test_last_failure_index_semantics(backend):
    lams = np.linspace(0.001, 1, 500)
    alphas = np.array([0.268 * PI, 0.5 * PI])
    idx = backend.last_failure_indices(alphas, 3, 0.8, lams, 1.0)
    for a, i in zip(alphas, idx):
        p = backend.success_grid(a, -a, 1.0, 3, lams)
        assert p[i] < 0.8 and np.all(p[i + 1 :] >= 0.8)


def test_last_failure_none(backend):
    lams = np.linspace(0.5, 1, 50)
    assert backend.last_failure_indices(np.array([PI]), 0, 0.4, lams, 1.0)[0] == -1


def test_statevector_kernels_agree(backend, rng):
    n = 9
    mask = np.zeros(2**n, dtype=np.uint8)
    mask[rng.choice(2**n, 11, replace=False)] = 1
    start = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    start /= np.linalg.norm(start)
    ref = start.copy()
    pure = kernels.get_backend("python")
    pure.evolve_statevector(ref, mask, 0.8, -2.1, 13)
    amps = start.copy()
    backend.evolve_statevector(amps, mask, 0.8, -2.1, 13)
    np.testing.assert_allclose(amps, ref, atol=1e-13)
    assert backend.marked_population(amps, mask) == pytest.approx(pure.marked_population(ref, mask), abs=1e-13)
