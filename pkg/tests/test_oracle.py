import math

import numpy as np
import pytest

from grover_exact import core
from grover_exact.core import DomainError, PhaseConfig, SearchInstance
from grover_exact.oracle import (
    N_MAX,
    FullRegister,
    RegisterTooLarge,
    evolve_density,
    full_circuit_probability,
)

PI = math.pi


def test_evolve_zero_steps_is_identity():
    rho0 = core.build_initial_density(0.3, 0.4)
    g = core.build_g(PhaseConfig(1.0, 2.0), 0.3)
    np.testing.assert_array_equal(evolve_density(g, rho0, 0), rho0)


def test_evolve_identity_operator():
    rho0 = core.build_initial_density(0.6, -0.7)
    np.testing.assert_allclose(evolve_density(np.eye(2), rho0, 17), rho0, atol=0)


def test_evolve_standard_grover_quarter():
    rho = evolve_density(core.build_g(PhaseConfig(PI, PI), 0.25), core.build_initial_density(0.25, 1), 1)
    assert rho[1, 1].real == pytest.approx(1.0, abs=1e-14)


def test_evolve_preserves_trace_and_spectrum(rng):
    for _ in range(100):
        lam, xi = float(rng.uniform()), float(rng.uniform(-1, 1))
        g = core.build_g(PhaseConfig(*rng.uniform(-PI, PI, 2)), lam)
        rho0 = core.build_initial_density(lam, xi)
        rho = evolve_density(g, rho0, int(rng.integers(0, 60)))
        assert abs(np.trace(rho) - 1) < 1e-12
        np.testing.assert_allclose(np.linalg.eigvalsh(rho), np.linalg.eigvalsh(rho0), atol=1e-12)


def test_evolve_rejects_negative_steps():
    with pytest.raises(DomainError):
        evolve_density(np.eye(2), np.eye(2) / 2, -1)


def test_full_circuit_standard_grover_two_qubits():
    assert full_circuit_probability(2, {3}, PhaseConfig(PI, PI), 1) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("n, marked", [(1, {0}), (3, {2, 5}), (6, {0, 9, 40, 63})])
def test_full_circuit_no_iterations(n, marked):
    assert full_circuit_probability(n, marked, PhaseConfig(0.3, 0.9), 0) == pytest.approx(len(marked) / 2**n, abs=1e-15)


def test_full_circuit_li_li_eighth():
    p = full_circuit_probability(3, {6}, PhaseConfig(PI / 2, -PI / 2), 1)
    assert p == pytest.approx(core.li_li_polynomial(1 / 8), abs=1e-9)


def test_full_circuit_marked_set_position_irrelevant(rng):
    ph = PhaseConfig(1.3, -0.4)
    prefix = full_circuit_probability(5, range(5), ph, 4)
    scattered = full_circuit_probability(5, rng.choice(32, 5, replace=False).tolist(), ph, 4)
    assert prefix == pytest.approx(scattered, abs=1e-13)


@pytest.mark.parametrize("xi", [0, 1])
def test_full_circuit_matches_closed_form(rng, xi):
    for n in (2, 4, 7):
        size = 2**n
        for count in (1, 2, size // 2, size - 1):
            marked = rng.choice(size, count, replace=False).tolist()
            ph = PhaseConfig(*rng.uniform(-PI, PI, 2))
            m = int(rng.integers(0, 21))
            closed = core.success_probability(SearchInstance(count / size, float(xi), m), ph)
            assert full_circuit_probability(n, marked, ph, m, xi) == pytest.approx(closed, abs=1e-9)


def test_full_circuit_all_marked_dephased():
    assert full_circuit_probability(3, range(8), PhaseConfig(1.0, 2.0), 5, 0) == pytest.approx(1.0, abs=1e-14)


def test_register_norm_preserved(rng):
    reg = FullRegister.uniform(10, rng.choice(1024, 7, replace=False).tolist())
    for _ in range(20):
        reg.iterate(PhaseConfig(*rng.uniform(-PI, PI, 2)))
        assert reg.norm() == pytest.approx(1.0, abs=1e-12)


def test_register_blocks_are_orthogonal():
    marked = {1, 4}
    t = FullRegister.block(3, marked, "T")
    r = FullRegister.block(3, marked, "R")
    assert abs(np.vdot(t.amplitudes, r.amplitudes)) == 0
    assert t.marked_probability() == pytest.approx(1.0)
    assert r.marked_probability() == 0.0


def test_register_too_large():
    with pytest.raises(RegisterTooLarge):
        full_circuit_probability(N_MAX + 1, {0}, PhaseConfig(PI, PI), 1)


def test_largest_register_runs():
    p = full_circuit_probability(N_MAX, {5, 77, 2**N_MAX - 1}, PhaseConfig(0.9, -0.9), 3)
    assert p == pytest.approx(core.success_probability(SearchInstance(3 / 2**N_MAX, 1, 3), PhaseConfig(0.9, -0.9)), abs=1e-9)


@pytest.mark.parametrize("xi", [0.5, -1, 2])
def test_unsupported_xi(xi):
    with pytest.raises(DomainError):
        full_circuit_probability(3, {1}, PhaseConfig(PI, PI), 1, xi)


@pytest.mark.parametrize("marked", [set(), {8}, {-1}])
def test_bad_marked_set(marked):
    with pytest.raises(DomainError):
        FullRegister.uniform(3, marked)
