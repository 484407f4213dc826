import math

import numpy as np
import pytest

from grover_exact import kernels

PI = math.pi

_ACCEPTANCE = []


def record_acceptance(criterion, description, passed, detail=""):
    _ACCEPTANCE.append((criterion, description, bool(passed), detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, description, passed, detail in _ACCEPTANCE:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] AC{criterion} {description} {detail}".rstrip())


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    return kernels.get_backend(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def matrix_power_probability(g, rho0, m):
    """Independent reference: numpy matrix power, then conjugate once."""
    gm = np.linalg.matrix_power(np.asarray(g), m)
    return (gm @ rho0 @ gm.conj().T)[1, 1].real
