"""Closed-form quantities of the two-phase Grover iteration.

Everything lives in the two-dimensional subspace spanned by the unmarked
state |R> (index 0) and the marked state |T> (index 1).  One iteration is

    G(alpha, beta) = V(beta) U(alpha)

with the oracle U(alpha) = I - (1 - e^{i alpha}) |T><T| applied first and the
diffuser V(beta) = e^{i beta} I + (1 - e^{i beta}) |psi><psi| second.

G is written as e^{i delta} (cos(phi) I - i sin(phi) n.sigma) with
delta = (alpha + beta) / 2, phi in [0, pi] and a unit axis n.  The axis
components are the negatives of the textbook expressions

    n1 = -2 sqrt(lam (1 - lam)) cos(alpha/2) sin(beta/2) / sin(phi)
    n2 =  2 sqrt(lam (1 - lam)) sin(alpha/2) sin(beta/2) / sin(phi)
    n3 = (-sin(delta) + 2 lam sin(beta/2) cos(alpha/2)) / sin(phi)

which describe the same rotation in the opposite orientation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DEGENERATE_EPS",
    "DomainError",
    "DegenerateRotation",
    "UndefinedCoherence",
    "PhaseConfig",
    "SearchInstance",
    "PauliDecomposition",
    "build_g",
    "build_initial_density",
    "pauli_decompose",
    "success_probability",
    "success_probability_xi0",
    "li_li_polynomial",
    "coherence_ratio",
    "grover_optimal_iterations",
    "grover_optimal_iterations_int",
    "canonical_angle",
]

DEGENERATE_EPS = 1e-9

_I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class DomainError(ValueError):
    """An argument lies outside the domain of the quantity requested."""


class DegenerateRotation(ArithmeticError):
    """G is a multiple of the identity, so no rotation axis exists."""


class UndefinedCoherence(ArithmeticError):
    """The initial off-diagonal element vanishes and the ratio is undefined."""


def canonical_angle(x: float) -> float:
    """Map an angle in radians into (-pi, pi]; exact for inputs already there."""
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"angle must be finite, got {x!r}")
    r = math.remainder(x, 2.0 * math.pi)
    return math.pi if r == -math.pi else r


@dataclass(frozen=True)
class PhaseConfig:
    """Oracle phase ``alpha`` and diffuser phase ``beta``, in radians."""

    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", canonical_angle(self.alpha))
        object.__setattr__(self, "beta", canonical_angle(self.beta))

    @classmethod
    def matched(cls, alpha: float) -> PhaseConfig:
        """The ``beta = -alpha`` phase-matching family."""
        return cls(alpha, -alpha)

    @property
    def delta(self) -> float:
        return 0.5 * (self.alpha + self.beta)


@dataclass(frozen=True)
class SearchInstance:
    """Marked fraction ``lam``, coherence ``xi`` and iteration count ``m``."""

    lam: float
    xi: float = 1.0
    m: int = 1

    def __post_init__(self):
        _check_lambda(self.lam)
        if not (math.isfinite(self.xi) and -1.0 <= self.xi <= 1.0):
            raise DomainError(f"xi must lie in [-1, 1], got {self.xi!r}")
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 0:
            raise DomainError(f"m must be a non-negative integer, got {self.m!r}")
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "xi", float(self.xi))
        object.__setattr__(self, "m", int(self.m))


@dataclass(frozen=True)
class PauliDecomposition:
    """G = e^{i delta} (cos(phi) I - i sin(phi) (n1 sx + n2 sy + n3 sz))."""

    delta: float
    phi: float
    n1: float
    n2: float
    n3: float

    @property
    def axis(self) -> tuple[float, float, float]:
        return (self.n1, self.n2, self.n3)

    def matrix(self) -> np.ndarray:
        """Rebuild the 2x2 unitary from the decomposition."""
        n_sigma = self.n1 * SIGMA_X + self.n2 * SIGMA_Y + self.n3 * SIGMA_Z
        su2 = math.cos(self.phi) * _I2 - 1j * math.sin(self.phi) * n_sigma
        return np.exp(1j * self.delta) * su2


def _check_lambda(lam: float) -> None:
    if not (math.isfinite(lam) and 0.0 <= lam <= 1.0):
        raise DomainError(f"lambda must lie in [0, 1], got {lam!r}")


def _as_phases(phases: PhaseConfig | tuple[float, float]) -> PhaseConfig:
    if isinstance(phases, PhaseConfig):
        return phases
    return PhaseConfig(*phases)


def build_g(phases: PhaseConfig, lam: float) -> np.ndarray:
    """The iteration V(beta) U(alpha) in the (|R>, |T>) basis."""
    phases = _as_phases(phases)
    _check_lambda(lam)
    psi = np.array([math.sqrt(1.0 - lam), math.sqrt(lam)], dtype=complex)
    eb = complex(math.cos(phases.beta), math.sin(phases.beta))
    ea = complex(math.cos(phases.alpha), math.sin(phases.alpha))
    oracle = np.diag([1.0, ea])
    diffuser = eb * _I2 + (1.0 - eb) * np.outer(psi, psi.conj())
    return diffuser @ oracle


def build_initial_density(lam: float, xi: float = 1.0) -> np.ndarray:
    """Initial register with coherence ``xi`` on the off-diagonal."""
    inst = SearchInstance(lam, xi, 0)
    off = inst.xi * math.sqrt(inst.lam * (1.0 - inst.lam))
    return np.array([[1.0 - inst.lam, off], [off, inst.lam]], dtype=complex)


def _axis_terms(alpha: float, beta: float, lam: float):
    """cos(phi) and the unnormalized axis sin(phi) * n."""
    sa, ca = math.sin(0.5 * alpha), math.cos(0.5 * alpha)
    sb = math.sin(0.5 * beta)
    delta = 0.5 * (alpha + beta)
    s = math.sqrt(lam * (1.0 - lam))
    cos_phi = math.cos(delta) + 2.0 * lam * sb * sa
    b1 = 2.0 * s * ca * sb
    b2 = -2.0 * s * sa * sb
    b3 = math.sin(delta) - 2.0 * lam * sb * ca
    return cos_phi, b1, b2, b3


def pauli_decompose(phases: PhaseConfig, lam: float) -> PauliDecomposition:
    """Global phase, rotation angle and unit axis of ``build_g(phases, lam)``.

    sin(phi) is taken as the norm of the unnormalized axis rather than from
    arccos(cos(phi)); that keeps phi accurate when G is close to +-I.

    Raises DegenerateRotation when |sin(phi)| <= DEGENERATE_EPS.
    """
    phases = _as_phases(phases)
    _check_lambda(lam)
    cos_phi, b1, b2, b3 = _axis_terms(phases.alpha, phases.beta, lam)
    sin_phi = math.sqrt(b1 * b1 + b2 * b2 + b3 * b3)
    if sin_phi <= DEGENERATE_EPS:
        raise DegenerateRotation(
            f"|sin(phi)| = {sin_phi:.3g} for alpha={phases.alpha}, beta={phases.beta}, lambda={lam}"
        )
    return PauliDecomposition(
        delta=phases.delta,
        phi=math.atan2(sin_phi, cos_phi),
        n1=b1 / sin_phi,
        n2=b2 / sin_phi,
        n3=b3 / sin_phi,
    )


def _power_oracle_density(phases: PhaseConfig, lam: float, xi: float, m: int) -> np.ndarray:
    g = np.linalg.matrix_power(build_g(phases, lam), m)
    return g @ build_initial_density(lam, xi) @ g.conj().T


def _closed_form_probability(dec: PauliDecomposition, lam: float, xi: float, m: int) -> float:
    s = math.sqrt(lam * (1.0 - lam))
    t = m * dec.phi
    sin_t, cos_t = math.sin(t), math.cos(t)
    s2 = sin_t * sin_t
    transverse = dec.n1 * dec.n1 + dec.n2 * dec.n2  # 1 - n3^2 without cancellation
    return (
        lam
        + s2 * transverse * (1.0 - 2.0 * lam)
        - 2.0 * xi * s * (s2 * dec.n1 * dec.n3 - sin_t * cos_t * dec.n2)
    )


def success_probability(inst: SearchInstance, phases: PhaseConfig) -> float:
    """Population of |T> after ``inst.m`` iterations.

    The cot(m phi) factor is carried as sin(m phi) cos(m phi), so the value is
    finite when m phi is a multiple of pi.  Near-identity iterations are
    evaluated by an explicit matrix power instead.
    """
    phases = _as_phases(phases)
    if inst.m == 0 or inst.lam in (0.0, 1.0):
        return inst.lam
    try:
        dec = pauli_decompose(phases, inst.lam)
    except DegenerateRotation:
        rho = _power_oracle_density(phases, inst.lam, inst.xi, inst.m)
        return float(rho[1, 1].real)
    return _closed_form_probability(dec, inst.lam, inst.xi, inst.m)


def success_probability_xi0(lam: float, phases: PhaseConfig, m: int) -> float:
    """Success probability for a fully dephased start (xi = 0)."""
    phases = _as_phases(phases)
    inst = SearchInstance(lam, 0.0, m)
    if inst.m == 0 or inst.lam in (0.0, 1.0):
        return inst.lam
    try:
        dec = pauli_decompose(phases, inst.lam)
    except DegenerateRotation:
        return float(_power_oracle_density(phases, inst.lam, 0.0, inst.m)[1, 1].real)
    s2 = math.sin(inst.m * dec.phi) ** 2
    one_minus_n3sq = dec.n1 * dec.n1 + dec.n2 * dec.n2
    return inst.lam + s2 * (one_minus_n3sq - 2.0 * inst.lam * one_minus_n3sq)


def li_li_polynomial(lam: float) -> float:
    """Single-iteration success probability at alpha = -beta = pi/2."""
    _check_lambda(lam)
    return 4.0 * lam**3 - 8.0 * lam**2 + 5.0 * lam


def coherence_ratio(inst: SearchInstance, phases: PhaseConfig) -> complex:
    """<T|rho_m|R> / <T|rho_0|R> as a complex number.

    Raises UndefinedCoherence when xi = 0 or lambda is 0 or 1.
    """
    phases = _as_phases(phases)
    lam, xi, m = inst.lam, inst.xi, inst.m
    if xi == 0.0 or lam in (0.0, 1.0):
        raise UndefinedCoherence(f"initial coherence vanishes (lambda={lam}, xi={xi})")
    if m == 0:
        return complex(1.0, 0.0)
    s = math.sqrt(lam * (1.0 - lam))
    xs = xi * s
    try:
        dec = pauli_decompose(phases, lam)
    except DegenerateRotation:
        rho = _power_oracle_density(phases, lam, xi, m)
        return complex(rho[1, 0]) / xs
    n1, n2, n3 = dec.axis
    t = m * dec.phi
    sin_t, cos_t = math.sin(t), math.cos(t)
    s2, sc = sin_t * sin_t, sin_t * cos_t
    w = 1.0 - 2.0 * lam
    re = 1.0 + (s2 * (n1 * n3 * w - 2.0 * xs * (1.0 - n1 * n1)) + sc * n2 * w) / xs
    im = (s2 * (n2 * n3 * w + 2.0 * n1 * n2 * xs) + sc * (-n1 * w + 2.0 * n3 * xs)) / xs
    return complex(re, im)


def grover_optimal_iterations(lam: float) -> float:
    """Real-valued optimal iteration count pi/(2 theta) - 1/2, theta = 2 asin(sqrt(lam)).

    Evaluated as acos(sqrt(lam)) / (2 asin(sqrt(lam))), the same quantity
    without the cancellation in the subtraction.
    """
    _check_lambda(lam)
    if lam == 0.0:
        raise DomainError("lambda = 0 gives theta = 0; no marked state to amplify")
    r = math.sqrt(lam)
    return math.acos(r) / (2.0 * math.asin(r))


def grover_optimal_iterations_int(lam: float) -> int:
    """Round-half-up of :func:`grover_optimal_iterations`, floored at 0.

    Values within 1e-12 of a half-integer count as ties.
    """
    k = grover_optimal_iterations(lam)
    return max(0, math.floor(k + 0.5 + 1e-12))
