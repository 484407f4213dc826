"""Brute-force verifiers that share no algebra with the closed forms.

``evolve_density`` conjugates the 2x2 initial density matrix by G one
iteration at a time.  ``full_circuit_probability`` runs the oracle and
diffuser on the full 2^n amplitude vector and never forms the reduced
two-level picture at all.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .core import DomainError, PhaseConfig, _as_phases

__all__ = [
    "N_MAX",
    "RegisterTooLarge",
    "FullRegister",
    "evolve_density",
    "full_circuit_probability",
]

N_MAX = 14


class RegisterTooLarge(DomainError):
    pass


def evolve_density(g: np.ndarray, rho0: np.ndarray, m: int) -> np.ndarray:
    """Return G^m rho0 (G^dagger)^m by m successive conjugations."""
    g = np.asarray(g, dtype=complex)
    rho = np.array(rho0, dtype=complex)
    if g.shape != (2, 2) or rho.shape != (2, 2):
        raise DomainError("expected 2x2 matrices")
    if int(m) != m or m < 0:
        raise DomainError(f"m must be a non-negative integer, got {m!r}")
    gh = g.conj().T
    for _ in range(int(m)):
        rho = g @ rho @ gh
    return rho


@dataclass
class FullRegister:
    """Amplitudes of an n-qubit register plus the indices of marked items."""

    n: int
    amplitudes: np.ndarray
    marked_set: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not 1 <= self.n <= N_MAX:
            raise RegisterTooLarge(f"n must be in [1, {N_MAX}], got {self.n}")
        size = 1 << self.n
        self.marked_set = frozenset(int(i) for i in self.marked_set)
        if not self.marked_set:
            raise DomainError("marked set must be nonempty")
        if min(self.marked_set) < 0 or max(self.marked_set) >= size:
            raise DomainError(f"marked indices must lie in [0, {size})")
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (size,):
            raise DomainError(f"expected {size} amplitudes, got {self.amplitudes.shape}")

    @classmethod
    def uniform(cls, n: int, marked) -> FullRegister:
        """H^n |0...0>: equal amplitude on every basis state."""
        size = 1 << n
        return cls(n, np.full(size, size**-0.5, dtype=np.complex128), frozenset(marked))

    @classmethod
    def block(cls, n: int, marked, which: str) -> FullRegister:
        """Uniform superposition over the marked ("T") or unmarked ("R") items."""
        reg = cls.uniform(n, marked)
        mask = reg.mask
        if which == "R":
            mask = ~mask
        elif which != "T":
            raise ValueError("which must be 'R' or 'T'")
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[mask] = 1.0 / np.sqrt(np.count_nonzero(mask))
        reg.amplitudes = amps
        return reg

    @property
    def mask(self) -> np.ndarray:
        mask = np.zeros(1 << self.n, dtype=bool)
        mask[list(self.marked_set)] = True
        return mask

    @property
    def marked_fraction(self) -> float:
        return float(Fraction(len(self.marked_set), 1 << self.n))

    def iterate(self, phases: PhaseConfig, m: int = 1) -> FullRegister:
        phases = _as_phases(phases)
        kernels.evolve_statevector(
            self.amplitudes, self.mask.view(np.uint8), phases.alpha, phases.beta, int(m)
        )
        return self

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def marked_probability(self) -> float:
        return kernels.marked_population(self.amplitudes, self.mask.view(np.uint8))


def full_circuit_probability(n: int, marked_set, phases: PhaseConfig, m: int, xi01: int = 1) -> float:
    """Probability of measuring a marked item after m full-register iterations.

    ``xi01=1`` starts from the uniform superposition.  ``xi01=0`` starts from
    the dephased mixture of the unmarked and marked blocks, weighted by
    1 - lambda and lambda.
    """
    phases = _as_phases(phases)
    if n > N_MAX:
        raise RegisterTooLarge(f"n={n} exceeds the supported maximum of {N_MAX}")
    if xi01 not in (0, 1):
        raise DomainError(f"full-register simulation supports xi in {{0, 1}}, got {xi01!r}")
    if xi01 == 1:
        return FullRegister.uniform(n, marked_set).iterate(phases, m).marked_probability()
    marked = frozenset(marked_set)
    lam = FullRegister.uniform(n, marked).marked_fraction
    total = lam * FullRegister.block(n, marked, "T").iterate(phases, m).marked_probability()
    if len(marked) < (1 << n):
        unmarked = FullRegister.block(n, marked, "R").iterate(phases, m)
        total += (1.0 - lam) * unmarked.marked_probability()
    return total
