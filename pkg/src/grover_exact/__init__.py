"""Exact success probability and coherence dynamics of the two-phase Grover iteration."""
from .core import (
    DEGENERATE_EPS,
    DegenerateRotation,
    DomainError,
    PauliDecomposition,
    PhaseConfig,
    SearchInstance,
    UndefinedCoherence,
    build_g,
    build_initial_density,
    coherence_ratio,
    grover_optimal_iterations,
    grover_optimal_iterations_int,
    li_li_polynomial,
    pauli_decompose,
    success_probability,
    success_probability_xi0,
)
from .kernels import BACKEND
from .oracle import FullRegister, evolve_density, full_circuit_probability
from .scanner import (
    NoFeasibleRange,
    ScanConfig,
    ScanResult,
    exact_success_roots,
    lambda_lower_bound,
    optimize_alpha,
    probability_profile,
    xi_sensitivity,
)

__version__ = "0.1.0"
