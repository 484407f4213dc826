"""Scans over the alpha = -beta phase-matching family.

All scans start from a pure register (xi = 1) unless stated otherwise.
Grid evaluation goes through :mod:`grover_exact.kernels`; everything that
refines a grid answer calls the scalar closed form in :mod:`grover_exact.core`.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from . import kernels
from .core import (
    DomainError,
    PhaseConfig,
    SearchInstance,
    build_g,
    build_initial_density,
    success_probability,
    success_probability_xi0,
)
from .oracle import evolve_density

__all__ = [
    "ALPHA_GRID",
    "LAMBDA_GRID",
    "NoFeasibleRange",
    "ScanConfig",
    "ScanResult",
    "alpha_table",
    "exact_success_roots",
    "lambda_lower_bound",
    "optimize_alpha",
    "probability_profile",
    "scan_threads",
    "xi_sensitivity",
]

ALPHA_GRID = (0.05 * math.pi, math.pi, 2000)
LAMBDA_GRID = (0.001, 1.0, 4000)
ROOT_TOL = 1e-6


class NoFeasibleRange(RuntimeError):
    """No lambda interval ending at the top of the grid meets the threshold."""

    lambda_min = 1.0


@dataclass(frozen=True)
class ScanConfig:
    m: int = 3
    threshold: float = 0.8
    alpha_grid: tuple = ALPHA_GRID
    lambda_grid: tuple = LAMBDA_GRID
    refine_tol: float = 1e-6
    threads: int | None = None

    def __post_init__(self):
        _check_threshold(self.threshold)
        if int(self.m) != self.m or self.m < 0:
            raise DomainError(f"m must be a non-negative integer, got {self.m!r}")
        for name in ("alpha_grid", "lambda_grid"):
            lo, hi, steps = getattr(self, name)
            if int(steps) < 1 or not lo <= hi or (int(steps) > 1 and lo == hi):
                raise DomainError(f"{name} must be (lo, hi, steps) with lo < hi, steps >= 1")
        lo, hi, _ = self.lambda_grid
        if lo < 0.0 or hi > 1.0:
            raise DomainError("lambda_grid must lie within [0, 1]")
        if not self.refine_tol > 0:
            raise DomainError("refine_tol must be positive")


@dataclass(frozen=True)
class ScanResult:
    alpha: float
    m: int
    threshold: float
    lambda_min: float
    roots: tuple
    p_min_over_range: float

    @property
    def alpha_over_pi(self) -> float:
        return self.alpha / math.pi

    def to_dict(self) -> dict:
        d = asdict(self)
        d["roots"] = list(self.roots)
        d["alpha_over_pi"] = self.alpha_over_pi
        return d


def _check_threshold(threshold):
    if not 0.0 < threshold < 1.0:
        raise DomainError(f"threshold must lie in (0, 1), got {threshold!r}")


def _grid(spec) -> np.ndarray:
    lo, hi, steps = spec
    return np.linspace(float(lo), float(hi), int(steps))


def scan_threads(threads=None) -> int:
    """Worker count: explicit value, else GROVER_EXACT_THREADS, else all cores (0 = auto)."""
    if threads is None:
        threads = int(os.environ.get("GROVER_EXACT_THREADS", "0") or 0)
    if threads < 0:
        raise DomainError("thread count must be non-negative")
    return threads or os.cpu_count() or 1


def _p(lam, alpha, m, xi=1.0):
    return success_probability(SearchInstance(lam, xi, m), PhaseConfig.matched(alpha))


def _bisect_crossing(g, lo, hi, tol):
    # g(lo) < 0 <= g(hi); returns the passing end of the final bracket
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
    return hi


def _lower_bound_on_grid(alpha, m, threshold, lams, p, refine_tol):
    """Certified lower bound and the minimum of P over [bound, hi]."""
    if p[-1] < threshold:
        raise NoFeasibleRange(
            f"P({lams[-1]:.6g}) = {p[-1]:.6g} < {threshold} for alpha={alpha}, m={m}"
        )

    def g(x):
        return _p(x, alpha, m) - threshold

    fail = np.flatnonzero(p < threshold)
    if fail.size:
        start = int(fail[-1]) + 1
        lower = _bisect_crossing(g, lams[start - 1], lams[start], refine_tol)
    else:
        start, lower = 0, float(lams[0])
    p_min = min(float(p[start:].min()), _p(lower, alpha, m))

    # Grid points can straddle a dip below threshold; refine every interior
    # local minimum, rightmost first, and move the bound past a failing one.
    n = len(lams)
    for i in range(n - 2, max(start, 1) - 1, -1):
        if not (p[i] <= p[i - 1] and p[i] <= p[i + 1]):
            continue
        res = minimize_scalar(
            lambda x: _p(x, alpha, m),
            bounds=(max(float(lams[i - 1]), lower), float(lams[i + 1])),
            method="bounded",
            options={"xatol": refine_tol},
        )
        if res.fun < threshold:
            lower = _bisect_crossing(g, float(res.x), float(lams[i + 1]), refine_tol)
            p_min = min(float(p[i + 1 :].min()), _p(lower, alpha, m))
            break
        p_min = min(p_min, float(res.fun))
    return float(lower), p_min


def lambda_lower_bound(alpha, m, threshold, *, lambda_grid=LAMBDA_GRID, refine_tol=1e-6):
    """Smallest lambda with P >= threshold on all of [lambda, hi], for beta = -alpha, xi = 1.

    Raises NoFeasibleRange when the top of the grid already fails.
    """
    _check_threshold(threshold)
    lams = _grid(lambda_grid)
    p = kernels.success_grid(float(alpha), -float(alpha), 1.0, int(m), lams)
    return _lower_bound_on_grid(float(alpha), int(m), threshold, lams, p, refine_tol)[0]


def _coarse_bounds(alphas, m, threshold, lams, threads):
    workers = scan_threads(threads)
    chunks = np.array_split(alphas, min(len(alphas), 4 * workers))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(
            pool.map(lambda a: kernels.last_failure_indices(a, m, threshold, lams, 1.0), chunks)
        )
    idx = np.concatenate(parts)
    bound = np.where(idx >= len(lams) - 1, np.inf, lams[np.minimum(idx + 1, len(lams) - 1)])
    return np.where(idx < 0, lams[0], bound)


def optimize_alpha(m, threshold, config: ScanConfig | None = None) -> ScanResult:
    """Phase alpha (beta = -alpha) with the smallest lambda lower bound.

    A coarse pass reads the bound off the grid for every alpha; the best grid
    alpha is then refined by repeated 9-point subdivision of its neighbourhood
    until the bracket is narrower than ``refine_tol``.  The bound can jump
    discontinuously in alpha, which rules out derivative-based refinement.
    Ties go to the smaller alpha.
    """
    cfg = config or ScanConfig(m=m, threshold=threshold)
    _check_threshold(threshold)
    m = int(m)
    alphas = _grid(cfg.alpha_grid)
    lams = _grid(cfg.lambda_grid)
    coarse = _coarse_bounds(alphas, m, threshold, lams, cfg.threads)
    if not np.isfinite(coarse).any():
        raise NoFeasibleRange(f"no alpha in the grid reaches P >= {threshold} at m={m}")
    i = int(np.argmin(coarse))

    def refined(a):
        p = kernels.success_grid(a, -a, 1.0, m, lams)
        try:
            return _lower_bound_on_grid(a, m, threshold, lams, p, cfg.refine_tol)[0]
        except NoFeasibleRange:
            return math.inf

    best = (refined(float(alphas[i])), float(alphas[i]))
    lo, hi = float(alphas[max(i - 1, 0)]), float(alphas[min(i + 1, len(alphas) - 1)])
    while hi - lo > cfg.refine_tol:
        cand = np.linspace(lo, hi, 9)
        vals = [(refined(float(a)), float(a)) for a in cand]
        k = min(range(len(vals)), key=lambda j: vals[j])
        best = min(best, vals[k])
        lo, hi = float(cand[max(k - 1, 0)]), float(cand[min(k + 1, len(cand) - 1)])

    alpha = best[1]
    p = kernels.success_grid(alpha, -alpha, 1.0, m, lams)
    lambda_min, p_min = _lower_bound_on_grid(alpha, m, threshold, lams, p, cfg.refine_tol)
    return ScanResult(
        alpha=alpha,
        m=m,
        threshold=float(threshold),
        lambda_min=lambda_min,
        roots=tuple(exact_success_roots(alpha, m, lambda_grid=cfg.lambda_grid)),
        p_min_over_range=p_min,
    )


def alpha_table(ms=range(1, 7), threshold=0.8, config: ScanConfig | None = None) -> list:
    """optimize_alpha for each iteration count in ``ms``."""
    base = config or ScanConfig(threshold=threshold)
    rows = []
    for m in ms:
        cfg = ScanConfig(
            m=m,
            threshold=threshold,
            alpha_grid=base.alpha_grid,
            lambda_grid=base.lambda_grid,
            refine_tol=base.refine_tol,
            threads=base.threads,
        )
        rows.append(optimize_alpha(m, threshold, cfg))
    return rows


def exact_success_roots(alpha, m, *, lambda_grid=LAMBDA_GRID, tol=ROOT_TOL):
    """Marked fractions in (0, 1) where P reaches 1 within ``tol`` (beta = -alpha, xi = 1).

    Each local maximum of P on the grid is refined by bounded scalar search
    and kept only if the iterated-conjugation oracle agrees it is within tol
    of 1.
    """
    m = int(m)
    if m == 0:
        return []
    alpha = float(alpha)
    lams = _grid(lambda_grid)
    lams = lams[(lams > 0.0) & (lams < 1.0)]
    if lams.size < 2:
        return []
    p = kernels.success_grid(alpha, -alpha, 1.0, m, lams)
    padded = np.concatenate(([-np.inf], p, [-np.inf]))
    peaks = [
        i
        for i in range(len(p))
        if padded[i + 1] > padded[i] and padded[i + 1] >= padded[i + 2]
    ]
    phases = PhaseConfig.matched(alpha)
    roots = []
    for i in peaks:
        a = float(lams[i - 1]) if i > 0 else 0.0
        b = float(lams[i + 1]) if i + 1 < len(lams) else 1.0
        res = minimize_scalar(
            lambda x: -_p(x, alpha, m),
            bounds=(a, b),
            method="bounded",
            options={"xatol": 1e-12},
        )
        x = float(res.x)
        # P -> 1 as lambda -> 1 for every phase; that endpoint is not a root
        if not 0.0 < x < 1.0 - tol or -res.fun <= 1.0 - tol:
            continue
        rho = evolve_density(build_g(phases, x), build_initial_density(x, 1.0), m)
        if rho[1, 1].real > 1.0 - tol and all(abs(x - r) > tol for r in roots):
            roots.append(x)
    return sorted(roots)


def xi_sensitivity(lam, alpha, m):
    """P(xi = 0) / P(xi = 1) for beta = -alpha.

    The dephased value uses its own reduced formula and is checked against
    the general expression evaluated at xi = 0.
    """
    phases = PhaseConfig.matched(alpha)
    p1 = success_probability(SearchInstance(lam, 1.0, m), phases)
    p0 = success_probability_xi0(lam, phases, m)
    p0_general = success_probability(SearchInstance(lam, 0.0, m), phases)
    if abs(p0 - p0_general) > 1e-10:
        raise ArithmeticError(f"xi=0 forms disagree: {p0!r} vs {p0_general!r}")
    if p1 < 1e-12:
        raise ZeroDivisionError(f"P(xi=1) = {p1:.3g} is too small to normalize by")
    return p0 / p1


def probability_profile(alpha, m, xi, lambda_grid, beta=None) -> np.ndarray:
    """Rows of (lambda, P) over a monotone lambda grid.

    ``lambda_grid`` is either ``(lo, hi, steps)`` or an explicit sequence.
    ``beta`` defaults to ``-alpha``.
    """
    if (
        isinstance(lambda_grid, tuple)
        and len(lambda_grid) == 3
        and isinstance(lambda_grid[2], (int, np.integer))
    ):
        lams = _grid(lambda_grid)
    else:
        lams = np.asarray(lambda_grid, dtype=float)
    if lams.ndim != 1 or np.any(np.diff(lams) < 0):
        raise DomainError("lambda grid must be a monotone non-decreasing sequence")
    if lams.size and (lams.min() < 0.0 or lams.max() > 1.0):
        raise DomainError("lambda grid must lie within [0, 1]")
    SearchInstance(0.5, xi, m)  # validates xi and m
    phases = PhaseConfig(alpha, -alpha if beta is None else beta)
    p = kernels.success_grid(phases.alpha, phases.beta, float(xi), int(m), lams)
    return np.column_stack([lams, p])
