"""Numpy implementations of the hot kernels.

Same signatures as the compiled ``_kernels`` module; used when the extension
is unavailable or ``GROVER_EXACT_PURE_PYTHON`` is set.
"""
from __future__ import annotations

import numpy as np

from . import core

_EPS = core.DEGENERATE_EPS


def success_grid(alpha, beta, xi, m, lambdas):
    """Closed-form success probability at fixed phases over an array of lambdas."""
    lam = np.ascontiguousarray(lambdas, dtype=float)
    m = int(m)
    if m == 0:
        return lam.copy()
    sa, ca = np.sin(0.5 * alpha), np.cos(0.5 * alpha)
    sb = np.sin(0.5 * beta)
    delta = 0.5 * (alpha + beta)
    s = np.sqrt(lam * (1.0 - lam))
    cos_phi = np.cos(delta) + 2.0 * lam * sb * sa
    b1 = 2.0 * s * ca * sb
    b2 = -2.0 * s * sa * sb
    b3 = np.sin(delta) - 2.0 * lam * sb * ca
    sin_phi = np.sqrt(b1 * b1 + b2 * b2 + b3 * b3)
    degenerate = sin_phi <= _EPS
    safe = np.where(degenerate, 1.0, sin_phi)
    n1, n2, n3 = b1 / safe, b2 / safe, b3 / safe
    t = m * np.arctan2(sin_phi, cos_phi)
    sin_t, cos_t = np.sin(t), np.cos(t)
    s2 = sin_t * sin_t
    p = lam + s2 * (n1 * n1 + n2 * n2) * (1.0 - 2.0 * lam) - 2.0 * xi * s * (
        s2 * n1 * n3 - sin_t * cos_t * n2
    )
    edge = (lam == 0.0) | (lam == 1.0)
    p[edge] = lam[edge]
    for i in np.flatnonzero(degenerate & ~edge):
        p[i] = core.success_probability(
            core.SearchInstance(float(lam[i]), xi, m), core.PhaseConfig(alpha, beta)
        )
    return p


def last_failure_indices(alphas, m, threshold, lambdas, xi=1.0):
    """Per alpha (with beta = -alpha), the last lambda index where P < threshold; -1 if none."""
    alphas = np.ascontiguousarray(alphas, dtype=float)
    out = np.empty(alphas.shape[0], dtype=np.int64)
    for k, a in enumerate(alphas):
        fail = np.flatnonzero(success_grid(a, -a, xi, m, lambdas) < threshold)
        out[k] = fail[-1] if fail.size else -1
    return out


def evolve_statevector(amps, marked, alpha, beta, m):
    """Apply m rounds of oracle-then-diffuser to ``amps`` in place."""
    mask = np.asarray(marked, dtype=bool)
    ea = np.exp(1j * alpha)
    eb = np.exp(1j * beta)
    for _ in range(int(m)):
        amps[mask] *= ea
        mean = amps.mean()
        amps *= eb
        amps += (1.0 - eb) * mean


def marked_population(amps, marked):
    mask = np.asarray(marked, dtype=bool)
    a = amps[mask]
    return float(np.sum(a.real * a.real + a.imag * a.imag))
