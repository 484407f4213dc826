# cython: language_level=3
"""Compiled hot loops: closed-form grid evaluation, threshold scans and
statevector iteration.  Mirrors ``_purepy`` function for function."""

import numpy as np

from libc.math cimport sin, cos, sqrt, atan2

cdef double _EPS = 1e-9


cdef inline void _mat_mul(double complex* a, double complex* b, double complex* out) noexcept nogil:
    cdef double complex r0 = a[0] * b[0] + a[1] * b[2]
    cdef double complex r1 = a[0] * b[1] + a[1] * b[3]
    cdef double complex r2 = a[2] * b[0] + a[3] * b[2]
    cdef double complex r3 = a[2] * b[1] + a[3] * b[3]
    out[0] = r0
    out[1] = r1
    out[2] = r2
    out[3] = r3


cdef double _power_probability(double lam, double xi, double alpha, double beta, long m) noexcept nogil:
    # <T| G^m rho0 G^m+ |T> by repeated squaring; used only near G = +-I
    cdef double complex ea = cos(alpha) + 1j * sin(alpha)
    cdef double complex eb = cos(beta) + 1j * sin(beta)
    cdef double r = sqrt(1.0 - lam)
    cdef double t = sqrt(lam)
    cdef double complex v[4]
    cdef double complex g[4]
    cdef double complex acc[4]
    v[0] = eb + (1.0 - eb) * r * r
    v[1] = (1.0 - eb) * r * t
    v[2] = v[1]
    v[3] = eb + (1.0 - eb) * t * t
    g[0] = v[0]
    g[1] = v[1] * ea
    g[2] = v[2]
    g[3] = v[3] * ea
    acc[0] = 1.0
    acc[1] = 0.0
    acc[2] = 0.0
    acc[3] = 1.0
    while m > 0:
        if m & 1:
            _mat_mul(acc, g, acc)
        _mat_mul(g, g, g)
        m >>= 1
    cdef double off = xi * sqrt(lam * (1.0 - lam))
    cdef double complex a = acc[2]
    cdef double complex b = acc[3]
    cdef double complex val = (
        a * a.conjugate() * (1.0 - lam)
        + a * b.conjugate() * off
        + b * a.conjugate() * off
        + b * b.conjugate() * lam
    )
    return val.real


cdef struct _Phase:
    double alpha
    double beta
    double sa
    double ca
    double sb
    double cd
    double sd


cdef inline _Phase _phase(double alpha, double beta) noexcept nogil:
    # trig that depends on the phases only, hoisted out of the lambda loops
    cdef _Phase ph
    ph.alpha = alpha
    ph.beta = beta
    ph.sa = sin(0.5 * alpha)
    ph.ca = cos(0.5 * alpha)
    ph.sb = sin(0.5 * beta)
    ph.cd = cos(0.5 * (alpha + beta))
    ph.sd = sin(0.5 * (alpha + beta))
    return ph


cdef double _closed_form(double lam, double xi, _Phase* ph, long m) noexcept nogil:
    if m == 0 or lam == 0.0 or lam == 1.0:
        return lam
    cdef double s = sqrt(lam * (1.0 - lam))
    cdef double cos_phi = ph.cd + 2.0 * lam * ph.sb * ph.sa
    cdef double b1 = 2.0 * s * ph.ca * ph.sb
    cdef double b2 = -2.0 * s * ph.sa * ph.sb
    cdef double b3 = ph.sd - 2.0 * lam * ph.sb * ph.ca
    cdef double sin_phi = sqrt(b1 * b1 + b2 * b2 + b3 * b3)
    if sin_phi <= _EPS:
        return _power_probability(lam, xi, ph.alpha, ph.beta, m)
    cdef double n1 = b1 / sin_phi
    cdef double n2 = b2 / sin_phi
    cdef double n3 = b3 / sin_phi
    cdef double t = m * atan2(sin_phi, cos_phi)
    cdef double sin_t = sin(t)
    cdef double cos_t = cos(t)
    cdef double s2 = sin_t * sin_t
    return (
        lam
        + s2 * (n1 * n1 + n2 * n2) * (1.0 - 2.0 * lam)
        - 2.0 * xi * s * (s2 * n1 * n3 - sin_t * cos_t * n2)
    )


def success_grid(double alpha, double beta, double xi, long m, lambdas):
    cdef const double[::1] lam = np.ascontiguousarray(lambdas, dtype=np.float64)
    cdef Py_ssize_t n = lam.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] p = out
    cdef Py_ssize_t i
    cdef _Phase ph = _phase(alpha, beta)
    with nogil:
        for i in range(n):
            p[i] = _closed_form(lam[i], xi, &ph, m)
    return out


def last_failure_indices(alphas, long m, double threshold, lambdas, double xi=1.0):
    cdef const double[::1] a = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef const double[::1] lam = np.ascontiguousarray(lambdas, dtype=np.float64)
    cdef Py_ssize_t na = a.shape[0]
    cdef Py_ssize_t nl = lam.shape[0]
    out = np.empty(na, dtype=np.int64)
    cdef long long[::1] idx = out
    cdef Py_ssize_t k, i
    cdef _Phase ph
    with nogil:
        for k in range(na):
            ph = _phase(a[k], -a[k])
            idx[k] = -1
            i = nl - 1
            while i >= 0:
                if _closed_form(lam[i], xi, &ph, m) < threshold:
                    idx[k] = i
                    break
                i -= 1
    return out


def evolve_statevector(double complex[::1] amps, marked, double alpha, double beta, long m):
    cdef const unsigned char[::1] mask = np.ascontiguousarray(marked, dtype=np.uint8)
    cdef Py_ssize_t n = amps.shape[0]
    # complex products written out in real arithmetic so the loops vectorize
    cdef double[::1] z = np.asarray(amps).view(np.float64)
    cdef double ar = cos(alpha), ai = sin(alpha)
    cdef double br = cos(beta), bi = sin(beta)
    cdef double tr, ti, sr, si, xr, xi_
    cdef Py_ssize_t i
    cdef long it
    with nogil:
        for it in range(m):
            tr = 0.0
            ti = 0.0
            for i in range(n):
                xr = z[2 * i]
                xi_ = z[2 * i + 1]
                if mask[i]:
                    z[2 * i] = xr * ar - xi_ * ai
                    z[2 * i + 1] = xr * ai + xi_ * ar
                tr += z[2 * i]
                ti += z[2 * i + 1]
            tr /= n
            ti /= n
            # shift = (1 - e^{i beta}) * mean
            sr = (1.0 - br) * tr + bi * ti
            si = (1.0 - br) * ti - bi * tr
            for i in range(n):
                xr = z[2 * i]
                xi_ = z[2 * i + 1]
                z[2 * i] = br * xr - bi * xi_ + sr
                z[2 * i + 1] = br * xi_ + bi * xr + si


def marked_population(const double complex[::1] amps, marked):
    cdef const unsigned char[::1] mask = np.ascontiguousarray(marked, dtype=np.uint8)
    cdef Py_ssize_t n = amps.shape[0]
    cdef double acc = 0.0
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            if mask[i]:
                acc += amps[i].real * amps[i].real + amps[i].imag * amps[i].imag
    return acc
