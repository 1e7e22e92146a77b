# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Same signatures and semantics as ``_pykernels``."""
import numpy as np

from libc.math cimport cos, sin


cdef inline double complex _expi(double x) noexcept nogil:
    return cos(x) + 1j * sin(x)


cdef inline double complex _conj(double complex z) noexcept nogil:
    return z.real - 1j * z.imag


cdef inline double complex _lin(double complex local, double complex const,
                                double complex minus, double complex plus,
                                double omega2, bint moving, double t,
                                double complex c, double complex cd) noexcept nogil:
    cdef double complex e
    if moving:
        e = _expi(omega2 * t)
        return local * c + (const + minus * _conj(e) + plus * e) * cd
    return local * c + const * cd


def dde_rk4_linear(double complex local, double complex const,
                   double complex minus, double complex plus, double omega2,
                   double dt, Py_ssize_t m, Py_ssize_t n_steps,
                   double complex c0=1.0):
    if m < 8:
        raise ValueError("m must be >= 8")
    values = np.zeros(n_steps + 1, dtype=np.complex128)
    derivs = np.zeros(n_steps + 1, dtype=np.complex128)
    cdef double complex[::1] v = values
    cdef double complex[::1] d = derivs
    cdef bint moving = (minus != 0) or (plus != 0)
    cdef double complex c = c0, k1, k2, k3, k4
    cdef double complex d_start, d_mid, d_end, d_right
    cdef double complex onset_left = 0
    cdef double half = 0.5 * dt, t, t_mid, t_end
    cdef Py_ssize_t k, j
    v[0] = c0
    with nogil:
        for k in range(n_steps):
            t = k * dt
            t_mid = (k + 0.5) * dt
            t_end = (k + 1) * dt
            if k >= m:
                j = k - m
                d_start = v[j]
                d_end = v[j + 1]
                d_right = onset_left if j + 1 == m else d[j + 1]
                d_mid = 0.5 * (v[j] + v[j + 1]) + 0.125 * dt * (d[j] - d_right)
            else:
                d_start = 0
                d_mid = 0
                d_end = 0
            k1 = _lin(local, const, minus, plus, omega2, moving, t, c, d_start)
            d[k] = k1
            k2 = _lin(local, const, minus, plus, omega2, moving, t_mid, c + half * k1, d_mid)
            k3 = _lin(local, const, minus, plus, omega2, moving, t_mid, c + half * k2, d_mid)
            k4 = _lin(local, const, minus, plus, omega2, moving, t_end, c + dt * k3, d_end)
            c = c + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            v[k + 1] = c
            if k + 1 == m:
                onset_left = _lin(local, const, minus, plus, omega2, moving, t_end, c, 0)
    return values


cdef void _phasors(double[::1] det, double t, double complex[::1] out) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(det.shape[0]):
        out[i] = _expi(det[i] * t)


cdef double complex _stage(double t, double complex x3, double coef,
                           double[::1] g, double[::1] wg, double complex[::1] ph,
                           double complex[::1] c1, double complex[::1] c2,
                           double complex[::1] d1, double complex[::1] d2,
                           double complex[::1] acc1, double complex[::1] acc2,
                           double acc_w, bint first,
                           double omega2, double rabi) noexcept nogil:
    # Reads the previous stage derivative from d1/d2, then overwrites it.
    cdef double cp = cos(0.5 * rabi * t), sp = sin(0.5 * rabi * t)
    cdef double complex e2 = _expi(omega2 * t)
    cdef double complex a1 = cp + 1j * sp * e2
    cdef double complex a2 = cp * e2 + 1j * sp
    cdef double complex ma1 = -1j * a1 * x3
    cdef double complex ma2 = -1j * a2 * x3
    cdef double complex s1 = 0, s2 = 0, x1, x2, e, nd1, nd2
    cdef Py_ssize_t i
    for i in range(g.shape[0]):
        e = ph[i]
        if first:
            x1 = c1[i]
            x2 = c2[i]
        else:
            x1 = c1[i] + coef * d1[i]
            x2 = c2[i] + coef * d2[i]
        s1 = s1 + wg[i] * (_conj(e) * x1)
        s2 = s2 + wg[i] * (_conj(e) * x2)
        nd1 = ma1 * (g[i] * e)
        nd2 = ma2 * (g[i] * e)
        d1[i] = nd1
        d2[i] = nd2
        if first:
            acc1[i] = nd1
            acc2[i] = nd2
        else:
            acc1[i] = acc1[i] + acc_w * nd1
            acc2[i] = acc2[i] + acc_w * nd2
    return -1j * (_conj(a2) * s2 + _conj(a1) * s1)


def oracle_rk4(detuning, couplings, weights, double omega2, double rabi,
               double dt, Py_ssize_t n_steps):
    cdef double[::1] det = np.ascontiguousarray(detuning, dtype=np.float64)
    cdef double[::1] g = np.ascontiguousarray(couplings, dtype=np.float64)
    cdef double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t n = det.shape[0]
    wg_arr = np.asarray(w) * np.asarray(g)
    cdef double[::1] wg = wg_arr
    c1_arr = np.zeros(n, dtype=np.complex128)
    c2_arr = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] c1 = c1_arr
    cdef double complex[::1] c2 = c2_arr
    cdef double complex[::1] d1 = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] d2 = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] acc1 = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] acc2 = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] ph_a = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] ph_mid = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] ph_b = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] ph_start, ph_end, tmp
    out_arr = np.empty(n_steps + 1, dtype=np.complex128)
    norm_arr = np.empty(n_steps + 1, dtype=np.float64)
    cdef double complex[::1] out = out_arr
    cdef double[::1] norms = norm_arr
    cdef double complex c3 = 1.0, a3, b3, e3, f3
    cdef double h = 0.5 * dt, s = dt / 6.0, t, nrm
    cdef Py_ssize_t k, i
    out[0] = c3
    norms[0] = 1.0
    ph_start = ph_a
    ph_end = ph_b
    with nogil:
        _phasors(det, 0.0, ph_start)
        for k in range(n_steps):
            t = k * dt
            _phasors(det, t + h, ph_mid)
            _phasors(det, t + dt, ph_end)
            a3 = _stage(t, c3, 0.0, g, wg, ph_start, c1, c2, d1, d2,
                        acc1, acc2, 1.0, True, omega2, rabi)
            b3 = _stage(t + h, c3 + h * a3, h, g, wg, ph_mid, c1, c2, d1, d2,
                        acc1, acc2, 2.0, False, omega2, rabi)
            e3 = _stage(t + h, c3 + h * b3, h, g, wg, ph_mid, c1, c2, d1, d2,
                        acc1, acc2, 2.0, False, omega2, rabi)
            f3 = _stage(t + dt, c3 + dt * e3, dt, g, wg, ph_end, c1, c2, d1, d2,
                        acc1, acc2, 1.0, False, omega2, rabi)
            c3 = c3 + s * (a3 + 2.0 * b3 + 2.0 * e3 + f3)
            nrm = 0.0
            for i in range(n):
                c1[i] = c1[i] + s * acc1[i]
                c2[i] = c2[i] + s * acc2[i]
                nrm = nrm + w[i] * (c1[i].real * c1[i].real + c1[i].imag * c1[i].imag
                                    + c2[i].real * c2[i].real + c2[i].imag * c2[i].imag)
            out[k + 1] = c3
            norms[k + 1] = c3.real * c3.real + c3.imag * c3.imag + nrm
            tmp = ph_start
            ph_start = ph_end
            ph_end = tmp
    return out_arr, norm_arr, c1_arr, c2_arr
