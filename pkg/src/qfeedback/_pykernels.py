"""Pure-Python/numpy kernels; the fallback when ``_ckernels`` is not compiled.

Signatures mirror ``_ckernels.pyx`` exactly.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .history import HistoryBuffer


def dde_rk4(
    rhs: Callable[[float, complex, complex], complex],
    dt: float,
    m: int,
    n_steps: int,
    c0: complex = 1.0 + 0j,
) -> np.ndarray:
    """Classic RK4 for c' = rhs(t, c(t), c(t - m*dt)), c = 0 before t = 0.

    The delayed term of a step is active iff the step starts at or after
    tau, so the onset kink sits on a grid node. Grid-time delayed values are
    read from the buffer; half-step ones come from Hermite interpolation.
    """
    hist = HistoryBuffer(dt, m, n_steps + 1)
    hist.append(c0)
    c = complex(c0)
    half = 0.5 * dt
    for k in range(n_steps):
        t = k * dt
        t_mid = (k + 0.5) * dt
        t_end = (k + 1) * dt
        if k >= m:
            d_start = hist.delayed(k)
            d_mid = hist.delayed_midpoint(k)
            d_end = complex(hist.values[k + 1 - m])
        else:
            d_start = d_mid = d_end = 0j
        k1 = rhs(t, c, d_start)
        hist.set_derivative(k, k1)
        k2 = rhs(t_mid, c + half * k1, d_mid)
        k3 = rhs(t_mid, c + half * k2, d_mid)
        k4 = rhs(t_end, c + dt * k3, d_end)
        c = c + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        hist.append(c)
        if k + 1 == m:
            hist.onset_left_deriv = rhs(t_end, c, 0j)
    return hist.values


def dde_rk4_linear(
    local: complex,
    const: complex,
    minus: complex,
    plus: complex,
    omega2: float,
    dt: float,
    m: int,
    n_steps: int,
    c0: complex = 1.0 + 0j,
) -> np.ndarray:
    """RK4 for c' = local*c + (const + minus e^{-i w2 t} + plus e^{i w2 t}) c(t - tau)."""
    if minus == 0 and plus == 0:
        def rhs(t: float, c: complex, cd: complex) -> complex:
            return local * c + const * cd
    else:
        def rhs(t: float, c: complex, cd: complex) -> complex:
            e = complex(math.cos(omega2 * t), math.sin(omega2 * t))
            return local * c + (const + minus * e.conjugate() + plus * e) * cd
    return dde_rk4(rhs, dt, m, n_steps, c0)


def oracle_rk4(
    detuning: np.ndarray,
    couplings: np.ndarray,
    weights: np.ndarray,
    omega2: float,
    rabi: float,
    dt: float,
    n_steps: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """RK4 for the single-excitation amplitudes over a discretized reservoir.

    Args:
        detuning: omega_k - omega3 per mode, rad/ps.
        couplings: g_k per mode.
        weights: Quadrature weight per mode.
        omega2: Ground-state splitting, rad/ps.
        rabi: Pump Rabi frequency, rad/ps.
        dt: Step, ps.
        n_steps: Number of steps from t = 0 with c3(0) = 1.

    Returns:
        ``(c3, norm, c1, c2)``: emitter amplitude and total norm at every grid
        time, plus the final photon amplitudes of both ground-state channels.
    """
    n = detuning.shape[0]
    g = np.ascontiguousarray(couplings, dtype=np.float64)
    w = np.ascontiguousarray(weights, dtype=np.float64)
    det = np.ascontiguousarray(detuning, dtype=np.float64)
    wg = w * g

    def deriv(t, c3, c1, c2):
        phase = np.exp(1j * (det * t))
        cp = math.cos(0.5 * rabi * t)
        sp = math.sin(0.5 * rabi * t)
        e2 = complex(math.cos(omega2 * t), math.sin(omega2 * t))
        a1 = cp + 1j * sp * e2
        a2 = cp * e2 + 1j * sp
        gphase = g * phase
        d1 = (-1j * a1 * c3) * gphase
        d2 = (-1j * a2 * c3) * gphase
        back = wg * phase.conj()
        d3 = -1j * (a2.conjugate() * np.dot(back, c2) + a1.conjugate() * np.dot(back, c1))
        return d3, d1, d2

    c3 = 1.0 + 0j
    c1 = np.zeros(n, dtype=np.complex128)
    c2 = np.zeros(n, dtype=np.complex128)
    out = np.empty(n_steps + 1, dtype=np.complex128)
    norms = np.empty(n_steps + 1, dtype=np.float64)
    out[0] = c3
    norms[0] = 1.0
    h = 0.5 * dt
    s = dt / 6.0
    for k in range(n_steps):
        t = k * dt
        a3, a1, a2 = deriv(t, c3, c1, c2)
        b3, b1, b2 = deriv(t + h, c3 + h * a3, c1 + h * a1, c2 + h * a2)
        e3, e1, e2 = deriv(t + h, c3 + h * b3, c1 + h * b1, c2 + h * b2)
        f3, f1, f2 = deriv(t + dt, c3 + dt * e3, c1 + dt * e1, c2 + dt * e2)
        c3 = c3 + s * (a3 + 2.0 * b3 + 2.0 * e3 + f3)
        c1 = c1 + s * (a1 + 2.0 * b1 + 2.0 * e1 + f1)
        c2 = c2 + s * (a2 + 2.0 * b2 + 2.0 * e2 + f2)
        out[k + 1] = c3
        norms[k + 1] = (
            c3.real * c3.real + c3.imag * c3.imag
            + float(np.dot(w, c1.real ** 2 + c1.imag ** 2 + c2.real ** 2 + c2.imag ** 2))
        )
    return out, norms, c1, c2
