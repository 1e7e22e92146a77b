"""Stored solution samples used for delayed-value lookups."""
from __future__ import annotations

import numpy as np

from .errors import ConfigError

MIN_STEPS_PER_DELAY = 8


class HistoryBuffer:
    """Grid samples (t_k = k*dt, c_k, c'_k) of a solution with one constant delay.

    ``tau`` must be an exact multiple ``steps_per_delay`` of ``dt``, so the
    delayed value at any grid time is a stored sample. Derivatives are the
    right-sided ones (the first RK stage of the step leaving the node); at
    t = tau, where the delayed term switches on, the left-sided derivative is
    kept as well so interpolation on [tau - dt, tau] stays one-sided.
    """

    def __init__(self, dt: float, steps_per_delay: int, capacity: int):
        if steps_per_delay < MIN_STEPS_PER_DELAY:
            raise ConfigError(
                f"steps_per_delay must be >= {MIN_STEPS_PER_DELAY}, got {steps_per_delay}"
            )
        self.dt = dt
        self.m = steps_per_delay
        self.values = np.zeros(capacity, dtype=np.complex128)
        self.derivs = np.zeros(capacity, dtype=np.complex128)
        self.onset_left_deriv = 0j
        self.size = 0

    def append(self, value: complex) -> None:
        self.values[self.size] = value
        self.size += 1

    def set_derivative(self, k: int, deriv: complex) -> None:
        self.derivs[k] = deriv

    def times(self) -> np.ndarray:
        return np.arange(self.size) * self.dt

    def delayed(self, k: int) -> complex:
        """c(t_k - tau), zero before the feedback onset."""
        j = k - self.m
        return complex(self.values[j]) if j >= 0 else 0j

    def delayed_midpoint(self, k: int) -> complex:
        """c(t_k + dt/2 - tau) by cubic Hermite interpolation, zero before onset."""
        j = k - self.m
        if j < 0:
            return 0j
        d1 = self.onset_left_deriv if j + 1 == self.m else self.derivs[j + 1]
        y0 = self.values[j]
        y1 = self.values[j + 1]
        return complex(0.5 * (y0 + y1) + 0.125 * self.dt * (self.derivs[j] - d1))
