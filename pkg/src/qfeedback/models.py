"""Right-hand sides of the feedback delay equations for the excited amplitude c3.

Every model has the form

    dc3/dt = -2 gamma c3(t) + gamma * e^{i phi3} * bracket(t) * c3(t - tau)

where the integrator passes ``c_delayed = 0`` while t < tau. All three
functions evaluate the expression in the same association order, so the
pumped model at zero Rabi frequency and the unpumped model at phi2 = 0 reduce
bit-for-bit to the simpler ones.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .core import SystemParams, compute_phases


class ModelKind(enum.Enum):
    TWO_LEVEL = "two_level"
    UNPUMPED = "unpumped"
    PUMPED = "pumped"

    @classmethod
    def parse(cls, text: str) -> "ModelKind":
        key = text.strip().lower().replace("-", "_")
        aliases = {
            "twolevel": "two_level",
            "2ls": "two_level",
            "unpumpedlambda": "unpumped",
            "pumpedlambda": "pumped",
        }
        key = aliases.get(key.replace("_", ""), key)
        try:
            return cls(key)
        except ValueError:
            names = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown model {text!r}; expected one of {names}") from None


def rhs_two_level(t: float, c: complex, c_delayed: complex, params: SystemParams) -> complex:
    """Two-level emitter in front of a mirror; ``omega2`` and ``rabi`` are ignored."""
    ph = compute_phases(params)
    e3 = cmath.exp(1j * ph.phi3)
    return -2.0 * params.gamma * c + params.gamma * e3 * 2.0 * c_delayed


def rhs_unpumped(t: float, c: complex, c_delayed: complex, params: SystemParams) -> complex:
    """Lambda system without pump; ``rabi`` is ignored."""
    ph = compute_phases(params)
    e3 = cmath.exp(1j * ph.phi3)
    bracket = 1.0 + cmath.exp(-1j * ph.phi2)
    return -2.0 * params.gamma * c + params.gamma * e3 * bracket * c_delayed


def pumped_bracket(t: float, params: SystemParams) -> complex:
    """Time-dependent factor multiplying gamma e^{i phi3} c3(t - tau) under pumping.

    The e^{-i omega2 t} factor makes the equation non-autonomous; it is
    evaluated at the exact time passed in.
    """
    ph = compute_phases(params)
    cos_p = math.cos(ph.phi_pump)
    sin_p = math.sin(ph.phi_pump)
    if sin_p == 0.0:
        moving = 0j
    else:
        w2 = params.omega2
        moving = cmath.exp(-1j * (w2 * t)) + cmath.exp(1j * (w2 * t - ph.phi2))
    return cos_p * (1.0 + cmath.exp(-1j * ph.phi2)) - 1j * sin_p * moving


def rhs_pumped(t: float, c: complex, c_delayed: complex, params: SystemParams) -> complex:
    """Lambda system under a continuous-wave pump of Rabi frequency ``params.rabi``."""
    ph = compute_phases(params)
    e3 = cmath.exp(1j * ph.phi3)
    bracket = pumped_bracket(t, params)
    return -2.0 * params.gamma * c + params.gamma * e3 * bracket * c_delayed


RHS_BY_KIND = {
    ModelKind.TWO_LEVEL: rhs_two_level,
    ModelKind.UNPUMPED: rhs_unpumped,
    ModelKind.PUMPED: rhs_pumped,
}
KIND_BY_RHS = {fn: kind for kind, fn in RHS_BY_KIND.items()}


@dataclass(frozen=True)
class LinearCoefficients:
    """Decomposition ``rhs = local*c + (const + minus*e^{-i w2 t} + plus*e^{+i w2 t})*c_delayed``.

    This is what the compiled stepping kernel consumes.
    """

    local: complex
    const: complex
    minus: complex
    plus: complex
    omega2: float


def linear_coefficients(kind: ModelKind, params: SystemParams) -> LinearCoefficients:
    ph = compute_phases(params)
    g = params.gamma
    ge3 = g * cmath.exp(1j * ph.phi3)
    local = complex(-2.0 * g)
    if kind is ModelKind.TWO_LEVEL:
        return LinearCoefficients(local, ge3 * 2.0, 0j, 0j, 0.0)
    one_plus = 1.0 + cmath.exp(-1j * ph.phi2)
    if kind is ModelKind.UNPUMPED:
        return LinearCoefficients(local, ge3 * one_plus, 0j, 0j, 0.0)
    cos_p = math.cos(ph.phi_pump)
    sin_p = math.sin(ph.phi_pump)
    minus = -1j * sin_p * ge3
    return LinearCoefficients(
        local,
        ge3 * (cos_p * one_plus),
        minus,
        minus * cmath.exp(-1j * ph.phi2),
        params.omega2,
    )
