"""Simmons intermediate-voltage current density, with the friction prefactor.

For a rectangular barrier of height ``V0`` (eV) and width ``L`` (A) at bias
``V`` (volts, so ``eV`` is numerically ``V`` in eV)::

    J(V) = J0 [phi exp(-A sqrt(phi)) - (phi + eV) exp(-A sqrt(phi + eV))]
    phi  = V0 - eV/2,   A = 2 L sqrt(2 m) / hbar,   J0 = e / (2 pi h L^2)

Friction multiplies the current by the voltage-independent factor
``exp(-eta L^2 / hbar)``.  Image-force rounding is not modelled.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import OutOfRegime
from .units import ANGSTROM, ELEMENTARY_CHARGE_C, PLANCK_J_S, constants


@dataclass(frozen=True)
class JunctionSpec:
    barrier_height: float                 # eV
    width: float                          # A
    area: float                           # m^2
    temperature: Optional[float] = None   # K, metadata only

    def __post_init__(self):
        for name in ("barrier_height", "width", "area"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive, got {v}")


@dataclass(frozen=True)
class IVPoint:
    voltage: float  # V
    current: float  # A

    def __post_init__(self):
        if not (math.isfinite(self.voltage) and math.isfinite(self.current)):
            raise ValueError("I-V point must be finite")


def exponent_coefficient(j, mass=None):
    """A = 2 L sqrt(2 m) / hbar in 1/sqrt(eV)."""
    u = constants()
    m = u.electron_mass if mass is None else mass
    return 2.0 * j.width * math.sqrt(2.0 * m) / u.hbar


def prefactor(j):
    """J0 in A / (m^2 eV): e^2 / (2 pi h L^2) with the energy in eV."""
    width_m = j.width * ANGSTROM
    return ELEMENTARY_CHARGE_C**2 / (2.0 * math.pi * PLANCK_J_S * width_m**2)


def simmons_current_density(v, j):
    """Current density (A/m^2) at bias ``v`` (volts); odd in ``v``.

    Valid for ``|v| < V0``; raises :class:`OutOfRegime` otherwise.
    """
    va = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(va)) or np.any(np.abs(va) >= j.barrier_height):
        raise OutOfRegime(
            f"bias must satisfy |V| < V0 = {j.barrier_height} V for the intermediate-voltage form"
        )
    s = np.abs(va)
    phi = j.barrier_height - 0.5 * s
    a = exponent_coefficient(j)
    # phi e^{-A sqrt(phi)} [1 - (1 + s/phi) e^{-A d}], d = sqrt(phi + s) - sqrt(phi);
    # written with log1p/expm1 so the bracket keeps its sign down to tiny bias
    d = s / (np.sqrt(phi + s) + np.sqrt(phi))
    bracket = -phi * np.exp(-a * np.sqrt(phi)) * np.expm1(np.log1p(s / phi) - a * d)
    out = np.sign(va) * prefactor(j) * bracket
    return float(out) if out.ndim == 0 else out


def dissipation_factor(j, eta):
    """exp(-eta L^2 / hbar) for friction ``eta`` in eV fs / A^2."""
    if not eta >= 0:
        raise ValueError(f"eta must be >= 0, got {eta}")
    return math.exp(-eta * j.width**2 / constants().hbar)


def dissipative_current_density(v, j, eta):
    """Simmons current density suppressed by friction ``eta`` (A/m^2)."""
    return dissipation_factor(j, eta) * simmons_current_density(v, j)


def current(v, j, eta=0.0):
    """Junction current in A (current density times area)."""
    return j.area * dissipative_current_density(v, j, eta)


def predict_iv(voltages, j, eta=0.0):
    voltages = np.asarray(voltages, dtype=float)
    currents = np.atleast_1d(current(voltages, j, eta))
    return [IVPoint(float(v), float(i)) for v, i in zip(voltages, currents)]
