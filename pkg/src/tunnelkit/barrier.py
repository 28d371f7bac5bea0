"""Rectangular barrier with velocity-proportional friction.

A particle of energy ``E`` under a barrier of height ``V0`` moves with the
effective velocity ``v0 = sqrt(2 (V0 - E) / m)``.  A friction force
``eta * v`` drains ``eta * v0 * x`` of energy over a depth ``x``, which raises
the local decay constant from ``kappa0`` to ``kappa(x)``.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EnergyAboveBarrier, ExcessiveDissipation
from .units import constants

# relative slack when comparing an energy loss against the particle energy
_LOSS_RTOL = 1e-12


class KappaMode(enum.Enum):
    FULL = "full"
    LINEARIZED = "linearized"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown kappa mode {value!r}; expected 'full' or 'linearized'") from None


@dataclass(frozen=True)
class Particle:
    energy: float                                   # eV
    mass: float = field(default_factory=lambda: constants().electron_mass)

    def __post_init__(self):
        if not (math.isfinite(self.energy) and self.energy > 0):
            raise ValueError(f"particle energy must be positive, got {self.energy}")
        if not (math.isfinite(self.mass) and self.mass > 0):
            raise ValueError(f"particle mass must be positive, got {self.mass}")

    def with_energy(self, energy):
        return Particle(energy=energy, mass=self.mass)


@dataclass(frozen=True)
class DissipativeBarrier:
    v0_height: float  # eV
    length: float     # A
    eta: float = 0.0  # eV fs / A^2

    def __post_init__(self):
        if not (math.isfinite(self.v0_height) and self.v0_height > 0):
            raise ValueError(f"barrier height must be positive, got {self.v0_height}")
        if not (math.isfinite(self.length) and self.length > 0):
            raise ValueError(f"barrier length must be positive, got {self.length}")
        if not (math.isfinite(self.eta) and self.eta >= 0):
            raise ValueError(f"friction coefficient must be >= 0, got {self.eta}")

    def with_eta(self, eta):
        return DissipativeBarrier(self.v0_height, self.length, eta)


def _check_below(p, b):
    if p.energy >= b.v0_height:
        raise EnergyAboveBarrier(
            f"E = {p.energy} eV is not below the barrier top V0 = {b.v0_height} eV"
        )


def _check_depth(b, x):
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or np.any(xa > b.length) or not np.all(np.isfinite(xa)):
        raise ValueError(f"depth must lie in [0, {b.length}] A")
    return xa


def kappa0(p, b):
    """Decay constant sqrt(2 m (V0 - E)) / hbar of the undamped barrier, 1/A."""
    _check_below(p, b)
    return math.sqrt(2.0 * p.mass * (b.v0_height - p.energy)) / constants().hbar


def effective_velocity(p, b):
    """Sub-barrier velocity hbar kappa0 / m = sqrt(2 (V0 - E) / m), A/fs."""
    _check_below(p, b)
    return math.sqrt(2.0 * (b.v0_height - p.energy) / p.mass)


def energy_loss(p, b, x):
    """Energy (eV) dissipated by friction after penetrating a depth ``x``.

    Raises :class:`ExcessiveDissipation` when the loss would exceed ``E``,
    i.e. when ``b.eta`` is above :func:`eta_max` for this energy.
    """
    xa = _check_depth(b, x)
    loss = b.eta * effective_velocity(p, b) * xa
    if np.any(loss > p.energy * (1.0 + _LOSS_RTOL)):
        raise ExcessiveDissipation(
            f"energy loss {np.max(loss):.6g} eV exceeds E = {p.energy} eV "
            f"(eta = {b.eta} > eta_max = {eta_max(p, b):.6g})"
        )
    return float(loss) if loss.ndim == 0 else loss


def eta_max(p, b):
    """Largest friction coefficient whose total loss over the barrier is <= E."""
    _check_below(p, b)
    ratio = p.energy / b.v0_height
    return (b.v0_height / b.length) * ratio * math.sqrt(
        p.mass / (2.0 * b.v0_height * (1.0 - ratio))
    )


def kappa_profile(p, b, x, mode=KappaMode.FULL):
    """Local decay constant kappa(x) in 1/A.

    FULL uses ``sqrt(2 m (V0 - E + eta v0 x)) / hbar``; LINEARIZED keeps the
    first order in the loss, ``kappa0 + eta x / hbar``.  Both equal kappa0 at
    the barrier entrance and LINEARIZED >= FULL everywhere.
    """
    mode = KappaMode.parse(mode)
    xa = _check_depth(b, x)
    k0 = kappa0(p, b)
    g = b.eta / constants().hbar
    if mode is KappaMode.LINEARIZED:
        out = k0 + g * xa
    else:
        # 2 m eta v0 x / hbar^2 == 2 kappa0 (eta / hbar) x
        out = np.sqrt(k0 * k0 + 2.0 * k0 * g * xa)
    return float(out) if out.ndim == 0 else out


def fraction_lost(p, b, strict=True):
    """Fraction of the incident energy lost across the whole barrier.

    With ``strict=False`` the raw ratio is returned even above 1 (useful for
    plotting the curve shape past the eta_max boundary).
    """
    frac = b.eta * b.length * effective_velocity(p, b) / p.energy
    if strict and frac > 1.0 + _LOSS_RTOL:
        raise ExcessiveDissipation(
            f"fraction lost {frac:.6g} > 1 at E = {p.energy} eV, eta = {b.eta}"
        )
    return frac


def dissipation_ratio(p, b):
    """eta L / (hbar kappa0): small-dissipation parameter of the closed forms."""
    return b.eta * b.length / (constants().hbar * kappa0(p, b))


def from_config(cfg):
    """Build ``(Particle | None, DissipativeBarrier)`` from a flat mapping.

    Keys: ``v0_ev``, ``length_angstrom``, ``eta_evfs_per_ang2``, ``mass``
    (``electron`` or a number in eV fs^2/A^2) and ``energy_ev``.  Missing
    barrier keys fall back to the showcase barrier; without ``energy_ev`` no
    particle is built.
    """
    barrier = DissipativeBarrier(
        v0_height=float(cfg.get("v0_ev", 1.8)),
        length=float(cfg.get("length_angstrom", 20.8)),
        eta=float(cfg.get("eta_evfs_per_ang2", 0.0)),
    )
    mass = parse_mass(cfg.get("mass", "electron"))
    particle = None
    if cfg.get("energy_ev") is not None:
        particle = Particle(energy=float(cfg["energy_ev"]), mass=mass)
    return particle, barrier


def parse_mass(value):
    if isinstance(value, str) and value.strip().lower() == "electron":
        return constants().electron_mass
    mass = float(value)
    if not mass > 0:
        raise ValueError(f"mass must be positive, got {value!r}")
    return mass
