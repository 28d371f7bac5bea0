"""Working unit system: energies in eV, lengths in Angstrom, times in fs.

With these units the showcase barrier (V0 ~ 1.8 eV, L ~ 20.8 A) and the
resulting times are all of order one, which keeps exponents like
``exp(-2 kappa0 L)`` well conditioned.

Derived units used throughout the package:

=================  ================
quantity           unit
=================  ================
action (hbar)      eV fs
mass               eV fs^2 / A^2
velocity           A / fs
friction (eta)     eV fs / A^2
=================  ================
"""

from dataclasses import dataclass
from functools import lru_cache

# CODATA exact / recommended values
HBAR_EV_S = 6.582119569e-16
SPEED_OF_LIGHT_M_S = 299792458.0
BOLTZMANN_EV_K = 8.617333262e-5
ELECTRON_REST_ENERGY_EV = 5.110e5

# SI values used by the junction current model
ELEMENTARY_CHARGE_C = 1.602176634e-19
PLANCK_J_S = 6.62607015e-34

FS = 1e-15
ANGSTROM = 1e-10

# 1 eV fs / A^2 expressed in kg/s
ETA_UNIT_SI = ELEMENTARY_CHARGE_C * FS / ANGSTROM**2


@dataclass(frozen=True)
class UnitSystem:
    hbar: float            # eV fs
    electron_mass: float   # eV fs^2 / A^2
    boltzmann: float       # eV / K, reporting only
    speed_of_light: float  # A / fs

    def __post_init__(self):
        for name in ("hbar", "electron_mass", "boltzmann", "speed_of_light"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@lru_cache(maxsize=None)
def constants() -> UnitSystem:
    """Return the fixed (eV, A, fs, K) unit system."""
    c = SPEED_OF_LIGHT_M_S * FS / ANGSTROM
    return UnitSystem(
        hbar=HBAR_EV_S / FS,
        electron_mass=ELECTRON_REST_ENERGY_EV / c**2,
        boltzmann=BOLTZMANN_EV_K,
        speed_of_light=c,
    )


def eta_to_si(eta):
    """Convert a friction coefficient from eV fs/A^2 to kg/s (display only)."""
    return eta * ETA_UNIT_SI


def eta_from_si(eta_kg_s):
    return eta_kg_s / ETA_UNIT_SI
