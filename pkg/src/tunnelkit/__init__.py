"""JWKB tunneling times through a rectangular barrier with Ohmic friction.

Units throughout: energies in eV, lengths in Angstrom, times in fs, friction
coefficients in eV fs / A^2.
"""

from .barrier import (
    DissipativeBarrier,
    KappaMode,
    Particle,
    energy_loss,
    eta_max,
    fraction_lost,
    kappa0,
    kappa_profile,
)
from .errors import (
    DegenerateSplit,
    EmptyDataset,
    EnergyAboveBarrier,
    ExcessiveDissipation,
    NonConvergence,
    NonPhysicalFit,
    OutOfRegime,
    ParseError,
    TunnelkitError,
)
from .exact import exact_dwell, solve_exact
from .fit import IVCurve, fit_eta, fit_sweep, ingest_csv
from .simmons import IVPoint, JunctionSpec, simmons_current_density
from .times import (
    TimesReport,
    dwell_dissipative_closed,
    dwell_jwkb_numeric,
    report,
    transmission,
    traversal_dissipative_closed,
)
from .units import constants

__version__ = "0.1.0"
