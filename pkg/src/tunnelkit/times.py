"""JWKB tunneling times for the dissipative rectangular barrier.

Two evaluation routes are provided for every observable:

* quadrature of the defining integrals over the ``kappa(x)`` profile
  (nested for the dwell time), through :mod:`tunnelkit.kernels`;
* the closed forms valid for weak dissipation (``eta L << hbar kappa0``).

The closed forms for the transmission and the traversal time are exact
antiderivatives of the linearized profile.  The closed dwell form
(:func:`dwell_dissipative_closed`) drops the first-order non-exponential
term ``-m eta / (2 hbar^2 kappa0^4)``; it therefore misses the reduction of
the dwell time by dissipation and is not the default in :func:`report`.
"""

import math
import warnings
from dataclasses import dataclass, field

from . import kernels
from .barrier import KappaMode, dissipation_ratio, eta_max, kappa0
from .errors import DegenerateSplit, NonConvergence
from .quadrature import gaussian_exp_integral, x_gaussian_exp_integral
from .units import constants

DEFAULT_REL_TOL = 1e-10
DEFAULT_MAX_EVALS = 1_000_000
# eta L / (hbar kappa0) above which the closed forms are flagged
STRONG_DISSIPATION_RATIO = 0.3

CSV_COLUMNS = (
    "energy_ev", "tau_d_fs", "tau_d_improved_fs", "tau_tr_fs", "transmission",
    "tau_dt_fs", "tau_dr_fs", "eta", "regime_flag",
)


class RegimeWarning(UserWarning):
    """A closed form is being used outside its weak-dissipation regime."""


def _mode_code(mode):
    return kernels.FULL if KappaMode.parse(mode) is KappaMode.FULL else kernels.LINEARIZED


def _checked(result, what):
    value, err, evals, ok = result
    if not ok:
        raise NonConvergence(f"{what}: quadrature did not converge", estimate=value,
                             abs_error=err, evaluations=evals)
    return value


def dwell_jwkb_numeric(p, b, mode=KappaMode.LINEARIZED, rel_tol=DEFAULT_REL_TOL,
                       max_evals=DEFAULT_MAX_EVALS):
    """Average JWKB dwell time (fs) by nested quadrature.

    (m/hbar) int_0^L dx / kappa(x) * exp(-2 int_0^x kappa).
    """
    hbar = constants().hbar
    k0 = kappa0(p, b)
    value = _checked(
        kernels.dwell_integral(_mode_code(mode), k0, b.eta / hbar, b.length, rel_tol, max_evals),
        "dwell time",
    )
    return p.mass / hbar * value


def _warn_regime(p, b, what):
    ratio = dissipation_ratio(p, b)
    if ratio > STRONG_DISSIPATION_RATIO:
        warnings.warn(
            f"{what}: eta L/(hbar kappa0) = {ratio:.3g} > {STRONG_DISSIPATION_RATIO}; "
            "closed form drifts from quadrature",
            RegimeWarning, stacklevel=3,
        )


def dwell_dissipative_closed(p, b):
    """Closed-form weak-dissipation dwell time (fs).

    m/(2 hbar kappa0^2) [1 - exp(-2 kappa0 L - eta L^2/hbar) (1 - 2 eta L/(hbar kappa0))]
    """
    hbar = constants().hbar
    k0 = kappa0(p, b)
    _warn_regime(p, b, "dwell_dissipative_closed")
    L = b.length
    tail = math.exp(-2.0 * k0 * L - b.eta * L * L / hbar) * (1.0 - 2.0 * b.eta * L / (hbar * k0))
    return p.mass / (2.0 * hbar * k0 * k0) * (1.0 - tail)


def dwell_first_order_erf(p, b):
    """Dwell time with 1/kappa expanded to first order in eta, integrated exactly.

    Uses the erf antiderivatives of exp(-a x - c x^2) and x exp(-a x - c x^2)
    with a = 2 kappa0, c = eta/hbar, i.e. the weak-dissipation integral
    before any large-argument expansion of erf.
    """
    hbar = constants().hbar
    k0 = kappa0(p, b)
    L = b.length
    if b.eta == 0.0:
        return p.mass * (-math.expm1(-2.0 * k0 * L)) / (2.0 * hbar * k0 * k0)
    a = 2.0 * k0
    c = b.eta / hbar
    first = gaussian_exp_integral(a, c, 0.0, L)
    second = x_gaussian_exp_integral(a, c, 0.0, L)
    return p.mass / (hbar * k0) * first - b.eta * p.mass / (hbar * hbar * k0 * k0) * second


def improved_factor(p, b):
    """Amplitude correction N^2 = 4 k kappa0 / (k^2 + kappa0^2) of the sharp-step connection.

    Vanishes at the barrier base, peaks at 2 when k = kappa0 (E = V0/2).
    """
    k0 = kappa0(p, b)
    k = math.sqrt(2.0 * p.mass * p.energy) / constants().hbar
    return 4.0 * k * k0 / (k * k + k0 * k0)


def transmission(p, b):
    """JWKB transmission exp(-eta L^2/hbar) exp(-2 kappa0 L); may underflow to 0."""
    k0 = kappa0(p, b)
    L = b.length
    return math.exp(-b.eta * L * L / constants().hbar - 2.0 * k0 * L)


def dissipation_factor(b):
    """exp(-eta L^2 / hbar): the transmission (and current) suppression by friction."""
    return math.exp(-b.eta * b.length * b.length / constants().hbar)


def transmission_numeric(p, b, mode=KappaMode.LINEARIZED, rel_tol=DEFAULT_REL_TOL,
                         max_evals=DEFAULT_MAX_EVALS):
    hbar = constants().hbar
    phase = _checked(
        kernels.phase_integral(_mode_code(mode), kappa0(p, b), b.eta / hbar, b.length,
                               rel_tol, max_evals),
        "transmission",
    )
    return math.exp(-2.0 * phase)


def traversal_numeric(p, b, mode=KappaMode.LINEARIZED, rel_tol=DEFAULT_REL_TOL,
                      max_evals=DEFAULT_MAX_EVALS):
    """Traversal time int_0^L m / (hbar kappa(x)) dx (fs) by quadrature."""
    hbar = constants().hbar
    value = _checked(
        kernels.traversal_integral(_mode_code(mode), kappa0(p, b), b.eta / hbar, b.length,
                                   rel_tol, max_evals),
        "traversal time",
    )
    return p.mass / hbar * value


def traversal_dissipative_closed(p, b):
    """Traversal time (m/eta) ln(1 + L/a), a = hbar kappa0 / eta; m L/(hbar kappa0) at eta = 0."""
    hbar = constants().hbar
    k0 = kappa0(p, b)
    if b.eta == 0.0:
        return p.mass * b.length / (hbar * k0)
    # log1p keeps the eta -> 0 limit continuous
    return p.mass / b.eta * math.log1p(b.eta * b.length / (hbar * k0))


def dwell_split(tau_d, transmission):
    """Split a dwell time into transmission and reflection dwell times.

    tau_dt = tau_d / T and tau_dr = tau_d / (1 - T), so that
    1/tau_d = 1/tau_dt + 1/tau_dr.
    """
    if not tau_d > 0:
        raise ValueError(f"dwell time must be positive, got {tau_d}")
    if not transmission > 0.0:
        raise DegenerateSplit("transmission is 0: transmission dwell time is infinite")
    if not transmission < 1.0:
        raise DegenerateSplit("transmission is 1: reflection dwell time is infinite")
    return tau_d / transmission, tau_d / (1.0 - transmission)


@dataclass(frozen=True)
class TimesReport:
    energy: float
    tau_d: float
    tau_d_improved: float
    tau_tr: float
    transmission: float
    tau_dt: float
    tau_dr: float
    eta: float
    flags: tuple = field(default=())

    @property
    def reflection(self):
        return 1.0 - self.transmission

    @property
    def regime_flag(self):
        return ";".join(self.flags) if self.flags else "ok"

    def reciprocal_residual(self):
        """Relative defect of 1/tau = 1/tau_dt + 1/tau_dr for the split dwell time."""
        lhs = 1.0 / self.tau_d_improved
        return abs(lhs - (1.0 / self.tau_dt + 1.0 / self.tau_dr)) / lhs

    def as_row(self):
        return (self.energy, self.tau_d, self.tau_d_improved, self.tau_tr, self.transmission,
                self.tau_dt, self.tau_dr, self.eta, self.regime_flag)

    def as_dict(self):
        return dict(zip(CSV_COLUMNS, self.as_row()))


def report(p, b, dwell_method="quadrature", mode=KappaMode.LINEARIZED, rel_tol=DEFAULT_REL_TOL):
    """All tunneling times at one energy.

    ``dwell_method`` is ``"quadrature"`` (default, nested quadrature of the
    dwell integral) or ``"closed"`` (weak-dissipation closed form).  The
    transmission and traversal time use their closed forms for the
    linearized profile and quadrature for the full one.  The dwell time that
    is split into tau_dt / tau_dr is the N^2-corrected one.
    """
    mode = KappaMode.parse(mode)
    flags = []
    if dissipation_ratio(p, b) > STRONG_DISSIPATION_RATIO:
        flags.append("strong_dissipation")
    if b.eta > 0 and b.eta > eta_max(p, b):
        flags.append("eta_above_max")

    if dwell_method == "quadrature":
        tau_d = dwell_jwkb_numeric(p, b, mode, rel_tol=rel_tol)
    elif dwell_method == "closed":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            tau_d = dwell_dissipative_closed(p, b)
    else:
        raise ValueError(f"unknown dwell method {dwell_method!r}")

    if mode is KappaMode.LINEARIZED:
        trans = transmission(p, b)
        tau_tr = traversal_dissipative_closed(p, b)
    else:
        trans = transmission_numeric(p, b, mode, rel_tol=rel_tol)
        tau_tr = traversal_numeric(p, b, mode, rel_tol=rel_tol)
    if trans == 0.0:
        flags.append("transmission_underflow")

    tau_improved = improved_factor(p, b) * tau_d
    tau_dt, tau_dr = dwell_split(tau_improved, trans)
    return TimesReport(
        energy=p.energy, tau_d=tau_d, tau_d_improved=tau_improved, tau_tr=tau_tr,
        transmission=trans, tau_dt=tau_dt, tau_dr=tau_dr, eta=b.eta, flags=tuple(flags),
    )


def report_grid(particle, barrier, energies, etas, **kwargs):
    """Reports for every (eta, E) pair, eta-major, in input order."""
    out = []
    for eta in etas:
        b = barrier.with_eta(eta)
        for e in energies:
            out.append(report(particle.with_energy(e), b, **kwargs))
    return out
