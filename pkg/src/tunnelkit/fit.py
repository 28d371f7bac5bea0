"""Friction coefficient eta(T) from I-V curves at fixed barrier height and width.

With V0 and L fixed the dissipative Simmons current is ``s * I0(V)`` with a
single unknown scale ``s = exp(-eta L^2 / hbar)``, so the least-squares fit
is linear and has the closed-form solution ``s = sum(I I0) / sum(I0^2)``.
"""

import csv
import io
import math
import os
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .errors import EmptyDataset, NonPhysicalFit, ParseError, TunnelkitError
from .simmons import IVPoint, JunctionSpec, current
from .units import constants

CSV_HEADER = ("temperature_k", "voltage_v", "current_a")
RESULT_COLUMNS = (
    "temperature_k", "eta_evfs_per_ang2", "eta_stderr", "scale", "rms_rel_residual",
    "n_points", "flags",
)
OBJECTIVES = ("linear", "log")


@dataclass(frozen=True)
class IVCurve:
    temperature: float
    points: Tuple[IVPoint, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not (math.isfinite(self.temperature) and self.temperature > 0):
            raise ValueError(f"temperature must be positive, got {self.temperature}")
        if len(self.points) < 3:
            raise ValueError(f"an I-V curve needs at least 3 points, got {len(self.points)}")
        v = self.voltages
        if np.any(np.diff(v) <= 0):
            raise ValueError("curve voltages must be strictly increasing")

    @classmethod
    def from_arrays(cls, temperature, voltages, currents, label=""):
        """Build a curve from unsorted arrays; points are ordered by voltage."""
        v = np.asarray(voltages, dtype=float)
        i = np.asarray(currents, dtype=float)
        order = np.argsort(v, kind="stable")
        pts = [IVPoint(float(v[k]), float(i[k])) for k in order]
        return cls(float(temperature), tuple(pts), label)

    @property
    def voltages(self):
        return np.array([p.voltage for p in self.points])

    @property
    def currents(self):
        return np.array([p.current for p in self.points])


@dataclass(frozen=True)
class Reject:
    line: int
    reason: str
    text: str = ""


@dataclass
class IngestResult:
    curves: List[IVCurve]
    rejects: List[Reject] = field(default_factory=list)

    def __iter__(self):
        return iter(self.curves)

    def __len__(self):
        return len(self.curves)


def _read_text(source):
    if isinstance(source, (bytes, bytearray)):
        return bytes(source).decode("utf-8")
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            return fh.read().decode("utf-8")
    data = source.read()
    return data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data


def ingest_csv(source, strict=True):
    """Read ``temperature_k,voltage_v,current_a`` rows into one curve per temperature.

    ``source`` is a path, raw bytes or a binary/text stream.  In strict mode
    a malformed row raises :class:`ParseError` with its line number;
    otherwise it goes to the rejects list.  Repeated (T, V) pairs keep the
    first row and reject the later ones as ``duplicate_voltage``.
    Temperatures with fewer than 3 usable rows are rejected as
    ``too_few_points``.
    """
    text = _read_text(source)
    reader = csv.reader(io.StringIO(text))
    header = None
    rejects = []
    groups = {}
    seen = set()
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row) or row[0].lstrip().startswith("#"):
            continue
        if header is None:
            names = tuple(c.strip().lower() for c in row)
            if names != CSV_HEADER:
                raise ParseError(f"expected header {','.join(CSV_HEADER)}, got {','.join(row)}",
                                 line=line)
            header = names
            continue
        try:
            if len(row) != 3:
                raise ValueError(f"expected 3 fields, got {len(row)}")
            t, v, i = (float(c) for c in row)
            if not all(math.isfinite(x) for x in (t, v, i)):
                raise ValueError("non-finite value")
            if t <= 0:
                raise ValueError("temperature must be positive")
        except ValueError as exc:
            if strict:
                raise ParseError(f"{exc} in row {','.join(row)!r}", line=line) from None
            rejects.append(Reject(line, "malformed", ",".join(row)))
            continue
        if (t, v) in seen:
            rejects.append(Reject(line, "duplicate_voltage", ",".join(row)))
            continue
        seen.add((t, v))
        groups.setdefault(t, []).append((line, v, i))

    if header is None:
        raise EmptyDataset("no header row found")
    curves = []
    for t in sorted(groups):
        rows = groups[t]
        if len(rows) < 3:
            rejects.extend(Reject(line, "too_few_points") for line, _, _ in rows)
            continue
        curves.append(IVCurve.from_arrays(t, [r[1] for r in rows], [r[2] for r in rows],
                                          label=f"T={t:g}K"))
    if not curves:
        raise EmptyDataset("no temperature has 3 or more usable rows")
    rejects.sort(key=lambda r: r.line)
    return IngestResult(curves, rejects)


def write_iv_csv(curves, stream):
    """Write curves in the ``ingest_csv`` format."""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for c in curves:
        for p in c.points:
            w.writerow((repr(c.temperature), repr(p.voltage), repr(p.current)))


# --- fitting ------------------------------------------------------------------

def scale_from_eta(eta, width):
    return math.exp(-eta * width * width / constants().hbar)


def eta_from_scale(scale, width):
    return -constants().hbar / (width * width) * math.log(scale)


@dataclass(frozen=True)
class FitResult:
    temperature: float
    eta: float
    eta_stderr: float
    scale: float
    rms_relative_residual: float
    n_points: int
    flags: Tuple[str, ...] = ()
    label: str = ""

    def as_row(self):
        return (self.temperature, self.eta, self.eta_stderr, self.scale,
                self.rms_relative_residual, self.n_points, ";".join(self.flags))


def _linear_fit(i_obs, model):
    s_jj = float(np.dot(model, model))
    if s_jj == 0.0:
        raise NonPhysicalFit("model current vanishes at every voltage")
    s = float(np.dot(i_obs, model)) / s_jj
    if not s > 0:
        raise NonPhysicalFit(f"best-fit scale {s:.6g} <= 0: data anti-correlated with the model")
    r = i_obs - s * model
    # HC3 sandwich variance: the noise on junction currents is multiplicative,
    # so the homoscedastic OLS variance understates the spread
    lev = model * model / s_jj
    with np.errstate(divide="ignore", invalid="ignore"):
        adj = np.where(lev < 1.0, r / (1.0 - lev), 0.0)
    var_s = float(np.sum(model * model * adj * adj)) / s_jj**2
    return s, math.sqrt(var_s)


def _log_fit(i_obs, model):
    keep = model != 0.0
    ratio = i_obs[keep] / model[keep]
    if ratio.size < 2 or np.any(ratio <= 0):
        raise NonPhysicalFit("log-space fit needs data and model of the same sign at every nonzero bias")
    logs = np.log(ratio)
    log_s = float(np.mean(logs))
    se_log = float(np.std(logs, ddof=1)) / math.sqrt(logs.size)
    s = math.exp(log_s)
    return s, s * se_log


def fit_eta(curve, j, objective="linear"):
    """Fit eta for one curve with the barrier height and width of ``j`` held fixed.

    ``objective="linear"`` minimises sum (I - s I0)^2; ``"log"`` minimises
    sum (ln I - ln s - ln I0)^2, weighting every decade equally.  A scale
    above 1 (data exceeding the dissipationless model) is reported with the
    ``negative_eta`` flag, never clamped.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}")
    v = curve.voltages
    i_obs = curve.currents
    model = np.atleast_1d(current(v, j, 0.0))
    if objective == "linear":
        s, se_s = _linear_fit(i_obs, model)
    else:
        s, se_s = _log_fit(i_obs, model)

    eta = eta_from_scale(s, j.width)
    eta_se = constants().hbar / j.width**2 * se_s / s
    fitted = s * model
    nz = fitted != 0.0
    rel = (i_obs[nz] - fitted[nz]) / fitted[nz]
    rms = float(np.sqrt(np.mean(rel * rel))) if rel.size else math.nan
    flags = ("negative_eta",) if s > 1.0 else ()
    return FitResult(temperature=curve.temperature, eta=eta, eta_stderr=eta_se, scale=s,
                     rms_relative_residual=rms, n_points=len(curve.points), flags=flags,
                     label=curve.label)


@dataclass(frozen=True)
class SweepError:
    temperature: Optional[float]
    label: str
    error: str
    message: str


@dataclass
class SweepResult:
    results: List[FitResult]
    errors: List[SweepError]
    eta_non_increasing: bool

    def __iter__(self):
        return iter(self.results)


def fit_sweep(curves, j, objective="linear"):
    """Fit every curve; failures are collected, not raised.

    ``eta_non_increasing`` reports whether the fitted eta never rises with
    temperature.  It is a diagnostic only.
    """
    curves = list(curves)
    if not curves:
        raise EmptyDataset("no curves to fit")
    results, errors = [], []
    for c in curves:
        try:
            results.append(fit_eta(c, j, objective))
        except TunnelkitError as exc:
            errors.append(SweepError(getattr(c, "temperature", None), getattr(c, "label", ""),
                                     type(exc).__name__, str(exc)))
    results.sort(key=lambda r: r.temperature)
    etas = [r.eta for r in results]
    monotone = all(b <= a for a, b in zip(etas, etas[1:]))
    return SweepResult(results, errors, monotone)


def synthetic_curve(temperature, eta, j, voltages, noise=0.0, rng=None, label=""):
    """I-V curve from the forward model, optionally with multiplicative Gaussian noise."""
    voltages = np.asarray(voltages, dtype=float)
    i = np.atleast_1d(current(voltages, j, eta))
    if noise:
        rng = np.random.default_rng() if rng is None else rng
        i = i * (1.0 + noise * rng.standard_normal(i.shape))
    return IVCurve.from_arrays(temperature, voltages, i, label or f"T={temperature:g}K")


__all__ = [
    "IVCurve", "IngestResult", "Reject", "FitResult", "SweepError", "SweepResult",
    "JunctionSpec", "ingest_csv", "write_iv_csv", "fit_eta", "fit_sweep",
    "scale_from_eta", "eta_from_scale", "synthetic_curve",
]
