"""``tunnelkit`` command line: plot-ready tunneling-time and I-V datasets.

Exit status: 0 on success, 1 on usage errors, 2 on data or model errors.
"""

import argparse
import sys
import warnings
from contextlib import contextmanager

import numpy as np

from . import barrier as bar
from . import config as cfgmod
from . import exact, fit, simmons, times
from .errors import TunnelkitError
from .output import format_value, write_json, write_table

EXIT_USAGE = 1
EXIT_MODEL = 2

SHOWCASE = {"v0_ev": "1.8", "length_angstrom": "20.8", "mass": "electron"}
JUNCTION = {"v0_ev": "1.799", "length_angstrom": "20.8", "mass": "electron"}

TIMES_HELP = """\
output columns:
  energy_ev          incident energy E (eV)
  tau_d_fs           average JWKB dwell time (fs)
  tau_d_improved_fs  N^2-corrected dwell time (fs)
  tau_tr_fs          traversal time (fs)
  transmission       JWKB transmission with dissipation
  tau_dt_fs          transmission dwell time, from tau_d_improved (fs)
  tau_dr_fs          reflection dwell time, from tau_d_improved (fs)
  eta                friction coefficient (eV fs/A^2)
  regime_flag        ok, or ';'-joined: strong_dissipation, eta_above_max,
                     transmission_underflow
  exact_dwell_fs     (--oracle) exact dwell time of the undamped barrier (fs)
"""

ENERGY_LOSS_HELP = """\
output columns:
  energy_ev, eta, delta_e_ev (loss over the full barrier), fraction_lost
  (delta_e / E, may exceed 1), eta_max (eV fs/A^2), admissible (eta <= eta_max)
"""

ETA_MAX_HELP = "output columns:\n  energy_ev, eta_max_evfs_per_ang2\n"

IV_PREDICT_HELP = """\
output columns:
  voltage_v, eta, current_density_a_m2, current_a
"""

FIT_HELP = """\
input: CSV with header temperature_k,voltage_v,current_a
output columns:
  temperature_k, eta_evfs_per_ang2, eta_stderr, scale (exp(-eta L^2/hbar)),
  rms_rel_residual, n_points, flags
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _grid(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must be 'min,max,n'")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}")
    if n < 2:
        raise argparse.ArgumentTypeError("grid needs n >= 2")
    if not lo < hi:
        raise argparse.ArgumentTypeError("grid needs min < max")
    return lo, hi, n


def _add_barrier_args(p):
    p.add_argument("--v0", type=float, help="barrier height V0 (eV)")
    p.add_argument("--length", type=float, help="barrier width L (A)")
    p.add_argument("--mass", help="'electron' or a mass in eV fs^2/A^2")
    p.add_argument("--config", help=f"flat key=value config file (default: ${cfgmod.ENV_VAR})")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", help="output file (default: stdout)")


def build_parser():
    parser = _Parser(prog="tunnelkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    fmt = argparse.RawDescriptionHelpFormatter

    p = sub.add_parser("times", help="tunneling times over an energy grid",
                       epilog=TIMES_HELP, formatter_class=fmt)
    _add_barrier_args(p)
    p.add_argument("--eta", type=_float_list, help="friction coefficients (default 0,0.002,0.005)")
    p.add_argument("--grid", type=_grid, help="energy grid e_min,e_max,n (default 0.02 V0..0.98 V0, 100)")
    p.add_argument("--oracle", action="store_true", help="add the exact dwell time column")
    p.add_argument("--dwell-method", choices=("quadrature", "closed"), default="quadrature")
    p.add_argument("--kappa-mode", choices=("linearized", "full"), default="linearized")

    p = sub.add_parser("energy-loss", help="fraction of energy lost vs E",
                       epilog=ENERGY_LOSS_HELP, formatter_class=fmt)
    _add_barrier_args(p)
    p.add_argument("--eta", type=_float_list, help="friction coefficients (default 0.002,0.005)")
    p.add_argument("--grid", type=_grid, help="energy grid e_min,e_max,n (default 0.05 V0..0.95 V0, 19)")

    p = sub.add_parser("eta-max", help="largest admissible friction coefficient",
                       epilog=ETA_MAX_HELP, formatter_class=fmt)
    _add_barrier_args(p)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--energy", type=float, help="incident energy (eV)")
    g.add_argument("--grid", type=_grid, help="energy grid e_min,e_max,n")

    p = sub.add_parser("iv-predict", help="dissipative Simmons I-V curves",
                       epilog=IV_PREDICT_HELP, formatter_class=fmt)
    _add_barrier_args(p)
    p.add_argument("--area", type=float, help="junction area (m^2)")
    p.add_argument("--eta", type=_float_list, help="friction coefficients (default 0)")
    p.add_argument("--vgrid", type=_grid, help="bias grid v_min,v_max,n (default 0.01,0.5,50)")

    for name, helptext in (("iv-fit", "fit eta for each curve; stop on the first failure"),
                           ("sweep", "fit eta(T) across all curves; collect failures")):
        p = sub.add_parser(name, help=helptext, epilog=FIT_HELP, formatter_class=fmt)
        _add_barrier_args(p)
        p.add_argument("--data", required=True, help="I-V CSV file")
        p.add_argument("--area", type=float, help="junction area (m^2)")
        p.add_argument("--objective", choices=fit.OBJECTIVES, default="linear")
        p.add_argument("--lenient", action="store_true",
                       help="reject malformed rows instead of failing")
        if name == "iv-fit":
            p.add_argument("--temperature", type=float, help="fit only this temperature (K)")
    return parser


def _settings(args, defaults):
    flags = {
        "v0_ev": args.v0, "length_angstrom": args.length, "mass": args.mass,
        "area_m2": getattr(args, "area", None),
    }
    try:
        return cfgmod.resolve(flags, args.config, defaults)
    except (OSError, cfgmod.ConfigError) as exc:
        raise UsageError(str(exc))


def _barrier(s):
    try:
        _, b = bar.from_config(s)
        mass = bar.parse_mass(s.get("mass", "electron"))
    except ValueError as exc:
        raise UsageError(str(exc))
    return b, mass


def _etas(args, s, default):
    if args.eta is not None:
        return args.eta
    if s.get("eta_evfs_per_ang2") is not None:
        try:
            return [float(s["eta_evfs_per_ang2"])]
        except ValueError as exc:
            raise UsageError(f"bad eta_evfs_per_ang2: {exc}")
    return default


def _energies(grid, b, default):
    lo, hi, n = grid if grid else (default[0] * b.v0_height, default[1] * b.v0_height, default[2])
    if lo <= 0:
        raise UsageError("energy grid must start above 0")
    if hi >= b.v0_height:
        raise UsageError(f"energy grid must end below V0 = {b.v0_height} eV")
    return np.linspace(lo, hi, n).tolist()


def _junction(s):
    if s.get("area_m2") is None:
        raise UsageError("--area is required (or area_m2 in the config file)")
    try:
        return simmons.JunctionSpec(float(s["v0_ev"]), float(s["length_angstrom"]),
                                    float(s["area_m2"]))
    except ValueError as exc:
        raise UsageError(str(exc))


@contextmanager
def _out(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def cmd_times(args):
    s = _settings(args, SHOWCASE)
    b, mass = _barrier(s)
    energies = _energies(args.grid, b, (0.02, 0.98, 100))
    etas = _etas(args, s, [0.0, 0.002, 0.005])
    columns = list(times.CSV_COLUMNS)
    oracle = {}
    if args.oracle:
        columns.append("exact_dwell_fs")
        b0 = b.with_eta(0.0)
        oracle = {e: exact.exact_dwell(bar.Particle(e, mass), b0) for e in energies}
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", times.RegimeWarning)
        for eta in etas:
            be = b.with_eta(eta)
            for e in energies:
                try:
                    r = times.report(bar.Particle(e, mass), be, dwell_method=args.dwell_method,
                                     mode=args.kappa_mode)
                except TunnelkitError as exc:
                    raise type(exc)(f"{exc} (E={e!r} eV, eta={eta!r})") from exc
                row = list(r.as_row())
                if args.oracle:
                    row.append(oracle[e])
                rows.append(row)
    with _out(args.output) as fh:
        write_table(columns, rows, fh, args.format)


def cmd_energy_loss(args):
    s = _settings(args, SHOWCASE)
    b, mass = _barrier(s)
    energies = _energies(args.grid, b, (0.05, 0.95, 19))
    etas = _etas(args, s, [0.002, 0.005])
    rows = []
    for eta in etas:
        be = b.with_eta(eta)
        for e in energies:
            p = bar.Particle(e, mass)
            frac = bar.fraction_lost(p, be, strict=False)
            emax = bar.eta_max(p, be)
            rows.append((e, eta, frac * e, frac, emax, eta <= emax))
    cols = ("energy_ev", "eta", "delta_e_ev", "fraction_lost", "eta_max", "admissible")
    with _out(args.output) as fh:
        write_table(cols, rows, fh, args.format)


def cmd_eta_max(args):
    b, mass = _barrier(_settings(args, SHOWCASE))
    if args.energy is not None:
        energies = [args.energy]
    else:
        energies = _energies(args.grid, b, (0.05, 0.95, 19))
    rows = [(e, bar.eta_max(bar.Particle(e, mass), b)) for e in energies]
    with _out(args.output) as fh:
        write_table(("energy_ev", "eta_max_evfs_per_ang2"), rows, fh, args.format)


def cmd_iv_predict(args):
    s = _settings(args, JUNCTION)
    j = _junction(s)
    lo, hi, n = args.vgrid or (0.01, 0.5, 50)
    volts = np.linspace(lo, hi, n)
    etas = _etas(args, s, [0.0])
    rows = []
    for eta in etas:
        dens = np.atleast_1d(simmons.dissipative_current_density(volts, j, eta))
        rows.extend((v, eta, d, d * j.area) for v, d in zip(volts, dens))
    with _out(args.output) as fh:
        write_table(("voltage_v", "eta", "current_density_a_m2", "current_a"), rows, fh,
                    args.format)


def _load_curves(args):
    try:
        data = fit.ingest_csv(args.data, strict=not args.lenient)
    except OSError as exc:
        raise UsageError(f"cannot read {args.data}: {exc}")
    for r in data.rejects:
        print(f"rejected line {r.line}: {r.reason}", file=sys.stderr)
    return data.curves


def cmd_iv_fit(args):
    j = _junction(_settings(args, JUNCTION))
    curves = _load_curves(args)
    if args.temperature is not None:
        curves = [c for c in curves if c.temperature == args.temperature]
        if not curves:
            raise UsageError(f"no curve at T = {args.temperature} K in {args.data}")
    results = [fit.fit_eta(c, j, args.objective) for c in curves]
    with _out(args.output) as fh:
        write_table(fit.RESULT_COLUMNS, [r.as_row() for r in results], fh, args.format)


def cmd_sweep(args):
    j = _junction(_settings(args, JUNCTION))
    sweep = fit.fit_sweep(_load_curves(args), j, args.objective)
    rows = [r.as_row() for r in sweep.results]
    with _out(args.output) as fh:
        if args.format == "json":
            write_json({
                "results": [dict(zip(fit.RESULT_COLUMNS, r)) for r in rows],
                "errors": [vars(e) for e in sweep.errors],
                "eta_non_increasing": sweep.eta_non_increasing,
            }, fh)
        else:
            write_table(fit.RESULT_COLUMNS, rows, fh, "csv")
    for e in sweep.errors:
        print(f"fit failed at T={format_value(e.temperature)}: {e.error}: {e.message}",
              file=sys.stderr)
    print(f"eta_non_increasing={format_value(sweep.eta_non_increasing)}", file=sys.stderr)


COMMANDS = {
    "times": cmd_times,
    "energy-loss": cmd_energy_loss,
    "eta-max": cmd_eta_max,
    "iv-predict": cmd_iv_predict,
    "iv-fit": cmd_iv_fit,
    "sweep": cmd_sweep,
}


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"tunnelkit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TunnelkitError as exc:
        print(f"tunnelkit {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MODEL
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
