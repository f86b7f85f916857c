"""Command-line interface: run, optimize, sweep, figure.

Configuration comes from an INI file (sections [system], [input],
[envelope], [search]) with every value overridable by a flag.  All data
leaves as UTF-8 CSV with a header row and 12-significant-digit floats,
plus a `.meta` sidecar recording the generating parameters.

Exit codes: 0 success, 2 configuration error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import sys as _sys
from pathlib import Path

import numpy as np

from .domain import EmitterParams, SystemParams
from .envelopes import PROFILE_KINDS, JointEnvelope, SpectralProfile
from .errors import (ConfigError, ConsistencyError, MisuseError, MZHeraldError,
                     NumericalError, ParameterError, QuadratureError,
                     UnsupportedConfigError)
from .figures import FIGURE_IDS, figure_data
from .optimizer import FrequencySearch, optimize_frequency, sweep
from .protocols import (DetectorModel, n_photon_monochromatic,
                        single_photon_broadband, single_photon_monochromatic,
                        two_photon_broadband, two_photon_monochromatic)

_CONFIG_ERRORS = (ConfigError, ParameterError, MisuseError,
                  UnsupportedConfigError)
_NUMERICAL_ERRORS = (QuadratureError, NumericalError, ConsistencyError)


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def write_csv(path, columns, rows, metadata=None):
    """UTF-8 CSV with a header row plus a key=value .meta sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    meta = dict(metadata or {})
    with open(path.with_suffix(path.suffix + ".meta"), "w",
              encoding="utf-8") as fh:
        for key in sorted(meta):
            fh.write(f"{key}={_fmt(meta[key])}\n")


# ---------------------------------------------------------------------------
# configuration assembly
# ---------------------------------------------------------------------------

_DEFAULTS = {
    "e1": 0.0, "gamma1": 1.0, "beta1": 1.0,
    "delta": 1.0, "gamma2": None, "beta2": 1.0,
    "n": 1, "m": 0, "detector": "nr",
    "omega": None, "omega_at": None,
    "profile": None, "center": None, "sigma": None,
    "window": None, "coarse": 241, "tol": 1e-4,
}

_INI_SECTIONS = {
    "system": ("e1", "gamma1", "beta1", "delta", "gamma2", "beta2"),
    "input": ("n", "m", "detector", "omega", "omega_at"),
    "envelope": ("profile", "center", "sigma"),
    "search": ("window", "coarse", "tol"),
}

_INT_KEYS = ("n", "m", "coarse")
_STR_KEYS = ("detector", "omega_at", "profile", "window")


def _load_config(path) -> dict:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    values = {}
    for section, keys in _INI_SECTIONS.items():
        if not parser.has_section(section):
            continue
        for key in parser.options(section):
            if key not in keys:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
            raw = parser.get(section, key)
            if key in _INT_KEYS:
                values[key] = int(raw)
            elif key in _STR_KEYS:
                values[key] = raw
            else:
                values[key] = float(raw)
    return values


def _settings(args) -> dict:
    cfg = dict(_DEFAULTS)
    if getattr(args, "config", None):
        cfg.update(_load_config(args.config))
    for key in _DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            cfg[key] = flag
    return cfg


def _build_system(cfg) -> SystemParams:
    gamma2 = cfg["gamma2"] if cfg["gamma2"] is not None else cfg["gamma1"]
    e1 = EmitterParams(cfg["e1"], cfg["gamma1"], cfg["beta1"])
    e2 = EmitterParams(cfg["e1"] + cfg["delta"], gamma2, cfg["beta2"])
    return SystemParams(e1, e2)


def _resolve_omega(cfg, sys: SystemParams) -> float:
    if cfg["omega"] is not None:
        return float(cfg["omega"])
    at = cfg["omega_at"] or "midpoint"
    if at == "midpoint":
        return sys.midpoint
    if at == "resonance":
        return sys.emitter1.energy
    raise ConfigError(f"unknown omega-at value {at!r}; "
                      "expected 'midpoint' or 'resonance'")


def _detector(cfg) -> DetectorModel:
    try:
        return DetectorModel(cfg["detector"])
    except ValueError:
        raise ConfigError(f"unknown detector model {cfg['detector']!r}; "
                          "expected 'nr' or 'nnr'") from None


def _search(cfg) -> FrequencySearch:
    window = cfg["window"]
    if isinstance(window, str):
        parts = [float(p) for p in window.replace(",", " ").split()]
        if len(parts) != 2:
            raise ConfigError("window needs exactly two values: lo hi")
        window = tuple(parts)
    return FrequencySearch(window=window, coarse_points=cfg["coarse"],
                           tolerance=cfg["tol"])


def _dispatch_run(cfg):
    sys_params = _build_system(cfg)
    n, m = cfg["n"], cfg["m"]
    detector = _detector(cfg)
    if cfg["profile"] is not None:
        kind = cfg["profile"]
        if kind not in PROFILE_KINDS or kind == "monochromatic":
            raise ConfigError(f"unknown envelope profile {kind!r}")
        center = cfg["center"] if cfg["center"] is not None else sys_params.midpoint
        if cfg["sigma"] is None:
            raise ConfigError("broadband run needs --sigma")
        prof = SpectralProfile(kind, center, cfg["sigma"])
        if (n, m) == (1, 0):
            return single_photon_broadband(sys_params, prof)
        if (n, m) == (1, 1):
            return two_photon_broadband(sys_params, JointEnvelope(prof, prof),
                                        detector)
        raise ConfigError(f"broadband runs support |1,0> and |1,1>, not |{n},{m}>")
    omega = _resolve_omega(cfg, sys_params)
    if (n, m) == (1, 0):
        return single_photon_monochromatic(sys_params, omega)
    if (n, m) == (1, 1):
        return two_photon_monochromatic(sys_params, omega, detector)
    return n_photon_monochromatic(n, m, sys_params, omega)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_run(args) -> int:
    cfg = _settings(args)
    result = _dispatch_run(cfg)
    print(f"{'signature':>10} {'probability':>16} {'concurrence':>13}")
    for out in sorted(result.outcomes, key=lambda o: o.signature, reverse=True):
        sig = f"({out.signature[0]},{out.signature[1]})"
        print(f"{sig:>10} {out.probability:>16.10f} {out.concurrence:>13.10f}")
    print(f"C_avg = {result.c_avg:.10f}")
    if args.output:
        rows = [[f"{o.signature[0]},{o.signature[1]}", o.probability,
                 o.concurrence] for o in result.outcomes]
        rows.append(["c_avg", result.c_avg, ""])
        meta = {k: v for k, v in cfg.items() if v is not None}
        write_csv(args.output, ["signature", "probability", "concurrence"],
                  rows, meta)
    return 0


def cmd_optimize(args) -> int:
    cfg = _settings(args)
    sys_params = _build_system(cfg)
    search = _search(cfg)

    def objective(w):
        local = dict(cfg, omega=w)
        return _dispatch_run(local).c_avg

    opt = optimize_frequency(objective, search, sys_params)
    print(f"omega_opt = {opt.omega:.6f} ueV  c_max = {opt.c_avg:.10f}")
    if opt.boundary:
        print("warning: optimum lies at the search-window boundary")
    if args.output:
        meta = {k: v for k, v in cfg.items() if v is not None}
        write_csv(args.output, ["omega_opt_ueV", "c_max", "boundary"],
                  [[opt.omega, opt.c_avg, int(opt.boundary)]], meta)
    return 0


def cmd_sweep(args) -> int:
    cfg = _settings(args)
    if not args.output:
        raise ConfigError("sweep requires --output")
    delta_axis = np.linspace(args.delta_min, args.delta_max, args.delta_points)
    g2_axis = np.linspace(args.g2_min, args.g2_max, args.g2_points)
    table = sweep(cfg["n"], cfg["m"], delta_axis, g2_axis, _search(cfg),
                  gamma1=cfg["gamma1"], workers=args.workers)
    rows = [list(r) for r in table.rows()]
    meta = {"input": f"{cfg['n']},{cfg['m']}", "gamma1_ueV": cfg["gamma1"],
            "omega_opt_units": "(omega_opt - E1) / Gamma1"}
    write_csv(args.output, ["delta_over_g1", "g2_over_g1", "c_avg_max",
                            "omega_opt"], rows, meta)
    if table.errors:
        for cell, message in sorted(table.errors.items()):
            print(f"cell {cell}: {message}", file=_sys.stderr)
    print(f"wrote {len(rows)} rows to {args.output}")
    return 0


def cmd_figure(args) -> int:
    out_dir = Path(args.output_dir)
    produced = figure_data(args.id, args.grid_points)
    for name, (rows, columns, meta) in sorted(produced.items()):
        path = out_dir / f"fig_{name}.csv"
        write_csv(path, columns, rows, dict(meta, figure=args.id))
        print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(parser):
    parser.add_argument("--config", help="INI config file")
    parser.add_argument("--e1", type=float, help="emitter-1 energy (ueV)")
    parser.add_argument("--gamma1", type=float, help="emitter-1 linewidth (ueV)")
    parser.add_argument("--beta1", type=float, help="emitter-1 beta factor")
    parser.add_argument("--delta", type=float, help="E2 - E1 (ueV)")
    parser.add_argument("--gamma2", type=float, help="emitter-2 linewidth (ueV)")
    parser.add_argument("--beta2", type=float, help="emitter-2 beta factor")
    parser.add_argument("--beta", type=float, dest="beta",
                        help="set both beta factors at once")
    parser.add_argument("--n", type=int, help="photons in the upper arm")
    parser.add_argument("--m", type=int, help="photons in the lower arm")
    parser.add_argument("--detector", choices=["nr", "nnr"],
                        help="detector model")
    parser.add_argument("--output", help="CSV output path")


def _add_envelope(parser):
    parser.add_argument("--omega", type=float, help="photon energy (ueV)")
    parser.add_argument("--omega-at", dest="omega_at",
                        choices=["midpoint", "resonance"],
                        help="symbolic photon energy")
    parser.add_argument("--profile",
                        choices=[k for k in PROFILE_KINDS if k != "monochromatic"],
                        help="broadband envelope kind")
    parser.add_argument("--center", type=float, help="envelope center (ueV)")
    parser.add_argument("--sigma", type=float, help="envelope FWHM (ueV)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mzherald",
        description="Heralded entanglement between two detuned waveguide "
                    "emitters in a Mach-Zehnder interferometer.")
    subs = parser.add_subparsers(dest="command", required=True)

    p_run = subs.add_parser("run", help="single protocol run")
    _add_common(p_run)
    _add_envelope(p_run)
    p_run.set_defaults(handler=cmd_run)

    p_opt = subs.add_parser("optimize", help="optimize photon frequency")
    _add_common(p_opt)
    _add_envelope(p_opt)
    p_opt.add_argument("--window", nargs=2, type=float, metavar=("LO", "HI"))
    p_opt.add_argument("--coarse", type=int, help="coarse grid points")
    p_opt.add_argument("--tol", type=float, help="refinement tolerance (ueV)")
    p_opt.set_defaults(handler=cmd_optimize)

    p_sweep = subs.add_parser("sweep", help="(delta, Gamma2) sweep grid")
    _add_common(p_sweep)
    p_sweep.add_argument("--delta-min", type=float, default=0.0)
    p_sweep.add_argument("--delta-max", type=float, default=3.0)
    p_sweep.add_argument("--delta-points", type=int, default=21)
    p_sweep.add_argument("--g2-min", type=float, default=0.2)
    p_sweep.add_argument("--g2-max", type=float, default=3.0)
    p_sweep.add_argument("--g2-points", type=int, default=21)
    p_sweep.add_argument("--workers", type=int, default=None)
    p_sweep.set_defaults(handler=cmd_sweep)

    p_fig = subs.add_parser("figure", help="emit published-figure CSV data")
    p_fig.add_argument("--id", required=True, choices=FIGURE_IDS)
    p_fig.add_argument("--output-dir", default="figures")
    p_fig.add_argument("--grid-points", type=int, default=None)
    p_fig.set_defaults(handler=cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "beta", None) is not None:
        args.beta1 = args.beta
        args.beta2 = args.beta
    if getattr(args, "output", None) is None:
        args.output = None
    try:
        return args.handler(args)
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical error ({type(exc).__name__}): {exc}", file=_sys.stderr)
        return 3
    except _CONFIG_ERRORS as exc:
        print(f"configuration error: {exc}", file=_sys.stderr)
        return 2
    except MZHeraldError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
