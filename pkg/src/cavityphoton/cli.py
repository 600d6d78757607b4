"""Command-line front end.

Subcommands
-----------
simulate   integrate one run; writes trajectory.csv and summary.json
sweep      sweep one variable over a grid; writes sweep.csv (or .json)
fit-a      fit the exponential efficiency law over a gamma grid; fit_a.json
fit-poly   fit the log-log polynomial of the exponent over a ratio grid;
           fit_poly.json
bound      print the closed-form adiabaticity and width figures for a config

Console output rounds to five significant figures; files keep full precision.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .analysis import analyze
from .config import ConfigError, RunConfig, config_echo, load_config, parse_config
from .engine import SimulationError, simulate
from .fitting import fit_log_polynomial
from .model import (ADIABATIC_MARGIN_MIN, adiabaticity_margin,
                    adiabaticity_threshold, fwhm_bound)
from .sweep import (SweepSpec, default_gamma_grid, default_ratio_grid,
                    exponent_for_ratio, run_sweep)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavityphoton",
        description="Simulator and analysis toolkit for an atom-cavity "
                    "single-photon source driven by a Gaussian pulse.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("simulate", "integrate one run and write trajectory + summary"),
        ("sweep", "run one sweep and write the results table"),
        ("fit-a", "fit the exponential efficiency law"),
        ("fit-poly", "fit the polynomial exponent law over coupling ratios"),
        ("bound", "print closed-form adiabaticity and width figures"),
    ]:
        cmd = sub.add_parser(name, help=helptext)
        cmd.add_argument("--config", help="path to a JSON config document")
        cmd.add_argument("--out", help="output directory")
        cmd.add_argument("--format", choices=("csv", "json"),
                         help="table output format")
        cmd.add_argument("--stride", type=int,
                         help="record every N integration steps")
        cmd.add_argument("--t-end", type=float, dest="t_end",
                         help="end of the integration window [s]")
        cmd.add_argument("--parallel", type=int, default=1,
                         help="number of worker processes for sweeps")
    return parser


def _load(args) -> RunConfig:
    raw = load_config(args.config) if args.config else {}
    return parse_config(raw, t_end=args.t_end, record_stride=args.stride,
                        out_dir=args.out, out_format=args.format)


def _warn_adiabaticity(cfg: RunConfig) -> float:
    margin = adiabaticity_margin(cfg.pulse, cfg.system.g)
    if margin < ADIABATIC_MARGIN_MIN:
        print(f"warning: adiabaticity margin {margin:.5g} is below "
              f"{ADIABATIC_MARGIN_MIN}; the pulse is too fast for a clean "
              "dark-state transfer", file=sys.stderr)
    return margin


def _cmd_simulate(args) -> int:
    cfg = _load(args)
    margin = _warn_adiabaticity(cfg)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    traj = simulate(cfg.pulse, cfg.system, cfg.schedule)
    report = analyze(traj)
    io.write_trajectory_csv(cfg.out_dir / "trajectory.csv", traj)
    io.write_summary_json(cfg.out_dir / "summary.json", report, margin,
                          config_echo(cfg))
    print(f"eta      = {report.eta:.5g}")
    print(f"delta_t  = {report.delta_t:.5g} s")
    print(f"t_max    = {report.t_max:.5g} s")
    pops = ", ".join(f"{x:.5g}" for x in report.final_populations)
    print(f"final populations (u0, e0, g1, g0) = {pops}")
    print(f"wrote {cfg.out_dir / 'trajectory.csv'} and "
          f"{cfg.out_dir / 'summary.json'}")
    return EXIT_OK


def _parse_grid(section: dict, where: str) -> np.ndarray:
    if "grid" in section:
        return np.asarray(section["grid"], dtype=float)
    try:
        lo, hi = float(section["min"]), float(section["max"])
        count = int(section["count"])
    except KeyError as exc:
        raise ConfigError(f"{where} needs either 'grid' or min/max/count") from exc
    spacing = section.get("spacing", "linear")
    if spacing == "linear":
        return np.linspace(lo, hi, count)
    if spacing == "log":
        return np.geomspace(lo, hi, count)
    raise ConfigError(f"{where}.spacing must be 'linear' or 'log', got {spacing!r}")


def _cmd_sweep(args) -> int:
    cfg = _load(args)
    section = cfg.raw.get("sweep")
    if not section:
        raise ConfigError("the sweep command needs a 'sweep' section in the config")
    variable = section.get("variable")
    spec = SweepSpec(variable=variable, grid=_parse_grid(section, "'sweep'"),
                     pulse=cfg.pulse, system=cfg.system)
    schedule = None if variable == "T" else cfg.schedule
    points = run_sweep(spec, schedule=schedule,
                       record_stride=cfg.schedule.record_stride,
                       parallel=args.parallel)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    if cfg.out_format == "json":
        out = cfg.out_dir / "sweep.json"
        io.write_sweep_json(out, points)
    else:
        out = cfg.out_dir / "sweep.csv"
        io.write_sweep_csv(out, points)
    failed = sum(1 for p in points if p.error is not None)
    print(f"{len(points) - failed}/{len(points)} points succeeded; wrote {out}")
    return EXIT_OK if failed < len(points) else EXIT_RUNTIME


def _cmd_fit_a(args) -> int:
    cfg = _load(args)
    section = cfg.raw.get("fit_a", {})
    if "gamma_grid" in section:
        grid = np.asarray(section["gamma_grid"], dtype=float)
    elif section:
        grid = _parse_grid(section, "'fit_a'")
    else:
        grid = default_gamma_grid()
    ratio = cfg.system.g / cfg.pulse.omega0
    result = exponent_for_ratio(ratio, cfg.pulse, gamma_grid=grid,
                                schedule=cfg.schedule, parallel=args.parallel)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    out = cfg.out_dir / "fit_a.json"
    io.write_fit_json(out, result, ["a"],
                      extra={"T": cfg.pulse.T, "g_over_omega0": ratio})
    a = result.parameters[0]
    print(f"a = {a:.5g}  (residual_max = {result.residual_max:.5g})")
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_fit_poly(args) -> int:
    cfg = _load(args)
    section = cfg.raw.get("fit_poly", {})
    if "ratio_grid" in section:
        ratios = np.asarray(section["ratio_grid"], dtype=float)
    elif section and "min" in section:
        ratios = _parse_grid(section, "'fit_poly'")
    else:
        ratios = default_ratio_grid()
    degree = int(section.get("degree", 5))
    avals = []
    for ratio in ratios:
        result = exponent_for_ratio(float(ratio), cfg.pulse,
                                    schedule=cfg.schedule,
                                    parallel=args.parallel)
        avals.append(float(result.parameters[0]))
        print(f"g/omega0 = {ratio:.5g}: a = {avals[-1]:.5g}")
    fit = fit_log_polynomial(list(zip(ratios, avals)), degree=degree)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    out = cfg.out_dir / "fit_poly.json"
    io.write_fit_json(out, fit, [f"b{k}" for k in range(degree + 1)],
                      extra={"a_values": avals, "T": cfg.pulse.T})
    coeffs = ", ".join(f"b{k} = {c:.5g}" for k, c in enumerate(fit.parameters))
    print(coeffs)
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_bound(args) -> int:
    cfg = _load(args)
    threshold = adiabaticity_threshold(cfg.pulse.omega0, cfg.system.g)
    margin = cfg.pulse.T / threshold
    bound = fwhm_bound(cfg.pulse, cfg.system.g)
    print(f"adiabaticity threshold = {threshold:.5g} s")
    print(f"margin T/threshold     = {margin:.5g}")
    print(f"T*g product            = {cfg.pulse.T * cfg.system.g:.5g}")
    print(f"photon width bound     = {bound:.5g} s  ({bound / cfg.pulse.T:.5g} T)")
    print(f"pump pulse FWHM        = {cfg.pulse.fwhm:.5g} s")
    return EXIT_OK


_COMMANDS = {
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "fit-a": _cmd_fit_a,
    "fit-poly": _cmd_fit_poly,
    "bound": _cmd_bound,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SimulationError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
