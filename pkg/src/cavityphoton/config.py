"""Run configuration: file schema, unit conversion and defaults.

Configs are JSON documents.  Frequency-like quantities (omega0, g, delta)
must carry an explicit unit tag because drive amplitudes are convention-
sensitive: a bare "MHz" could mean an angular frequency in units of 1e6 rad/s
or a cyclic frequency needing a 2*pi.  Decay rates (gamma, gamma_t) are plain
rates in 1/s and take no tag.  Example document::

    {
      "pulse":  {"omega0": {"value": 2.42, "unit": "MHz-times-2pi"}, "T": 5.0e-5},
      "system": {"g_over_omega0": 0.25, "gamma": 2.5e4},
      "schedule": {"record_stride": 100},
      "output": {"dir": "out", "format": "csv"}
    }

Every field has a default; the defaults reproduce the reference run of the
validation suite (2.42 MHz drive, T = 50 us, g = omega0/4, resonant, no decay).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from pathlib import Path

from .engine import Schedule
from .model import PulseParams, SystemParams

FREQUENCY_UNITS = {
    "rad/s": 1.0,
    "MHz-angular": 1.0e6,
    "MHz-times-2pi": 2.0e6 * math.pi,
}

DEFAULT_OMEGA0 = 2.42 * FREQUENCY_UNITS["MHz-times-2pi"]
DEFAULT_T = 5.0e-5
DEFAULT_RATIO = 0.25
DEFAULT_DELTA = 0.0
DEFAULT_GAMMA = 0.0

OUT_DIR_ENV = "CAVITYPHOTON_OUT"

_TOP_KEYS = {"pulse", "system", "schedule", "output", "sweep", "fit_a", "fit_poly"}
_PULSE_KEYS = {"omega0", "T"}
_SYSTEM_KEYS = {"g", "g_over_omega0", "delta", "gamma", "gamma_t"}
_SCHEDULE_KEYS = {"t_start", "t_end", "dt", "record_stride"}
_OUTPUT_KEYS = {"dir", "format"}


class ConfigError(ValueError):
    """The configuration document is malformed or inconsistent."""


@dataclass(frozen=True)
class RunConfig:
    """Resolved configuration of one run plus the raw document it came from."""

    pulse: PulseParams
    system: SystemParams
    schedule: Schedule
    out_dir: Path
    out_format: str
    raw: dict


def _check_keys(section: dict, allowed: set, where: str) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)} in {where}")


def frequency_rad_per_s(entry, where: str) -> float:
    """Convert a tagged frequency entry {"value": x, "unit": u} to rad/s."""
    if not isinstance(entry, dict) or set(entry) != {"value", "unit"}:
        raise ConfigError(
            f"{where} must be an object with 'value' and 'unit' keys; "
            f"valid units: {sorted(FREQUENCY_UNITS)}"
        )
    unit = entry["unit"]
    if unit not in FREQUENCY_UNITS:
        raise ConfigError(f"unknown unit {unit!r} for {where}; "
                          f"valid units: {sorted(FREQUENCY_UNITS)}")
    return float(entry["value"]) * FREQUENCY_UNITS[unit]


def load_config(path) -> dict:
    """Read a JSON config document."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ConfigError("config document must be a JSON object")
    return raw


def parse_config(raw: dict, t_end: float | None = None,
                 record_stride: int | None = None,
                 out_dir: str | None = None,
                 out_format: str | None = None) -> RunConfig:
    """Resolve a raw config document; keyword arguments override the file.

    The output directory is resolved with precedence: explicit argument,
    then the environment variable, then the document, then "./out".
    """
    _check_keys(raw, _TOP_KEYS, "config")
    pulse_sec = raw.get("pulse", {})
    system_sec = raw.get("system", {})
    sched_sec = raw.get("schedule", {})
    out_sec = raw.get("output", {})
    _check_keys(pulse_sec, _PULSE_KEYS, "'pulse'")
    _check_keys(system_sec, _SYSTEM_KEYS, "'system'")
    _check_keys(sched_sec, _SCHEDULE_KEYS, "'schedule'")
    _check_keys(out_sec, _OUTPUT_KEYS, "'output'")

    if "omega0" in pulse_sec:
        omega0 = frequency_rad_per_s(pulse_sec["omega0"], "pulse.omega0")
    else:
        omega0 = DEFAULT_OMEGA0
    T = float(pulse_sec.get("T", DEFAULT_T))

    if "g" in system_sec and "g_over_omega0" in system_sec:
        raise ConfigError("give exactly one of system.g and system.g_over_omega0")
    if "g" in system_sec:
        g = frequency_rad_per_s(system_sec["g"], "system.g")
    else:
        g = float(system_sec.get("g_over_omega0", DEFAULT_RATIO)) * omega0
    if "delta" in system_sec:
        delta = frequency_rad_per_s(system_sec["delta"], "system.delta")
    else:
        delta = DEFAULT_DELTA
    gamma = float(system_sec.get("gamma", DEFAULT_GAMMA))
    gamma_t = system_sec.get("gamma_t")
    gamma_t = float(gamma_t) if gamma_t is not None else None

    try:
        pulse = PulseParams(omega0=omega0, T=T)
        system = SystemParams(g=g, delta=delta, gamma=gamma, gamma_t=gamma_t)
        schedule = Schedule.for_pulse(
            pulse,
            t_start=sched_sec.get("t_start"),
            t_end=t_end if t_end is not None else sched_sec.get("t_end"),
            dt=sched_sec.get("dt"),
            record_stride=(record_stride if record_stride is not None
                           else int(sched_sec.get("record_stride", 100))),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    resolved_dir = (out_dir or os.environ.get(OUT_DIR_ENV)
                    or out_sec.get("dir") or "out")
    fmt = out_format or out_sec.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"output format must be 'csv' or 'json', got {fmt!r}")
    return RunConfig(pulse=pulse, system=system, schedule=schedule,
                     out_dir=Path(resolved_dir), out_format=fmt, raw=raw)


def config_echo(cfg: RunConfig) -> dict:
    """Resolved internal values (all rad/s, 1/s, s) for reproducibility."""
    return {
        "omega0": cfg.pulse.omega0,
        "T": cfg.pulse.T,
        "g": cfg.system.g,
        "delta": cfg.system.delta,
        "gamma": cfg.system.gamma,
        "gamma_t": cfg.system.gamma_t,
        "t_start": cfg.schedule.t_start,
        "t_end": cfg.schedule.t_end,
        "dt": cfg.schedule.dt,
        "record_stride": cfg.schedule.record_stride,
    }
