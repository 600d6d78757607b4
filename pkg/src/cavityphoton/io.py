"""Flat-file serialization of trajectories, reports, sweep tables and fits.

CSV files carry a fixed, documented header row; JSON summaries hold every
derived observable plus the resolved configuration.  All numbers are written
at full round-trip precision (repr); human-readable rounding happens only in
console output, never in files.
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .analysis import EmissionReport, emission_rate
from .engine import BASIS_LABELS, COHERENCE_INDEX, Trajectory
from .fitting import FitResult
from .sweep import SweepPoint

_COHERENCE_PAIRS = sorted(COHERENCE_INDEX)

TRAJECTORY_COLUMNS = (
    ["t", "pop_u0", "pop_e0", "pop_g1", "pop_g0"]
    + [f"{part}_{BASIS_LABELS[i]}_{BASIS_LABELS[j]}"
       for (i, j) in _COHERENCE_PAIRS for part in ("re", "im")]
    + ["P_t"]
)

SWEEP_COLUMNS = (
    "value", "eta", "delta_t", "t_max", "t_minus", "t_plus", "peak_p",
    "final_pop_u0", "final_pop_e0", "final_pop_g1", "final_pop_g0",
    "adiabaticity_margin", "adiabatic", "error",
)


def write_trajectory_csv(path, traj: Trajectory) -> None:
    """Time series with populations, coherences and the emission rate."""
    columns = [traj.times, traj.p_u0, traj.p_e0, traj.p_g1, traj.p_g0]
    for (i, j) in _COHERENCE_PAIRS:
        c = traj.coherence(i, j)
        columns.extend((c.real, c.imag))
    columns.append(emission_rate(traj))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRAJECTORY_COLUMNS)
        for row in zip(*columns):
            writer.writerow(repr(float(x)) for x in row)


def summary_dict(report: EmissionReport, margin: float, echo: dict) -> dict:
    return {
        "eta": report.eta,
        "delta_t": report.delta_t,
        "t_max": report.t_max,
        "t_minus": report.t_minus,
        "t_plus": report.t_plus,
        "peak_p": report.peak_p,
        "final_populations": [float(x) for x in report.final_populations],
        "residual_p_end": report.residual_p_end,
        "adiabaticity_margin": margin,
        "config": echo,
    }


def write_summary_json(path, report: EmissionReport, margin: float,
                       echo: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary_dict(report, margin, echo), fh, indent=2)
        fh.write("\n")


def read_summary_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _sweep_row(point: SweepPoint) -> list:
    r = point.report
    if r is None:
        obs = [""] * 10
    else:
        obs = [repr(float(x)) for x in
               (r.eta, r.delta_t, r.t_max, r.t_minus, r.t_plus, r.peak_p,
                *r.final_populations)]
    return ([repr(point.value)] + obs
            + [repr(point.margin), str(point.adiabatic), point.error or ""])


def write_sweep_csv(path, points: list[SweepPoint]) -> None:
    """One row per grid point; failed points keep their error message."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_COLUMNS)
        for point in points:
            writer.writerow(_sweep_row(point))


def write_sweep_json(path, points: list[SweepPoint]) -> None:
    rows = []
    for point in points:
        row = dict(zip(SWEEP_COLUMNS, _sweep_row(point)))
        for key, val in row.items():
            if key == "error":
                row[key] = val or None
            elif key == "adiabatic":
                row[key] = val == "True"
            else:
                row[key] = float(val) if val else None
        rows.append(row)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(rows, fh, indent=2)
        fh.write("\n")


def fit_dict(result: FitResult, parameter_names: list[str],
             extra: dict | None = None) -> dict:
    payload = {
        "parameters": dict(zip(parameter_names, map(float, result.parameters))),
        "residual_max": result.residual_max,
        "residual_rms": result.residual_rms,
        "grid": [float(x) for x in result.grid],
    }
    if extra:
        payload.update(extra)
    return payload


def write_fit_json(path, result: FitResult, parameter_names: list[str],
                   extra: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(fit_dict(result, parameter_names, extra), fh, indent=2)
        fh.write("\n")


def read_trajectory_csv(path) -> dict[str, np.ndarray]:
    """Columns of a trajectory CSV keyed by header name."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(x) for x in row] for row in reader]
    data = np.array(rows)
    return {name: data[:, k] for k, name in enumerate(header)}
