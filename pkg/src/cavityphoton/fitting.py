"""Empirical fits for sweep results.

Two fits are provided: a one-parameter exponential law eta = 1 - exp(-a T gamma)
for the efficiency as a function of the decay rate, and an ordinary
least-squares polynomial for ln(a) against ln(g/omega0).  The exponential fit
minimizes the sum of squared residuals with a golden-section search; because
the objective is flat wherever the model saturates at eta = 1, the bracket is
first narrowed by a coarse logarithmic scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class FitResult:
    """Fitted parameters with residual diagnostics and the grid they came from."""

    parameters: np.ndarray
    residual_max: float
    residual_rms: float
    grid: np.ndarray

    def __post_init__(self):
        self.parameters.setflags(write=False)
        self.grid.setflags(write=False)


def golden_section(f, lo: float, hi: float, rel_tol: float = 1e-8) -> float:
    """Minimum of a unimodal scalar function on [lo, hi].

    Ties favor the left subinterval so that flat plateaus collapse toward
    smaller arguments instead of drifting to the boundary.
    """
    if not lo < hi:
        raise ValueError(f"invalid bracket [{lo}, {hi}]")
    a, b = lo, hi
    while (b - a) > rel_tol * 0.5 * (abs(a) + abs(b)):
        c = b - INV_PHI * (b - a)
        d = a + INV_PHI * (b - a)
        if f(c) <= f(d):
            b = d
        else:
            a = c
    return 0.5 * (a + b)


def _as_points(points) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("points must be a sequence of (x, y) pairs")
    return arr[:, 0], arr[:, 1]


def fit_efficiency_exponent(points, T: float,
                            bracket: tuple[float, float] = (1e-3, 1e3),
                            rel_tol: float = 1e-8) -> FitResult:
    """Least-squares exponent a of eta(gamma) = 1 - exp(-a T gamma).

    `points` is a sequence of (gamma, eta) pairs; at least three are required
    and the gamma values must be distinct, non-negative and not all zero.
    The single parameter is found by golden-section search on the sum of
    squared residuals after a logarithmic scan locates the basin.
    """
    gammas, etas = _as_points(points)
    if gammas.size < 3:
        raise ValueError(f"need at least 3 points, got {gammas.size}")
    if np.any(gammas < 0.0):
        raise ValueError("gamma values must be non-negative")
    if np.all(gammas == 0.0):
        raise ValueError("the exponent is unidentifiable when all gamma = 0")
    if np.unique(gammas).size != gammas.size:
        raise ValueError("gamma values must be distinct")
    if T <= 0.0:
        raise ValueError(f"T must be positive, got {T}")

    def sse(a: float) -> float:
        return float(np.sum((etas - (1.0 - np.exp(-a * T * gammas))) ** 2))

    scan = np.geomspace(bracket[0], bracket[1], 128)
    i = int(np.argmin([sse(x) for x in scan]))
    lo = scan[max(i - 1, 0)]
    hi = scan[min(i + 1, scan.size - 1)]
    a = golden_section(sse, lo, hi, rel_tol)
    residuals = np.abs(etas - (1.0 - np.exp(-a * T * gammas)))
    return FitResult(
        parameters=np.array([a]),
        residual_max=float(residuals.max()),
        residual_rms=float(np.sqrt(np.mean(residuals ** 2))),
        grid=gammas.copy(),
    )


def exponent_loglinear(points, T: float) -> float:
    """Cross-check estimator: slope of -ln(1 - eta) against T gamma.

    Uses only points with gamma > 0 and eta < 1; a zero-intercept regression
    since the model passes through the origin exactly.
    """
    gammas, etas = _as_points(points)
    mask = (gammas > 0.0) & (etas < 1.0)
    if not np.any(mask):
        raise ValueError("no usable points with gamma > 0 and eta < 1")
    x = T * gammas[mask]
    y = -np.log1p(-etas[mask])
    return float(np.dot(x, y) / np.dot(x, x))


def fit_log_polynomial(points, degree: int = 5) -> FitResult:
    """Ordinary least-squares polynomial ln(a) = sum_k b_k [ln(ratio)]^k.

    `points` is a sequence of (ratio, a) pairs with ratio > 0 and a > 0; more
    points than degree + 1 are required and the design must have full rank.
    Residual diagnostics are reported in ln(a) space.
    """
    ratios, avals = _as_points(points)
    if degree < 0:
        raise ValueError(f"degree must be >= 0, got {degree}")
    if np.any(ratios <= 0.0) or np.any(avals <= 0.0):
        raise ValueError("ratios and exponents must be positive")
    if ratios.size <= degree + 1:
        raise ValueError(
            f"need more than {degree + 1} points for degree {degree}, got {ratios.size}"
        )
    x = np.log(ratios)
    y = np.log(avals)
    if np.unique(x).size < degree + 1:
        raise ValueError("design is rank deficient: too few distinct ratios")
    coeffs = np.polynomial.polynomial.polyfit(x, y, degree)
    residuals = np.abs(y - np.polynomial.polynomial.polyval(x, coeffs))
    return FitResult(
        parameters=coeffs,
        residual_max=float(residuals.max()),
        residual_rms=float(np.sqrt(np.mean(residuals ** 2))),
        grid=ratios.copy(),
    )
