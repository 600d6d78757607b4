"""Closed-form physics of a laser-driven Lambda-type atom in a lossy cavity.

The atom has two lower levels (u, g) and one upper level (e).  A classical
Gaussian pulse drives the u <-> e transition with amplitude Omega(t) while a
single quantized cavity mode couples e <-> g with Jaynes-Cummings strength g.
When the pulse rises slowly enough, the system follows the zero-eigenvalue
dressed state (the dark state), transferring population from |u,0> to |g,1>
without ever populating the radiating level |e,0>.

This module holds the analytic side of the package: the pulse shape, the
dressed-state structure of the driven Hamiltonian, the dark state, the
adiabaticity criterion for the pulse time scale, and the closed-form bound on
the width of the intracavity photon pulse.  The expressions here double as
independent oracles for the numerical engine.

All angular frequencies are stored in rad/s and hbar is set to one; unit
conversion happens at the configuration boundary (see :mod:`cavityphoton.config`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LN2 = math.log(2.0)

# Smallest ratio T / adiabaticity_threshold accepted as "slow enough" when a
# sweep or fit has to decide whether a grid point is trustworthy.
ADIABATIC_MARGIN_MIN = 10.0


@dataclass(frozen=True)
class PulseParams:
    """Gaussian trigger pulse Omega(t) = omega0 * exp(-(t/T)^2).

    Attributes
    ----------
    omega0 : float
        Peak Rabi amplitude of the classical drive [rad/s].
    T : float
        Characteristic time of the Gaussian envelope [s].
    """

    omega0: float
    T: float

    def __post_init__(self):
        if not self.omega0 > 0.0:
            raise ValueError(f"omega0 must be positive, got {self.omega0}")
        if not self.T > 0.0:
            raise ValueError(f"T must be positive, got {self.T}")

    @property
    def tau(self) -> float:
        """Half width at half maximum of the pulse, sqrt(ln 2) * T."""
        return math.sqrt(LN2) * self.T

    @property
    def fwhm(self) -> float:
        """Full width at half maximum, 2 * sqrt(ln 2) * T."""
        return 2.0 * math.sqrt(LN2) * self.T


@dataclass(frozen=True)
class SystemParams:
    """Atom-cavity parameters.

    Attributes
    ----------
    g : float
        Jaynes-Cummings coupling between |e> and |g> via the cavity mode [rad/s].
    delta : float
        Common detuning of drive and cavity from the upper level [rad/s].
    gamma : float
        Total cavity photon decay rate [1/s].
    gamma_t : float, optional
        Useful transmission rate through the output mirror [1/s];
        defaults to gamma (every lost photon counts as output).
    """

    g: float
    delta: float = 0.0
    gamma: float = 0.0
    gamma_t: float | None = None

    def __post_init__(self):
        if not self.g > 0.0:
            raise ValueError(f"g must be positive, got {self.g}")
        if self.gamma < 0.0:
            raise ValueError(f"gamma must be non-negative, got {self.gamma}")
        if self.gamma_t is None:
            object.__setattr__(self, "gamma_t", self.gamma)
        if not 0.0 <= self.gamma_t <= self.gamma:
            raise ValueError(
                f"gamma_t must lie in [0, gamma]={[0.0, self.gamma]}, got {self.gamma_t}"
            )


@dataclass(frozen=True)
class EigenSystem:
    """Dressed-state data of the driven Hamiltonian at one photon index n.

    ``omega_zero`` is identically zero (the dark-state eigenvalue); ``theta``
    and ``phi`` are the mixing angles parameterizing the eigenvectors, see
    :func:`dressed_states`.
    """

    n: int
    theta: float
    phi: float
    omega_zero: float
    omega_plus: float
    omega_minus: float


def pulse_amplitude(t, pulse: PulseParams):
    """Drive amplitude Omega(t) = omega0 * exp(-(t/T)^2).

    Accepts a scalar time or an array of times; even in t with its maximum
    omega0 at t = 0.
    """
    return pulse.omega0 * np.exp(-np.square(np.asarray(t) / pulse.T))


def mixing_angles(n: int, omega_t: float, params: SystemParams) -> tuple[float, float]:
    """Mixing angles (theta, phi) of the dressed states at photon index n.

    tan(theta) = Omega / (2 g sqrt(n+1)) and
    tan(phi) = sqrt(4 g^2 (n+1) + Omega^2)
             / (sqrt(4 g^2 (n+1) + Omega^2 + delta^2) - delta).

    Both angles are finite for g > 0; phi lies in (0, pi/2).
    """
    if n < 0:
        raise ValueError(f"photon index n must be >= 0, got {n}")
    two_g = 2.0 * params.g * math.sqrt(n + 1.0)
    theta = math.atan2(omega_t, two_g)
    x = two_g * two_g + omega_t * omega_t
    root = math.hypot(math.sqrt(x), params.delta)
    if params.delta > 0.0:
        # rationalized form; the plain denominator cancels for large delta
        phi = math.atan2(root + params.delta, math.sqrt(x))
    else:
        phi = math.atan2(math.sqrt(x), root - params.delta)
    return theta, phi


def eigenvalues(n: int, omega_t: float, params: SystemParams) -> tuple[float, float, float]:
    """Eigenvalues (omega_zero, omega_plus, omega_minus) at photon index n.

    omega_zero = 0 and omega_pm = (delta +- sqrt(Omega^2 + 4 g^2 (n+1) + delta^2)) / 2.
    """
    if n < 0:
        raise ValueError(f"photon index n must be >= 0, got {n}")
    x = 4.0 * params.g * params.g * (n + 1.0) + omega_t * omega_t
    root = math.hypot(math.sqrt(x), params.delta)
    # evaluate the larger-magnitude root directly, the other via the product
    # omega_plus * omega_minus = -x/4 to avoid cancellation at large |delta|
    if params.delta >= 0.0:
        omega_plus = 0.5 * (params.delta + root)
        omega_minus = -0.25 * x / omega_plus if omega_plus != 0.0 else 0.0
    else:
        omega_minus = 0.5 * (params.delta - root)
        omega_plus = -0.25 * x / omega_minus
    return 0.0, omega_plus, omega_minus


def eigensystem(n: int, omega_t: float, params: SystemParams) -> EigenSystem:
    """Bundle :func:`mixing_angles` and :func:`eigenvalues` at one (n, Omega)."""
    theta, phi = mixing_angles(n, omega_t, params)
    w0, wp, wm = eigenvalues(n, omega_t, params)
    return EigenSystem(n=n, theta=theta, phi=phi,
                       omega_zero=w0, omega_plus=wp, omega_minus=wm)


def dressed_states(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Eigenvectors (v_zero, v_plus, v_minus) over (|u,n>, |e,n>, |g,n+1>).

    Sign convention fixed so that H v = omega v with the Hamiltonian of
    :func:`cavityphoton.engine.hamiltonian_block` for every delta, not just
    on resonance.
    """
    st, ct = math.sin(theta), math.cos(theta)
    sp, cp = math.sin(phi), math.cos(phi)
    v_zero = np.array([ct, 0.0, -st])
    v_plus = np.array([cp * st, sp, cp * ct])
    v_minus = np.array([sp * st, -cp, sp * ct])
    return v_zero, v_plus, v_minus


def dark_state(omega_t: float, g: float) -> np.ndarray:
    """Zero-eigenvalue dressed state cos(theta)|u,0> - sin(theta)|g,1>.

    The middle component (|e,0>) is exactly zero, which is what suppresses
    spontaneous emission during the transfer.
    """
    if g <= 0.0:
        raise ValueError(f"g must be positive, got {g}")
    theta = math.atan2(omega_t, 2.0 * g)
    return np.array([math.cos(theta), 0.0, -math.sin(theta)])


def adiabatic_population(t, pulse: PulseParams, g: float):
    """Adiabatic estimate of the |g,1> population, x^2/(1+x^2) with x = Omega(t)/(2g).

    Valid when the pulse satisfies the adiabaticity criterion and gamma = 0.
    """
    if g <= 0.0:
        raise ValueError(f"g must be positive, got {g}")
    x = pulse_amplitude(t, pulse) / (2.0 * g)
    x2 = np.square(x)
    return x2 / (1.0 + x2)


def adiabaticity_threshold(omega0: float, g: float) -> float:
    """Lower time scale 4 sqrt(ln 2) g omega0 / (4 g^2 + omega0^2/4)^(3/2) [s].

    The pulse time T must be much larger than this value for the system to
    track the dark state.  Compare via :func:`adiabaticity_margin`.
    """
    if g <= 0.0:
        raise ValueError(f"g must be positive, got {g}")
    if omega0 <= 0.0:
        raise ValueError(f"omega0 must be positive, got {omega0}")
    denom = (4.0 * g * g + 0.25 * omega0 * omega0) ** 1.5
    return 4.0 * math.sqrt(LN2) * g * omega0 / denom


def adiabaticity_margin(pulse: PulseParams, g: float) -> float:
    """Dimensionless ratio T / adiabaticity_threshold; "slow enough" means >> 1."""
    return pulse.T / adiabaticity_threshold(pulse.omega0, g)


def fwhm_bound(pulse: PulseParams, g: float) -> float:
    """Closed-form width of the photon pulse, sqrt(2 ln(2 + (omega0/g)^2/4)) * T [s].

    Derived from the adiabatic population at zero decay; for gamma > 0 the
    simulated width falls below this value.  Strictly decreasing in g/omega0
    and linear in T; the limit g/omega0 -> inf gives sqrt(2 ln 2) * T.
    """
    if g <= 0.0:
        raise ValueError(f"g must be positive, got {g}")
    ratio2 = (pulse.omega0 / g) ** 2
    return math.sqrt(2.0 * math.log(2.0 + 0.25 * ratio2)) * pulse.T
