"""Master-equation integration on the four-state subspace.

With at most one photon ever present, the dynamics closes on the four states

    index 0: |u,0>   drive ground state, empty cavity
    index 1: |e,0>   upper level, empty cavity
    index 2: |g,1>   cavity ground state, one photon
    index 3: |g,0>   cavity ground state, photon emitted

The density matrix evolves under rho' = -i[H(t), rho] + gamma D[a] rho where
a annihilates the cavity photon (a|g,1> = |g,0>) and H(t) carries the Gaussian
drive.  Because rho is Hermitian with unit trace, it is equivalent to fifteen
real coordinates; the evolution is then a linear system V' = L(t) V whose
generator is assembled in :func:`build_generator`.  Integration uses classical
fixed-step fourth-order Runge-Kutta; :func:`lindblad_rhs_direct` provides an
independent complex-matrix form of the same right-hand side used to
cross-validate every generator element.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernel
from .model import PulseParams, SystemParams, pulse_amplitude

BASIS_LABELS = ("u0", "e0", "g1", "g0")

# position of each independent real coordinate: diagonal entries for (0,0),
# (1,1), (2,2), then (re, im) pairs for the upper-triangle coherences; the
# (3,3) entry is closed by the unit trace
DIAG_INDEX = {0: 0, 1: 7, 2: 12}
COHERENCE_INDEX = {(0, 1): (1, 2), (0, 2): (3, 4), (0, 3): (5, 6),
                   (1, 2): (8, 9), (1, 3): (10, 11), (2, 3): (13, 14)}

# tolerance band for the mid-run population check
POPULATION_TOL = 1e-6


class SimulationError(RuntimeError):
    """A run violated a physical invariant (population outside tolerance)."""


def hamiltonian(omega_t: float, params: SystemParams) -> np.ndarray:
    """4x4 Hamiltonian on (|u,0>, |e,0>, |g,1>, |g,0>) at drive amplitude omega_t.

    |g,0> is uncoupled; it only receives population through the decay channel.
    """
    ho = 0.5 * omega_t
    return np.array([
        [0.0, ho, 0.0, 0.0],
        [ho, params.delta, params.g, 0.0],
        [0.0, params.g, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
    ])


def hamiltonian_block(n: int, omega_t: float, params: SystemParams) -> np.ndarray:
    """3x3 coupled block on (|u,n>, |e,n>, |g,n+1>) at photon index n."""
    if n < 0:
        raise ValueError(f"photon index n must be >= 0, got {n}")
    ho = 0.5 * omega_t
    gn = params.g * np.sqrt(n + 1.0)
    return np.array([
        [0.0, ho, 0.0],
        [ho, params.delta, gn],
        [0.0, gn, 0.0],
    ])


def collapse_operator() -> np.ndarray:
    """Photon annihilation restricted to the subspace: a|g,1> = |g,0>."""
    a = np.zeros((4, 4))
    a[3, 2] = 1.0
    return a


def pure_density(index: int) -> np.ndarray:
    """Density matrix of the pure basis state with the given index."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[index, index] = 1.0
    return rho


def _components(mat: np.ndarray) -> np.ndarray:
    """The 15 real coordinates of a 4x4 matrix (no validation)."""
    v = np.empty(15)
    for i, k in DIAG_INDEX.items():
        v[k] = mat[i, i].real
    for (i, j), (kr, ki) in COHERENCE_INDEX.items():
        v[kr] = mat[i, j].real
        v[ki] = mat[i, j].imag
    return v


def density_to_vector(rho: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Map a Hermitian unit-trace 4x4 density matrix to its 15 real coordinates.

    Rejects input whose Hermiticity defect or trace error exceeds `tol`.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise ValueError("density matrix is not Hermitian")
    trace = rho.trace().real
    if abs(trace - 1.0) > tol:
        raise ValueError(f"density matrix trace is {trace}, expected 1")
    return _components(rho)


def vector_to_density(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`density_to_vector`; the (3,3) entry closes the trace."""
    v = np.asarray(v, dtype=float)
    if v.shape != (15,):
        raise ValueError(f"expected 15 coordinates, got shape {v.shape}")
    rho = np.zeros((4, 4), dtype=complex)
    for i, k in DIAG_INDEX.items():
        rho[i, i] = v[k]
    rho[3, 3] = 1.0 - v[0] - v[7] - v[12]
    for (i, j), (kr, ki) in COHERENCE_INDEX.items():
        rho[i, j] = v[kr] + 1j * v[ki]
        rho[j, i] = v[kr] - 1j * v[ki]
    return rho


def _assemble_generator(omega_t: float, params: SystemParams) -> np.ndarray:
    """15x15 generator L with V' = L V at a fixed drive amplitude."""
    g = params.g
    delta = params.delta
    gamma = params.gamma
    ho = 0.5 * omega_t
    hg = 0.5 * gamma
    L = np.zeros((15, 15))
    # d C00
    L[0, 2] = -omega_t
    # d C01 (re, im)
    L[1, 2] = -delta
    L[1, 4] = -g
    L[2, 0] = ho
    L[2, 1] = delta
    L[2, 3] = g
    L[2, 7] = -ho
    # d C02
    L[3, 2] = -g
    L[3, 3] = -hg
    L[3, 9] = ho
    L[4, 1] = g
    L[4, 4] = -hg
    L[4, 8] = -ho
    # d C03
    L[5, 11] = ho
    L[6, 10] = -ho
    # d C11
    L[7, 2] = omega_t
    L[7, 9] = -2.0 * g
    # d C12
    L[8, 4] = ho
    L[8, 8] = -hg
    L[8, 9] = delta
    L[9, 3] = -ho
    L[9, 7] = g
    L[9, 8] = -delta
    L[9, 9] = -hg
    L[9, 12] = -g
    # d C13
    L[10, 6] = ho
    L[10, 11] = delta
    L[10, 14] = g
    L[11, 5] = -ho
    L[11, 10] = -delta
    L[11, 13] = -g
    # d C22
    L[12, 9] = 2.0 * g
    L[12, 12] = -gamma
    # d C23
    L[13, 11] = g
    L[13, 13] = -hg
    L[14, 10] = -g
    L[14, 14] = -hg
    return L


def build_generator(t: float, pulse: PulseParams, params: SystemParams) -> np.ndarray:
    """Generator L(t) of the 15-variable linear system at time t."""
    return _assemble_generator(float(pulse_amplitude(t, pulse)), params)


def lindblad_rhs_direct(rho: np.ndarray, t: float, pulse: PulseParams,
                        params: SystemParams) -> np.ndarray:
    """Right-hand side -i[H(t), rho] + gamma (a rho a+ - {a+ a, rho}/2).

    Complex-matrix form, independent of the real-coordinate generator; used
    as the oracle that validates every element of :func:`build_generator`.
    """
    rho = np.asarray(rho, dtype=complex)
    h = hamiltonian(float(pulse_amplitude(t, pulse)), params)
    drho = -1j * (h @ rho - rho @ h)
    a = collapse_operator()
    n_op = a.T @ a
    drho += params.gamma * (a @ rho @ a.T - 0.5 * (n_op @ rho + rho @ n_op))
    return drho


def rk4_step(v: np.ndarray, t: float, dt: float, pulse: PulseParams,
             params: SystemParams) -> np.ndarray:
    """One classical fourth-order step of V' = L(t) V.

    Slopes are taken at t, t + dt/2 (twice) and t + dt from the current
    state, with the update V + dt/6 (k1 + 2 k2 + 2 k3 + k4).
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    v = np.asarray(v, dtype=float)
    l_start = build_generator(t, pulse, params)
    l_mid = build_generator(t + 0.5 * dt, pulse, params)
    l_end = build_generator(t + dt, pulse, params)
    k1 = l_start @ v
    k2 = l_mid @ (v + 0.5 * dt * k1)
    k3 = l_mid @ (v + 0.5 * dt * k2)
    k4 = l_end @ (v + dt * k3)
    return v + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass(frozen=True)
class Schedule:
    """Integration window and step size.

    Defaults follow the pulse: the window [-5T, 5T] covers the drive and the
    decay tail, and dt = 2e-6 * T keeps the step three orders of magnitude
    below the fastest dynamical time scale.
    """

    t_start: float
    t_end: float
    dt: float
    record_stride: int = 100

    def __post_init__(self):
        if not self.t_start < self.t_end:
            raise ValueError("t_start must be earlier than t_end")
        if not self.dt > 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if (self.t_end - self.t_start) / self.dt < 2.0:
            raise ValueError("window must span at least two steps")
        if self.record_stride < 1:
            raise ValueError(f"record_stride must be >= 1, got {self.record_stride}")

    @classmethod
    def for_pulse(cls, pulse: PulseParams, t_start: float | None = None,
                  t_end: float | None = None, dt: float | None = None,
                  record_stride: int = 100) -> "Schedule":
        return cls(
            t_start=-5.0 * pulse.T if t_start is None else t_start,
            t_end=5.0 * pulse.T if t_end is None else t_end,
            dt=pulse.T * 2.0e-6 if dt is None else dt,
            record_stride=record_stride,
        )

    @property
    def n_steps(self) -> int:
        return int(round((self.t_end - self.t_start) / self.dt))


@dataclass(frozen=True)
class Trajectory:
    """Recorded time evolution of one run.

    `states` holds the 15 real coordinates per sample; populations and
    coherences are exposed as views.  Arrays are read-only: a trajectory is
    immutable once returned.
    """

    times: np.ndarray
    states: np.ndarray
    pulse: PulseParams
    params: SystemParams
    schedule: Schedule

    def __post_init__(self):
        if self.times.ndim != 1 or self.states.shape != (self.times.size, 15):
            raise ValueError("times and states have inconsistent shapes")
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("timestamps must be strictly increasing")
        self.times.setflags(write=False)
        self.states.setflags(write=False)

    @property
    def p_u0(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def p_e0(self) -> np.ndarray:
        return self.states[:, 7]

    @property
    def p_g1(self) -> np.ndarray:
        return self.states[:, 12]

    @property
    def p_g0(self) -> np.ndarray:
        return 1.0 - self.states[:, 0] - self.states[:, 7] - self.states[:, 12]

    def coherence(self, i: int, j: int) -> np.ndarray:
        """Complex coherence <i|rho|j> over time for i < j."""
        kr, ki = COHERENCE_INDEX[(i, j)]
        return self.states[:, kr] + 1j * self.states[:, ki]

    def densities(self) -> np.ndarray:
        """Stack of 4x4 density matrices, one per recorded sample."""
        n = self.times.size
        rho = np.zeros((n, 4, 4), dtype=complex)
        for i, k in DIAG_INDEX.items():
            rho[:, i, i] = self.states[:, k]
        rho[:, 3, 3] = self.p_g0
        for (i, j), (kr, ki) in COHERENCE_INDEX.items():
            c = self.states[:, kr] + 1j * self.states[:, ki]
            rho[:, i, j] = c
            rho[:, j, i] = c.conj()
        return rho


def simulate(pulse: PulseParams, params: SystemParams,
             schedule: Schedule | None = None,
             initial: np.ndarray | None = None) -> Trajectory:
    """Integrate the master equation and record the trajectory.

    Parameters
    ----------
    pulse, params
        Physical configuration of the run.
    schedule
        Window, step and recording stride; defaults to
        ``Schedule.for_pulse(pulse)``.
    initial
        4x4 density matrix; defaults to the pure state |u,0><u,0|.

    Raises
    ------
    SimulationError
        If a population leaves [-1e-6, 1 + 1e-6] at any recorded sample.
    """
    if schedule is None:
        schedule = Schedule.for_pulse(pulse)
    if initial is None:
        v0 = np.zeros(15)
        v0[0] = 1.0
    else:
        v0 = density_to_vector(initial)
    times, states, n_rec, status, t_fail = _kernel.integrate(
        v0, schedule.t_start, schedule.dt, schedule.n_steps,
        schedule.record_stride, pulse.omega0, pulse.T,
        params.g, params.delta, params.gamma, POPULATION_TOL,
    )
    if status != 0:
        raise SimulationError(
            f"population left [{-POPULATION_TOL}, {1 + POPULATION_TOL}] "
            f"at t = {t_fail:.6e} s; the step size is likely too coarse"
        )
    return Trajectory(times=times[:n_rec], states=states[:n_rec],
                      pulse=pulse, params=params, schedule=schedule)
