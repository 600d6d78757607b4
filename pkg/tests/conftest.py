import numpy as np
import pytest

from cavityphoton import PulseParams, Schedule, SystemParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_hermitian_unit_trace(rng) -> np.ndarray:
    """Hermitian 4x4 with unit trace; not necessarily positive."""
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = 0.5 * (m + m.conj().T)
    h += (1.0 - h.trace().real) / 4.0 * np.eye(4)
    return h


def random_density(rng) -> np.ndarray:
    """Positive-semidefinite Hermitian 4x4 with unit trace."""
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = m @ m.conj().T
    return rho / rho.trace().real


def random_params(rng) -> tuple[float, PulseParams, SystemParams]:
    """Random run configuration spanning the physically used scales."""
    omega0 = 10.0 ** rng.uniform(5, 8)
    T = 10.0 ** rng.uniform(-6, -4)
    g = omega0 * 10.0 ** rng.uniform(-2, 0.5)
    delta = rng.uniform(-1.0, 1.0) * omega0
    gamma = 10.0 ** rng.uniform(2, 6)
    t = rng.uniform(-2.0, 2.0) * T
    return t, PulseParams(omega0=omega0, T=T), SystemParams(
        g=g, delta=delta, gamma=gamma)


def coarse_schedule(pulse: PulseParams, stride: int = 20) -> Schedule:
    """Fast schedule for unit tests: 10x the production step size."""
    return Schedule.for_pulse(pulse, dt=pulse.T * 2.0e-5, record_stride=stride)
