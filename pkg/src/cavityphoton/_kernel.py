"""Compiled fixed-step integrator for the 15-variable master-equation system.

The right-hand side below is the hand-unrolled form of the sparse generator
assembled by :func:`cavityphoton.engine.build_generator`; the two are kept in
lock step by an equivalence test in the suite.  Straight-line code here is
what makes million-step runs cheap enough for parameter sweeps.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _rhs(t, v, out, omega0, T, g, delta, gamma):
    om = omega0 * np.exp(-((t / T) ** 2))
    ho = 0.5 * om
    hg = 0.5 * gamma
    out[0] = -om * v[2]
    out[1] = -delta * v[2] - g * v[4]
    out[2] = ho * (v[0] - v[7]) + delta * v[1] + g * v[3]
    out[3] = -g * v[2] - hg * v[3] + ho * v[9]
    out[4] = g * v[1] - hg * v[4] - ho * v[8]
    out[5] = ho * v[11]
    out[6] = -ho * v[10]
    out[7] = om * v[2] - 2.0 * g * v[9]
    out[8] = ho * v[4] - hg * v[8] + delta * v[9]
    out[9] = -ho * v[3] + g * (v[7] - v[12]) - delta * v[8] - hg * v[9]
    out[10] = ho * v[6] + delta * v[11] + g * v[14]
    out[11] = -ho * v[5] - delta * v[10] - g * v[13]
    out[12] = 2.0 * g * v[9] - gamma * v[12]
    out[13] = g * v[11] - hg * v[13]
    out[14] = -g * v[10] - hg * v[14]


@njit(cache=True)
def integrate(v0, t_start, dt, n_steps, stride, omega0, T, g, delta, gamma, pop_tol):
    """Classical fourth-order Runge-Kutta over n_steps fixed steps.

    Records the state every `stride` steps (plus the initial and final
    states) and checks at each recorded sample that the four populations lie
    in [-pop_tol, 1 + pop_tol].

    Returns (times, states, n_recorded, status, t_fail); status 0 means
    success, 1 means a population left the tolerance band at time t_fail.
    """
    n_rec = n_steps // stride + 1
    if n_steps % stride != 0:
        n_rec += 1
    times = np.empty(n_rec)
    states = np.empty((n_rec, 15))
    v = v0.copy()
    # compensation carries for the state update: millions of steps would
    # otherwise random-walk the population sum out of its 1e-12 band
    comp = np.zeros(15)
    k1 = np.empty(15)
    k2 = np.empty(15)
    k3 = np.empty(15)
    k4 = np.empty(15)
    tmp = np.empty(15)
    times[0] = t_start
    states[0] = v
    idx = 1
    half = 0.5 * dt
    sixth = dt / 6.0
    status = 0
    t_fail = 0.0
    for k in range(n_steps):
        t = t_start + k * dt
        tm = t + half
        te = t + dt
        _rhs(t, v, k1, omega0, T, g, delta, gamma)
        for i in range(15):
            tmp[i] = v[i] + half * k1[i]
        _rhs(tm, tmp, k2, omega0, T, g, delta, gamma)
        for i in range(15):
            tmp[i] = v[i] + half * k2[i]
        _rhs(tm, tmp, k3, omega0, T, g, delta, gamma)
        for i in range(15):
            tmp[i] = v[i] + dt * k3[i]
        _rhs(te, tmp, k4, omega0, T, g, delta, gamma)
        for i in range(15):
            y = sixth * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]) - comp[i]
            s = v[i] + y
            comp[i] = (s - v[i]) - y
            v[i] = s
        if (k + 1) % stride == 0 or k + 1 == n_steps:
            times[idx] = t_start + (k + 1) * dt
            states[idx] = v
            p3 = 1.0 - v[0] - v[7] - v[12]
            lo = -pop_tol
            hi = 1.0 + pop_tol
            if (not lo <= v[0] <= hi or not lo <= v[7] <= hi
                    or not lo <= v[12] <= hi or not lo <= p3 <= hi):
                status = 1
                t_fail = times[idx]
                idx += 1
                break
            idx += 1
    return times, states, idx, status, t_fail
