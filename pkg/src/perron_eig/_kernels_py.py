"""Pure numpy implementations of the hot kernels.

This module is the fallback used when the compiled ``_kernels`` extension is
not available. Both modules expose the same functions with the same
semantics; arrays passed in are already validated float64 and C-contiguous.
"""
import math

import numpy as np

from .errors import DivergenceError, NumericOverflowError, SingularIterationError

OVERFLOW_GUARD = 1e280
TINY_NORM = 1e-300


def frobenius_inner(a, b):
    return float(np.sum(a * b))


def frobenius_norm(a):
    return math.sqrt(frobenius_inner(a, a))


def _check_term(term, acc, k):
    if not (np.abs(term).max() <= OVERFLOW_GUARD and np.abs(acc).max() <= OVERFLOW_GUARD):
        raise NumericOverflowError(
            f"Taylor term {k} exceeded {OVERFLOW_GUARD:g}; use a smaller gamma", term=k
        )


def taylor_apply(a, x, n, gamma):
    term = x.copy()
    acc = x.copy()
    for k in range(n):
        term = (gamma / (k + 1)) * (a @ term)
        acc += term
        _check_term(term, acc, k + 1)
    return acc


def shifted_power_apply(a, shift, k, x):
    y = x.copy()
    for _ in range(k):
        y = a @ y - shift * y
    return y


def normalized_iteration(a, m0, n, gamma, steps):
    """Apply ``steps`` normalized truncated-exponential steps to ``m0``.

    Returns the final iterate and the Rayleigh values ``<a M(k), M(k)>`` for
    ``k = 0..steps``.
    """
    m = m0.copy()
    trace = np.empty(steps + 1)
    trace[0] = frobenius_inner(a @ m, m)
    for k in range(steps):
        t = taylor_apply(a, m, n, gamma)
        nrm = frobenius_norm(t)
        if not nrm >= TINY_NORM:
            raise SingularIterationError(
                f"step {k + 1}: |T_n M| = {nrm:g}; the truncated exponential is "
                "numerically singular, increase n"
            )
        m = t / nrm
        trace[k + 1] = frobenius_inner(a @ m, m)
    return m, trace


def phi_prime(a, tau, x, nu):
    """Derivative of ``||(a - tau I)^nu x||^2`` with respect to ``tau``."""
    lower = shifted_power_apply(a, tau, nu - 1, x)
    upper = a @ lower - tau * lower
    return -2.0 * nu * float(np.dot(lower, upper))


def flow_rk4(a, x, nu, s0, coeff, dt, nsteps, sample_every, lo, hi):
    """Classical RK4 for ``dtau/dt = -coeff * phi'(tau)``.

    Returns ``(times, taus)`` sampled every ``sample_every`` steps plus the
    final step.
    """
    def rhs(tau):
        return -coeff * phi_prime(a, tau, x, nu)

    times = [0.0]
    taus = [s0]
    tau = s0
    for i in range(1, nsteps + 1):
        k1 = rhs(tau)
        k2 = rhs(tau + 0.5 * dt * k1)
        k3 = rhs(tau + 0.5 * dt * k2)
        k4 = rhs(tau + dt * k3)
        tau = tau + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not lo <= tau <= hi:
            raise DivergenceError(
                f"tau = {tau!r} left [{lo:g}, {hi:g}] at t = {i * dt:g}; "
                "the flow oscillates, use a smaller gamma"
            )
        if i % sample_every == 0 or i == nsteps:
            times.append(i * dt)
            taus.append(tau)
    return np.array(times), np.array(taus)
