"""Gradient-flow refinement of a rough principal eigenvalue.

With ``x`` the dominant column of a shallow iterate and ``nu`` the cyclic
order, ``phi(tau) = ||(A - tau I)^nu x||^2`` has a local minimum close to
the principal eigenvalue. Starting from the rough estimate ``s0`` the scalar
ODE ``dtau/dt = -(gamma n)^(2(nu-1)) phi'(tau)`` is integrated with fixed-step
RK4; the factor compensates for ``phi''`` being ``O(n^(-2(nu-1)))`` there.
"""
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .cyclic import (
    DEFAULT_EPSILON,
    DEFAULT_N_GRID,
    detect_cyclic_order,
    select_dominant_column,
)
from .dense import as_square, frobenius_norm, shifted_power_apply
from .errors import CyclicOrderUnresolvedError, DimensionError
from .iteration import run_iteration

DEFAULT_GAMMA = 0.2
DEFAULT_DT = 0.01
DEFAULT_T_END = 100.0
CONVERGED_RATE = 1e-14


@dataclass
class RefinementResult:
    s0: float
    nu: int
    n: int
    gamma: float
    dt: float
    trajectory: tuple = field(repr=False)
    s_refined: float
    converged: bool
    j: int = None
    capital_n: int = None

    def to_dict(self):
        return {
            "s0": self.s0,
            "nu": self.nu,
            "n": self.n,
            "gamma": self.gamma,
            "dt": self.dt,
            "j": self.j,
            "capital_n": self.capital_n,
            "s_refined": self.s_refined,
            "converged": self.converged,
            "trajectory": [[t, tau] for t, tau in self.trajectory],
        }


def _vector(x, m):
    x = np.ascontiguousarray(x, dtype=np.float64).ravel()
    if x.shape[0] != m:
        raise DimensionError(f"x has length {x.shape[0]}, expected {m}")
    return x


def phi(a, tau, x, nu):
    """``||(a - tau I)^nu x||^2``."""
    y = shifted_power_apply(a, tau, nu, np.asarray(x, dtype=np.float64))
    return float(y @ y)


def phi_prime(a, tau, x, nu):
    """``-2 nu <(a - tau I)^(nu-1) x, (a - tau I)^nu x>``."""
    if nu < 1:
        raise ValueError("nu must be at least 1")
    a = as_square(a, "a")
    return float(_backend.impl.phi_prime(a, float(tau), _vector(x, a.shape[0]), int(nu)))


def phi_second(a, tau, x, nu):
    lower2 = shifted_power_apply(a, tau, max(nu - 2, 0), np.asarray(x, dtype=np.float64))
    if nu >= 2:
        lower1 = shifted_power_apply(a, tau, 1, lower2)
        top = shifted_power_apply(a, tau, 1, lower1)
        return 2.0 * nu * (nu - 1) * float(lower2 @ top) + 2.0 * nu**2 * float(lower1 @ lower1)
    return 2.0 * float(lower2 @ lower2)


def stability_ratio(a, x, nu, s0, gamma, n, dt):
    """``(gamma n)^(2(nu-1)) * dt * |phi''(s0)|``; above 2 the step oscillates."""
    coeff = (gamma * n) ** (2 * (nu - 1))
    return coeff * dt * abs(phi_second(a, s0, x, nu))


def gradient_flow(a, x, nu, s0, gamma=DEFAULT_GAMMA, n=20, t_end=DEFAULT_T_END, dt=DEFAULT_DT):
    """Integrate the refinement ODE from ``tau(0) = s0`` to ``t_end``.

    The trajectory is sampled every ``max(1, round(1/dt))`` steps and at the
    final step. Raises :class:`DivergenceError` if ``tau`` leaves
    ``[-||a||_F - 1, ||a||_F + 1]``.
    """
    a = as_square(a, "a")
    x = _vector(x, a.shape[0])
    if nu < 1:
        raise ValueError("nu must be at least 1")
    if not (gamma > 0 and n >= 1 and dt > 0 and t_end >= dt):
        raise ValueError("need gamma > 0, n >= 1, dt > 0 and t_end >= dt")
    coeff = float(gamma * n) ** (2 * (nu - 1))
    nsteps = int(round(t_end / dt))
    sample_every = max(1, int(round(1.0 / dt)))
    bound = frobenius_norm(a) + 1.0
    times, taus = _backend.impl.flow_rk4(
        a, x, int(nu), float(s0), coeff, float(dt), nsteps, sample_every, -bound, bound
    )
    final = float(taus[-1])
    rate = abs(coeff * phi_prime(a, final, x, nu))
    return RefinementResult(
        s0=float(s0),
        nu=int(nu),
        n=int(n),
        gamma=float(gamma),
        dt=float(dt),
        trajectory=tuple(zip(times.tolist(), taus.tolist())),
        s_refined=final,
        converged=bool(rate < CONVERGED_RATE),
    )


def combined_method(
    a,
    capital_n=100,
    n=20,
    gamma=DEFAULT_GAMMA,
    t_end=DEFAULT_T_END,
    dt=DEFAULT_DT,
    *,
    n_grid=DEFAULT_N_GRID,
    epsilon=DEFAULT_EPSILON,
    nu=None,
):
    """Rough estimate, cyclic order, then gradient-flow refinement.

    1. Depth ``capital_n`` iteration gives ``s0`` and the dominant column ``j``.
    2. The beta dichotomy gives ``nu`` (skipped when ``nu`` is supplied).
    3. Depth ``n`` iteration gives ``x = W_{n,j}`` and the flow refines ``s0``.

    Both iterations use the unscaled scheme (scale parameter 1); ``gamma``
    only enters the flow.
    """
    a = as_square(a, "a")
    if not n < capital_n:
        raise ValueError("the refinement depth n must be below capital_n")
    deep = run_iteration(a, None, capital_n, 1.0)
    s0 = deep.s_n
    j = select_dominant_column(deep.w_n)
    if nu is None:
        report = detect_cyclic_order(
            a, capital_n, [k for k in n_grid if k < capital_n], epsilon, deep=deep
        )
        if not report.determined:
            raise CyclicOrderUnresolvedError(
                f"no stable beta dichotomy at N = {capital_n}; retry with a larger N"
            )
        nu = report.detected_nu
    x = run_iteration(a, None, n, 1.0).w_n[:, j - 1]
    result = gradient_flow(a, x, nu, s0, gamma, n, t_end, dt)
    result.j = j
    result.capital_n = int(capital_n)
    return result
