"""Cyclic order of the principal generalized eigenspace.

The dominant column ``x = W_{n,j}`` of a shallow iterate is pushed through
powers of ``A - s I`` with ``s`` taken from a deep iterate. The ratios

    beta_k(n, s) = n^2 ||(A - s I)^k x||^2 / ||(A - s I)^(k-1) x||^2

stay of order one for ``k`` below the cyclic order ``nu`` and collapse at
``k = nu``. A threshold ``epsilon`` turns that into a test:
``beta_k >= 1 - epsilon`` for ``k < k0`` and ``beta_k0 < epsilon``.

Column numbers in this module are 1-based, matching the usual ``j``.
"""
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .dense import as_square, shifted_power_apply
from .errors import DegenerateInputError, DegenerateRatioError
from .iteration import run_iteration

TINY = 1e-300
DEFAULT_EPSILON = 0.1
DEFAULT_CAPITAL_N = 100
DEFAULT_N_GRID = tuple(range(4, 11))
CONFIRM_OFFSETS = (5, 10)


@dataclass
class CyclicOrderReport:
    capital_n: int
    s_approx: float
    j: int
    epsilon: float
    beta_grid: dict = field(repr=False)
    detected_nu: object
    stable: bool
    support: list = field(default_factory=list, repr=False)

    @property
    def determined(self):
        return self.detected_nu != "undetermined"

    def to_dict(self):
        return {
            "capital_n": self.capital_n,
            "s_approx": self.s_approx,
            "j": self.j,
            "epsilon": self.epsilon,
            "beta_grid": {
                str(n): {"beta_0": 1.0, **{f"beta_{k}": b for k, b in enumerate(row, 1)}}
                for n, row in self.beta_grid.items()
            },
            "detected_nu": self.detected_nu,
            "stable": self.stable,
            "support": [
                {"capital_n": cn, "n": n, "k0": k0} for cn, n, k0 in self.support
            ],
        }


def select_dominant_column(w):
    """1-based number of the first column of maximal 2-norm."""
    w = np.asarray(w, dtype=np.float64)
    norms = np.linalg.norm(w, axis=0)
    if not norms.max() > 0.0:
        raise DegenerateInputError("zero matrix has no dominant column")
    return int(np.argmax(norms)) + 1


def psi_bar(a, s_bar, w_col, n, k):
    y = shifted_power_apply(a, s_bar, k, np.asarray(w_col, dtype=np.float64))
    return float(n) ** (2 * k) * float(y @ y)


def beta(a, s_bar, w_col, n, k):
    """Ratio ``psi_bar_k / psi_bar_(k-1)``; ``beta_0`` is 1 by definition."""
    if k == 0:
        return 1.0
    if k < 1:
        raise ValueError("k must be non-negative")
    lower = shifted_power_apply(a, s_bar, k - 1, np.asarray(w_col, dtype=np.float64))
    denom = float(n) ** (2 * (k - 1)) * float(lower @ lower)
    if not denom >= TINY:
        raise DegenerateRatioError(
            f"psi_bar_{k - 1} = {denom:g}: the column is annihilated at order {k - 1}",
            order=k - 1,
        )
    upper = shifted_power_apply(a, s_bar, 1, lower)
    return float(n) ** 2 * float(upper @ upper) / float(lower @ lower)


def beta_row(a, s_bar, w_col, n, kmax):
    """``[beta_1, ..., beta_kmax]``; entries after annihilation are ``None``."""
    row = []
    y = np.asarray(w_col, dtype=np.float64)
    prev = float(y @ y)
    for k in range(1, kmax + 1):
        if not float(n) ** (2 * (k - 1)) * prev >= TINY:
            row.extend([None] * (kmax - k + 1))
            break
        y = shifted_power_apply(a, s_bar, 1, y)
        cur = float(y @ y)
        row.append(float(n) ** 2 * cur / prev)
        prev = cur
    return row


def dichotomy_index(row, epsilon):
    """``k0`` if ``row`` (``beta_1, beta_2, ...``) shows the dichotomy, else None."""
    for k, b in enumerate(row, 1):
        if b is None:
            return None
        if b >= 1.0 - epsilon:
            continue
        return k if b < epsilon else None
    return None


def detect_cyclic_order(
    a,
    capital_n=DEFAULT_CAPITAL_N,
    n_grid=DEFAULT_N_GRID,
    epsilon=DEFAULT_EPSILON,
    *,
    confirm_offsets=CONFIRM_OFFSETS,
    gamma=1.0,
    deep=None,
):
    """Estimate the cyclic order with the beta dichotomy test.

    The deep iterate at ``capital_n`` fixes ``s_N`` and the column ``j``.
    Each ``n`` in ``n_grid`` yields a row of betas at ``s_N``. An index is
    accepted once at least two probes agree on it: a probe is either a grid
    row at ``s_N`` or, for grid rows that already show the dichotomy, the
    same row re-evaluated at ``s_{N + offset}`` for each of
    ``confirm_offsets``. Conflicting indices are settled by strict majority
    and flagged ``stable=False``.

    ``deep`` may carry an already computed depth-``capital_n`` estimate.
    """
    a = as_square(a, "a")
    m = a.shape[0]
    n_grid = sorted({int(n) for n in n_grid})
    if not n_grid:
        raise ValueError("n_grid is empty")
    if any(n < 1 or n >= capital_n for n in n_grid):
        raise ValueError(f"every grid depth must satisfy 1 <= n < N = {capital_n}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")

    if deep is None or deep.n != capital_n:
        deep = run_iteration(a, None, capital_n, gamma)
    s_n = deep.s_n
    j = select_dominant_column(deep.w_n)

    columns = {n: run_iteration(a, None, n, gamma).w_n[:, j - 1] for n in n_grid}
    beta_grid = {n: beta_row(a, s_n, columns[n], n, m) for n in n_grid}

    support = []
    for n in n_grid:
        k0 = dichotomy_index(beta_grid[n], epsilon)
        if k0 is not None:
            support.append((capital_n, n, k0))

    votes = Counter(k0 for _, _, k0 in support)
    if support and votes.most_common(1)[0][1] < 2:
        for off in confirm_offsets:
            s_alt = run_iteration(a, None, capital_n + off, gamma).s_n
            primary = [n for cn, n, _k in support if cn == capital_n]
            for n in primary:
                k_alt = dichotomy_index(beta_row(a, s_alt, columns[n], n, m), epsilon)
                if k_alt is not None:
                    support.append((capital_n + off, n, k_alt))
        votes = Counter(k0 for _, _, k0 in support)

    detected, stable = "undetermined", False
    if votes:
        ranked = votes.most_common()
        best, count = ranked[0]
        runner_up = ranked[1][1] if len(ranked) > 1 else 0
        if count >= 2 and count > runner_up:
            detected = int(best)
            stable = len(ranked) == 1

    return CyclicOrderReport(
        capital_n=int(capital_n),
        s_approx=s_n,
        j=j,
        epsilon=float(epsilon),
        beta_grid=beta_grid,
        detected_nu=detected,
        stable=stable,
        support=support,
    )
