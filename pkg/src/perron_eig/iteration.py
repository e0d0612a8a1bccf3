"""Normalized truncated-exponential iteration.

For a fixed depth ``n`` the map ``K_n(gamma) M = T_n M / ||T_n M||`` with
``T_n = sum_{k<=n} (gamma A)^k / k!`` is applied ``n`` times to the
normalized initial matrix. The result ``W_n`` approximates the normalized
principal part of ``exp(n gamma A) V`` and its Rayleigh quotient
``s_n = <A W_n, W_n>`` estimates the principal eigenvalue.
"""
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .dense import (
    as_square,
    frobenius_inner,
    frobenius_norm,
    matmul,
    pivoted_gram_schmidt,
    taylor_apply,
)
from .errors import DimensionError, SingularInitError, SingularIterationError

DEFAULT_N = 50
TINY_NORM = 1e-300


@dataclass(frozen=True)
class SpectralEstimate:
    n: int
    gamma: float
    w_n: np.ndarray = field(repr=False)
    s_n: float
    rayleigh_trace: tuple = field(repr=False)
    init_description: str = "identity"

    def to_dict(self):
        return {
            "n": self.n,
            "gamma": self.gamma,
            "s_n": self.s_n,
            "w_n": self.w_n.tolist(),
            "rayleigh_trace": [[k, v] for k, v in self.rayleigh_trace],
            "init_description": self.init_description,
        }


def default_gamma(a):
    """``min(1, 2 / ||a||_F)``: keeps ``||gamma a||_F <= 2``."""
    nrm = frobenius_norm(a)
    return 1.0 if nrm == 0.0 else min(1.0, 2.0 / nrm)


def check_nonsingular(v, tol=1e-10):
    """Heuristic nonsingularity test for an initial matrix.

    Rejects a zero (below ``1e-12``) column, or a numerical rank below ``m``
    under pivoted Gram-Schmidt with tolerance ``tol * ||v||_F``.
    """
    v = as_square(v, "v")
    col_norms = np.linalg.norm(v, axis=0)
    bad = np.flatnonzero(col_norms < 1e-12)
    if bad.size:
        raise SingularInitError(f"initial matrix has a zero column at index {int(bad[0])}")
    _, pivots, _ = pivoted_gram_schmidt(v, tol * frobenius_norm(v))
    if len(pivots) < v.shape[0]:
        raise SingularInitError(
            f"initial matrix has numerical rank {len(pivots)} < {v.shape[0]}"
        )


def rayleigh_quotient(a, w):
    # Dividing by <w, w> (= 1 up to rounding) makes s exact whenever a w is an
    # exact power-of-two multiple of w, e.g. a = 2I for any size.
    return frobenius_inner(matmul(a, w), w) / frobenius_inner(w, w)


def _check_depth(n, gamma):
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma!r}")


def k_step(a, m, n, gamma=1.0):
    """One normalized step ``T_n(gamma) m / ||T_n(gamma) m||_F``.

    Raises :class:`SingularIterationError` if the unnormalized product has
    norm below ``1e-300``.
    """
    a = as_square(a, "a")
    m = np.asarray(m, dtype=np.float64)
    if m.shape != a.shape:
        raise DimensionError(f"m must have shape {a.shape}, got {m.shape}")
    _check_depth(n, gamma)
    if frobenius_norm(m) == 0.0:
        raise ValueError("m must be nonzero")
    t = taylor_apply(a, m, n, gamma)
    nrm = frobenius_norm(t)
    if not nrm >= TINY_NORM:
        raise SingularIterationError(
            f"|T_n M| = {nrm:g}; the truncated exponential is numerically singular, increase n"
        )
    return t / nrm


def run_iteration(a, v=None, n=DEFAULT_N, gamma=None, *, init_description=None):
    """Run the double-index iteration to depth ``n``.

    Parameters
    ----------
    a : array_like, (m, m)
        The matrix whose principal eigenvalue is sought.
    v : array_like, (m, m), optional
        Nonsingular initial matrix, any scale (it is normalized first).
        Defaults to the identity.
    n : int
        Depth: both the Taylor degree and the number of steps.
    gamma : float, optional
        Scale parameter; ``None`` selects :func:`default_gamma`.

    Returns
    -------
    SpectralEstimate
        ``w_n = M_n(n)`` and ``s_n = <a w_n, w_n> / <w_n, w_n>``, with the
        Rayleigh value of every intermediate iterate ``k = 0..n``.
    """
    a = as_square(a, "a")
    if v is None:
        v = np.eye(a.shape[0])
        tag = "identity"
    else:
        v = as_square(v, "v")
        if v.shape != a.shape:
            raise DimensionError(f"v must have shape {a.shape}, got {v.shape}")
        tag = "user"
    if init_description is not None:
        tag = init_description
    if gamma is None:
        gamma = default_gamma(a)
    gamma = float(gamma)
    _check_depth(n, gamma)
    check_nonsingular(v)
    m0 = np.ascontiguousarray(v / frobenius_norm(v))
    w, trace = _backend.impl.normalized_iteration(a, m0, int(n), gamma, int(n))
    s_n = rayleigh_quotient(a, w)
    return SpectralEstimate(
        n=int(n),
        gamma=gamma,
        w_n=w,
        s_n=s_n,
        rayleigh_trace=tuple((k, float(val)) for k, val in enumerate(trace)),
        init_description=tag,
    )


def direct_taylor_state(a, v, t, n):
    """Normalized ``X_n(t) = sum_{k<=n} t^k a^k v / k!`` (single polynomial)."""
    a = as_square(a, "a")
    v = np.asarray(v, dtype=np.float64)
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        x = np.array(v, dtype=np.float64)
    else:
        x = taylor_apply(a, v, n, t)
    return x / frobenius_norm(x)
