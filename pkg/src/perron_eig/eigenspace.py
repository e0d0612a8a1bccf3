"""Well-conditioned spanning set for the principal generalized eigenspace.

With ``A_bar = A - s_bar I`` the shifted iteration yields ``S_n``, the
normalized ``exp(n A_bar) V``. Multiplying by the truncated inverse
polynomial ``P_bar(t) = sum_{k<=d} (-t)^k A_bar^k / k!`` (``t = n``) strips
the polynomial growth along the Jordan chains and leaves columns inside the
generalized eigenspace; a pivoted Gram-Schmidt pass then picks a basis.

Column numbers in results are 1-based.
"""
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .dense import (
    as_square,
    frobenius_norm,
    pivoted_gram_schmidt,
    shifted_power_apply,
)
from .errors import DegenerateInputError, DimensionError, EmptySpaceError
from .iteration import check_nonsingular

RANK_TOL = 1e-6


@dataclass
class EigenspaceBasis:
    b_tilde: np.ndarray = field(repr=False)
    s_bar: float
    nu: int
    d: int
    n: int
    selected_columns: list
    dim_estimate: int
    conditioning: float

    @property
    def basis(self):
        """The selected columns of ``b_tilde``, each scaled to unit norm."""
        cols = self.b_tilde[:, [c - 1 for c in self.selected_columns]]
        return cols / np.linalg.norm(cols, axis=0)

    def to_dict(self):
        return {
            "s_bar": self.s_bar,
            "nu": self.nu,
            "d": self.d,
            "n": self.n,
            "selected_columns": list(self.selected_columns),
            "dim_estimate": self.dim_estimate,
            "conditioning": self.conditioning,
            "b_tilde": self.b_tilde.tolist(),
        }


def p_bar_apply(a, s_bar, d, t, x):
    """``sum_{k=0}^{d} (-1)^k t^k / k! (a - s_bar I)^k x``, term by term."""
    a = as_square(a, "a")
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != a.shape[0]:
        raise DimensionError(f"x has {x.shape[0]} rows, expected {a.shape[0]}")
    if d < 0 or t < 0:
        raise ValueError("d and t must be non-negative")
    term = np.array(x, dtype=np.float64)
    acc = term.copy()
    for k in range(1, d + 1):
        term = (-t / k) * shifted_power_apply(a, s_bar, 1, term)
        acc = acc + term
    return acc


def run_shifted_iteration(a, s_bar, v=None, n=20, gamma=1.0):
    """``S_n``: the normalized iteration applied to ``a - s_bar I``."""
    a = as_square(a, "a")
    m = a.shape[0]
    v = np.eye(m) if v is None else as_square(v, "v")
    if v.shape != a.shape:
        raise DimensionError(f"v must have shape {a.shape}, got {v.shape}")
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    check_nonsingular(v)
    shifted = a - float(s_bar) * np.eye(m)
    m0 = np.ascontiguousarray(v / frobenius_norm(v))
    s_n, _ = _backend.impl.normalized_iteration(shifted, m0, int(n), float(gamma), int(n))
    return s_n


def extract_columns(b, rank_tol=RANK_TOL):
    """Pivoted Gram-Schmidt selection on the columns of ``b``.

    Returns 1-based column numbers in pick order and the smallest singular
    value of the picked columns after scaling each to unit length.
    """
    _, pivots, _ = pivoted_gram_schmidt(b, rank_tol)
    if not pivots:
        return [], 0.0
    cols = b[:, pivots]
    cols = cols / np.linalg.norm(cols, axis=0)
    cond = float(np.linalg.svd(cols, compute_uv=False)[-1])
    return [p + 1 for p in pivots], cond


def compute_basis(a, s_bar, nu, n=20, v=None, *, d=None, gamma=1.0, rank_tol=RANK_TOL):
    """Approximate a basis of the generalized eigenspace at ``s_bar``.

    Parameters
    ----------
    a : array_like, (m, m)
    s_bar : float
        Accurate estimate of the principal eigenvalue.
    nu : int
        Cyclic order of the eigenspace.
    n : int
        Depth of the shifted iteration; also the polynomial argument
        ``t = gamma * n``.
    v : array_like, optional
        Nonsingular initial matrix (identity by default).
    d : int, optional
        Degree of the inverse polynomial, default ``nu - 1``.
    rank_tol : float
        Residual threshold for column selection, absolute on ``b_tilde``
        (which has unit Frobenius norm).

    Raises
    ------
    EmptySpaceError
        If no column of ``b_tilde`` clears ``rank_tol``.
    """
    a = as_square(a, "a")
    if nu < 1:
        raise ValueError("nu must be at least 1")
    d = nu - 1 if d is None else int(d)
    s_n = run_shifted_iteration(a, s_bar, v, n, gamma)
    b = p_bar_apply(a, s_bar, d, gamma * n, s_n)
    nrm = frobenius_norm(b)
    if nrm == 0.0:
        raise EmptySpaceError("P_bar(n) S_n vanished; s_bar is far from an eigenvalue")
    b = b / nrm
    selected, cond = extract_columns(b, rank_tol)
    if not selected:
        raise EmptySpaceError(f"no column of B_tilde exceeds rank_tol = {rank_tol:g}")
    return EigenspaceBasis(
        b_tilde=b,
        s_bar=float(s_bar),
        nu=int(nu),
        d=d,
        n=int(n),
        selected_columns=selected,
        dim_estimate=len(selected),
        conditioning=cond,
    )


def orthonormal_basis(u, tol=1e-10):
    u = np.asarray(u, dtype=np.float64)
    if u.ndim == 1:
        u = u.reshape(-1, 1)
    q, pivots, _ = pivoted_gram_schmidt(u, tol * max(np.linalg.norm(u, axis=0).max(), 1e-300))
    if len(pivots) < u.shape[1]:
        raise DegenerateInputError(
            f"columns are rank deficient ({len(pivots)} < {u.shape[1]})"
        )
    return q


def subspace_gap(u, w):
    """Sine of the largest principal angle from ``span(u)`` into ``span(w)``.

    Taken as the spectral norm of ``(I - Q_w Q_w^T) Q_u``, which keeps full
    relative accuracy for small angles (``sqrt(1 - cos^2)`` does not below
    about 1e-8). Symmetric when the dimensions agree; 1 when ``span(u)`` has
    larger dimension.
    """
    u = np.asarray(u, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if u.shape[0] != w.shape[0]:
        raise DimensionError("u and w must have the same number of rows")
    qu = orthonormal_basis(u)
    qw = orthonormal_basis(w)
    if qu.shape[1] > qw.shape[1]:
        return 1.0
    resid = qu - qw @ (qw.T @ qu)
    return min(1.0, float(np.linalg.norm(resid, 2)))
