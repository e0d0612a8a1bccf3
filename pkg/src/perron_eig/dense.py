"""Dense real matrix primitives.

Matrices are plain ``numpy.ndarray`` objects of dtype float64. Every public
function validates its inputs with :func:`as_matrix`, which rejects empty
arrays and non-finite entries. Vectors are accepted wherever a single-column
matrix is, and are returned as vectors.

The matrix norm used throughout is the Frobenius norm.
"""
import math

import numpy as np

from . import _backend
from .errors import DimensionError, NonFiniteError


def as_matrix(x, name="matrix"):
    """Return ``x`` as a finite, C-contiguous float64 2-D array."""
    arr = np.array(x, dtype=np.float64, order="C", copy=True)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"{name} must have at least one row and column")
    if not np.isfinite(arr).all():
        raise NonFiniteError(f"{name} has non-finite entries")
    return arr


def as_square(x, name="matrix"):
    arr = as_matrix(x, name)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {arr.shape}")
    return arr


def _as_operand(x, name):
    # Vectors travel as (m, 1) columns; the flag restores the caller's shape.
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1:
        return as_matrix(arr.reshape(-1, 1), name), True
    return as_matrix(arr, name), False


def identity(m):
    return np.eye(m)


def frobenius_inner(a, b):
    """Frobenius inner product ``sum_pq a[p,q] * b[p,q]``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(_backend.impl.frobenius_inner(np.ascontiguousarray(a), np.ascontiguousarray(b)))


def frobenius_norm(a):
    return math.sqrt(frobenius_inner(a, a))


def normalize(a):
    nrm = frobenius_norm(a)
    if nrm == 0.0:
        raise DimensionError("cannot normalize a zero matrix")
    return np.asarray(a, dtype=np.float64) / nrm


def matmul(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim not in (1, 2) or a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def taylor_apply(a, x, n, gamma):
    """Apply the degree-``n`` Taylor polynomial of ``exp(gamma * a)`` to ``x``.

    The sum ``sum_{k<=n} (gamma a)^k x / k!`` is accumulated term by term,
    ``term_{k+1} = gamma / (k + 1) * a @ term_k``, so no power of ``a`` is
    ever formed.

    Raises
    ------
    NumericOverflowError
        If any entry of a term or of the partial sum exceeds ``1e280``; the
        exception's ``term`` attribute names the offending term index.
    """
    a = as_square(a, "a")
    x, vec = _as_operand(x, "x")
    if a.shape[1] != x.shape[0]:
        raise DimensionError(f"a is {a.shape} but x has {x.shape[0]} rows")
    if n < 0:
        raise ValueError("n must be non-negative")
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    out = _backend.impl.taylor_apply(a, x, int(n), float(gamma))
    return out[:, 0] if vec else out


def shifted_power_apply(a, shift, k, x):
    """Return ``(a - shift I)^k x`` via ``k`` multiply-and-subtract steps."""
    a = as_square(a, "a")
    x, vec = _as_operand(x, "x")
    if a.shape[1] != x.shape[0]:
        raise DimensionError(f"a is {a.shape} but x has {x.shape[0]} rows")
    if k < 0:
        raise ValueError("k must be non-negative")
    out = _backend.impl.shifted_power_apply(a, float(shift), int(k), x)
    return out[:, 0] if vec else out


def pivoted_gram_schmidt(a, tol):
    """Modified Gram-Schmidt with column pivoting.

    Columns are picked greedily by largest remaining residual norm and each
    new direction is orthogonalized twice. Stops when the best remaining
    residual drops below ``tol`` (absolute).

    Returns ``(q, pivots, residuals)``: orthonormal columns, the original
    column indices in pick order, and the residual norm of each pick.
    """
    r = np.array(a, dtype=np.float64, copy=True)
    m, k = r.shape
    q = np.zeros((m, min(m, k)))
    pivots, residuals = [], []
    norms = np.sqrt(np.einsum("ij,ij->j", r, r))
    available = np.ones(k, dtype=bool)
    for i in range(min(m, k)):
        cand = np.where(available, norms, -1.0)
        p = int(np.argmax(cand))
        if cand[p] < tol or cand[p] <= 0.0:
            break
        v = r[:, p].copy()
        for _ in range(2):
            v -= q[:, :i] @ (q[:, :i].T @ v)
        nv = float(np.linalg.norm(v))
        if nv < tol or nv == 0.0:
            break
        q[:, i] = v / nv
        pivots.append(p)
        residuals.append(nv)
        available[p] = False
        r -= np.outer(q[:, i], q[:, i] @ r)
        norms = np.sqrt(np.einsum("ij,ij->j", r, r))
    return q[:, : len(pivots)], pivots, residuals
