"""Brute-force spectral reference used to check the iterative pipeline.

Nothing here touches the iteration, cyclic-order, refinement or eigenspace
code; only the dense primitives are shared.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .dense import as_square, frobenius_norm, pivoted_gram_schmidt
from .errors import NumericOverflowError, OracleFailureError

MAX_DIM = 64
EPS = np.finfo(np.float64).eps


def hessenberg(a):
    """Householder reduction to upper Hessenberg form (similarity)."""
    h = as_square(a, "a")
    m = h.shape[0]
    for k in range(m - 2):
        x = h[k + 1 :, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        if x[0] > 0:
            alpha = -alpha
        v = x
        v[0] -= alpha
        vn = np.linalg.norm(v)
        if vn == 0.0:
            continue
        v /= vn
        h[k + 1 :, k:] -= 2.0 * np.outer(v, v @ h[k + 1 :, k:])
        h[:, k + 1 :] -= 2.0 * np.outer(h[:, k + 1 :] @ v, v)
        h[k + 2 :, k] = 0.0
    return h


def _francis_qr(h, max_sweeps):
    # Real double-shift QR on an upper Hessenberg matrix, deflating from the
    # bottom. Exceptional shifts every 10 stalled sweeps.
    n = h.shape[0]
    wr = np.zeros(n)
    wi = np.zeros(n)
    anorm = float(np.abs(np.triu(h, -1)).sum())
    nn = n - 1
    t = 0.0
    sweeps = 0
    while nn >= 0:
        its = 0
        while True:
            l = nn
            while l >= 1:
                s = abs(h[l - 1, l - 1]) + abs(h[l, l])
                if s == 0.0:
                    s = anorm
                if abs(h[l, l - 1]) + s == s:
                    h[l, l - 1] = 0.0
                    break
                l -= 1
            x = h[nn, nn]
            if l == nn:
                wr[nn] = x + t
                nn -= 1
                break
            y = h[nn - 1, nn - 1]
            w = h[nn, nn - 1] * h[nn - 1, nn]
            if l == nn - 1:
                p = 0.5 * (y - x)
                q = p * p + w
                z = math.sqrt(abs(q))
                x += t
                if q >= 0.0:
                    z = p + math.copysign(z, p)
                    wr[nn - 1] = wr[nn] = x + z
                    if z != 0.0:
                        wr[nn] = x - w / z
                else:
                    wr[nn - 1] = wr[nn] = x + p
                    wi[nn - 1] = -z
                    wi[nn] = z
                nn -= 2
                break
            if sweeps >= max_sweeps:
                raise OracleFailureError(f"QR iteration did not converge in {max_sweeps} sweeps")
            if its and its % 10 == 0:
                t += x
                for i in range(nn + 1):
                    h[i, i] -= x
                s = abs(h[nn, nn - 1]) + abs(h[nn - 1, nn - 2])
                x = y = 0.75 * s
                w = -0.4375 * s * s
            its += 1
            sweeps += 1
            mm = nn - 2
            while mm >= l:
                z = h[mm, mm]
                r = x - z
                s = y - z
                p = (r * s - w) / h[mm + 1, mm] + h[mm, mm + 1]
                q = h[mm + 1, mm + 1] - z - r - s
                r = h[mm + 2, mm + 1]
                s = abs(p) + abs(q) + abs(r)
                p /= s
                q /= s
                r /= s
                if mm == l:
                    break
                u = abs(h[mm, mm - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(h[mm - 1, mm - 1]) + abs(z) + abs(h[mm + 1, mm + 1]))
                if u + v == v:
                    break
                mm -= 1
            for i in range(mm + 2, nn + 1):
                h[i, i - 2] = 0.0
                if i != mm + 2:
                    h[i, i - 3] = 0.0
            for k in range(mm, nn):
                if k != mm:
                    p = h[k, k - 1]
                    q = h[k + 1, k - 1]
                    r = h[k + 2, k - 1] if k != nn - 1 else 0.0
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p /= x
                        q /= x
                        r /= x
                s = math.copysign(math.sqrt(p * p + q * q + r * r), p)
                if s == 0.0:
                    continue
                if k == mm:
                    if l != mm:
                        h[k, k - 1] = -h[k, k - 1]
                else:
                    h[k, k - 1] = -s * x
                p += s
                x = p / s
                y = q / s
                z = r / s
                q /= p
                r /= p
                for j in range(k, nn + 1):
                    p = h[k, j] + q * h[k + 1, j]
                    if k != nn - 1:
                        p += r * h[k + 2, j]
                        h[k + 2, j] -= p * z
                    h[k + 1, j] -= p * y
                    h[k, j] -= p * x
                for i in range(l, min(nn, k + 3) + 1):
                    p = x * h[i, k] + y * h[i, k + 1]
                    if k != nn - 1:
                        p += z * h[i, k + 2]
                        h[i, k + 2] -= p * r
                    h[i, k + 1] -= p * q
                    h[i, k] -= p
    return wr + 1j * wi


def eig_small(a):
    """All eigenvalues of a small dense matrix (``m <= 64``).

    Hessenberg reduction followed by shifted QR with deflation. Complex
    conjugate pairs come out adjacent, negative imaginary part first.
    """
    a = as_square(a, "a")
    m = a.shape[0]
    if m > MAX_DIM:
        raise ValueError(f"oracle is limited to m <= {MAX_DIM}")
    if m == 1:
        return [complex(a[0, 0])]
    vals = _francis_qr(hessenberg(a), 100 * m)
    return [complex(v) for v in vals]


def expm_reference(a):
    """Scaling-and-squaring matrix exponential.

    Scales by ``2^-p`` so that the Frobenius norm is at most 0.5, sums the
    Taylor series until a term drops below ``1e-20``, then squares ``p``
    times.
    """
    a = as_square(a, "a")
    m = a.shape[0]
    nrm = frobenius_norm(a)
    p = max(0, math.ceil(math.log2(nrm / 0.5))) if nrm > 0.5 else 0
    b = a / 2.0**p
    out = np.eye(m)
    term = np.eye(m)
    k = 0
    while True:
        k += 1
        term = term @ b / k
        out += term
        if np.abs(term).max() < 1e-20 or k > 100:
            break
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(p):
            out = out @ out
    if not np.isfinite(out).all():
        raise NumericOverflowError("matrix exponential overflowed")
    return out


def numeric_rank(a, tol):
    """Number of pivoted Gram-Schmidt pivots with residual >= tol * ||a||_F."""
    a = np.asarray(a, dtype=np.float64)
    nrm = frobenius_norm(a)
    if nrm == 0.0:
        return 0
    return len(pivoted_gram_schmidt(a, tol * nrm)[1])


def _shift_power(a, s, k):
    b = a - s * np.eye(a.shape[0])
    scale = np.linalg.norm(b)
    if scale > 0:
        b = b / scale
    return np.linalg.matrix_power(b, k)


def true_cyclic_order(a, s, tol=1e-8):
    """Smallest ``k >= 1`` with ``rank (a - sI)^k == rank (a - sI)^(k+1)``."""
    a = as_square(a, "a")
    m = a.shape[0]
    ranks = [numeric_rank(_shift_power(a, s, 1), tol)]
    for k in range(1, m + 1):
        ranks.append(numeric_rank(_shift_power(a, s, k + 1), tol))
        if ranks[k] == ranks[k - 1]:
            return k
    raise OracleFailureError(f"rank of (A - sI)^k did not stabilize by k = {m}")


def cluster_tolerance(a, size):
    """Merge radius for ``size`` eigenvalues split from one defective value.

    A Jordan block of size ``k`` perturbed by ``u ||A||`` scatters its
    eigenvalue by about ``(u ||A||)^(1/k)``.
    """
    scale = max(frobenius_norm(a), 1.0)
    return max(1e-6, 10.0 * (EPS * scale) ** (1.0 / size))


def eigen_cluster(a, eigs, center):
    """Indices of the eigenvalues clustering at ``center``.

    The largest ``k`` such that the ``k`` eigenvalues nearest ``center`` all
    lie within ``cluster_tolerance(a, k)`` of their mean (and of ``center``).
    """
    eigs = np.asarray(eigs, dtype=complex)
    order = np.argsort(np.abs(eigs - center), kind="stable")
    for k in range(len(order), 0, -1):
        idx = order[:k]
        tol = cluster_tolerance(a, k)
        mean = eigs[idx].mean()
        if np.abs(eigs[idx] - mean).max() <= tol and abs(mean - center) <= tol:
            return [int(i) for i in idx]
    return []


def generalized_eigenspace(a, s, dim, power):
    """Orthonormal basis of the ``dim`` smallest right singular directions of
    ``(a - sI)^power``."""
    p = _shift_power(as_square(a, "a"), s, power)
    _, _, vt = np.linalg.svd(p)
    return vt[p.shape[0] - dim :].T.copy()


def principal_projection(a, s, v):
    """Project the columns of ``v`` onto the generalized eigenspace at ``s``
    along the complementary invariant subspace."""
    a = as_square(a, "a")
    m = a.shape[0]
    v = np.asarray(v, dtype=np.float64)
    vec = v.ndim == 1
    if vec:
        v = v.reshape(-1, 1)
    dim = len(eigen_cluster(a, eig_small(a), s))
    if dim == 0:
        raise OracleFailureError(f"{s!r} is not an eigenvalue")
    p = _shift_power(a, s, m)
    u, _, vt = np.linalg.svd(p)
    basis = np.hstack([vt[m - dim :].T, u[:, : m - dim]])
    sv = np.linalg.svd(basis, compute_uv=False)
    if sv[-1] < 1e-10 * sv[0]:
        raise OracleFailureError("null space and range of (A - sI)^m are not complementary")
    coef = np.linalg.solve(basis, v)
    y = basis[:, :dim] @ coef[:dim]
    return y[:, 0] if vec else y


@dataclass
class OracleReport:
    eigenvalues: list
    s: float
    is_perron_like: bool
    delta: float
    nu_true: int
    alg_multiplicity: int
    ge_basis: np.ndarray = field(repr=False)

    def to_dict(self):
        return {
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
            "s": self.s,
            "is_perron_like": self.is_perron_like,
            "delta": self.delta,
            "nu_true": self.nu_true,
            "alg_multiplicity": self.alg_multiplicity,
            "ge_basis": self.ge_basis.tolist(),
        }


def oracle_report(a):
    """Full reference spectral data for ``a``."""
    a = as_square(a, "a")
    eigs = eig_small(a)
    arr = np.array(eigs)
    top = int(np.argmax(arr.real))
    members = eigen_cluster(a, arr, arr[top])
    center = complex(np.mean(arr[members]))
    # a real principal eigenvalue may sit in a cluster whose top member
    # is one of a split complex pair; recenter on the real axis
    s = center.real
    others = np.delete(arr, members)
    tol = cluster_tolerance(a, len(members))
    real_center = abs(center.imag) <= tol
    if others.size:
        gap = s - float(others.real.max())
        delta = gap / 2.0
    else:
        gap = math.inf
        delta = math.inf
    is_perron = bool(real_center and gap > 1e-9)
    nu = true_cyclic_order(a, s)
    basis = generalized_eigenspace(a, s, len(members), nu)
    return OracleReport(
        eigenvalues=eigs,
        s=float(s),
        is_perron_like=is_perron,
        delta=float(delta),
        nu_true=int(nu),
        alg_multiplicity=len(members),
        ge_basis=basis,
    )
