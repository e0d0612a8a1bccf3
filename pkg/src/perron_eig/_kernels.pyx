# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; drop-in replacement for ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt

from .errors import DivergenceError, NumericOverflowError, SingularIterationError

cnp.import_array()

OVERFLOW_GUARD = 1e280
TINY_NORM = 1e-300
cdef double _GUARD = 1e280
cdef double _TINY = 1e-300


cdef double _pairwise_dot(const double* a, const double* b, Py_ssize_t n) noexcept nogil:
    # Recursive halving on 8-aligned splits; deterministic order, O(log n)
    # rounding growth.
    cdef Py_ssize_t i, half
    cdef double s
    if n <= 8:
        s = 0.0
        for i in range(n):
            s += a[i] * b[i]
        return s
    half = (n // 2) - ((n // 2) % 8)
    if half == 0:
        half = 8
    return _pairwise_dot(a, b, half) + _pairwise_dot(a + half, b + half, n - half)


cdef inline void _gemm(const double* a, const double* x, double* out,
                       Py_ssize_t m, Py_ssize_t p, double scale) noexcept nogil:
    # out = scale * a @ x with a (m, m), x and out (m, p), row-major.
    cdef Py_ssize_t i, j, l
    cdef double aij
    for i in range(m * p):
        out[i] = 0.0
    for i in range(m):
        for l in range(m):
            aij = scale * a[i * m + l]
            if aij != 0.0:
                for j in range(p):
                    out[i * p + j] += aij * x[l * p + j]


def frobenius_inner(a, b):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64).ravel()
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=np.float64).ravel()
    if av.shape[0] == 0:
        return 0.0
    return _pairwise_dot(&av[0], &bv[0], av.shape[0])


def frobenius_norm(a):
    return sqrt(frobenius_inner(a, a))


cdef int _taylor_into(const double* a, const double* x, double* acc, double* term,
                      double* tmp, Py_ssize_t m, Py_ssize_t p, int n,
                      double gamma) noexcept nogil:
    # Returns 0 on success, else the term index that tripped the guard.
    cdef Py_ssize_t i, size = m * p
    cdef int k
    cdef double v
    for i in range(size):
        acc[i] = x[i]
        term[i] = x[i]
    for k in range(n):
        _gemm(a, term, tmp, m, p, gamma / (k + 1))
        for i in range(size):
            v = tmp[i]
            term[i] = v
            acc[i] += v
            if not (fabs(v) <= _GUARD and fabs(acc[i]) <= _GUARD):
                return k + 1
    return 0


def taylor_apply(a, x, int n, double gamma):
    cdef const double[:, ::1] av = a
    cdef const double[:, ::1] xv = x
    cdef Py_ssize_t m = xv.shape[0], p = xv.shape[1]
    acc = np.empty((m, p))
    cdef double[:, ::1] accv = acc
    cdef double[:, ::1] term = np.empty((m, p))
    cdef double[:, ::1] tmp = np.empty((m, p))
    cdef int bad
    with nogil:
        bad = _taylor_into(&av[0, 0], &xv[0, 0], &accv[0, 0], &term[0, 0],
                           &tmp[0, 0], m, p, n, gamma)
    if bad:
        raise NumericOverflowError(
            f"Taylor term {bad} exceeded {OVERFLOW_GUARD:g}; use a smaller gamma", term=bad
        )
    return acc


def shifted_power_apply(a, double shift, int k, x):
    cdef const double[:, ::1] av = a
    cdef const double[:, ::1] xv = x
    cdef Py_ssize_t m = xv.shape[0], p = xv.shape[1], i
    y = np.array(x, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] yv = y
    cdef double[:, ::1] tmp = np.empty((m, p))
    cdef int step
    with nogil:
        for step in range(k):
            _gemm(&av[0, 0], &yv[0, 0], &tmp[0, 0], m, p, 1.0)
            for i in range(m * p):
                (&yv[0, 0])[i] = (&tmp[0, 0])[i] - shift * (&yv[0, 0])[i]
    return y


cdef double _rayleigh(const double* a, const double* mm, double* tmp,
                      Py_ssize_t m, Py_ssize_t p) noexcept nogil:
    _gemm(a, mm, tmp, m, p, 1.0)
    return _pairwise_dot(tmp, mm, m * p)


def normalized_iteration(a, m0, int n, double gamma, int steps):
    cdef const double[:, ::1] av = a
    cdef Py_ssize_t m = m0.shape[0], p = m0.shape[1], i
    cur = np.array(m0, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] cv = cur
    cdef double[:, ::1] acc = np.empty((m, p))
    cdef double[:, ::1] term = np.empty((m, p))
    cdef double[:, ::1] tmp = np.empty((m, p))
    trace = np.empty(steps + 1)
    cdef double[::1] tv = trace
    cdef int k, bad = 0, failed_step = -1
    cdef double nrm = 0.0
    with nogil:
        tv[0] = _rayleigh(&av[0, 0], &cv[0, 0], &tmp[0, 0], m, p)
        for k in range(steps):
            bad = _taylor_into(&av[0, 0], &cv[0, 0], &acc[0, 0], &term[0, 0],
                               &tmp[0, 0], m, p, n, gamma)
            if bad:
                break
            nrm = sqrt(_pairwise_dot(&acc[0, 0], &acc[0, 0], m * p))
            if not nrm >= _TINY:
                failed_step = k + 1
                break
            for i in range(m * p):
                (&cv[0, 0])[i] = (&acc[0, 0])[i] / nrm
            tv[k + 1] = _rayleigh(&av[0, 0], &cv[0, 0], &tmp[0, 0], m, p)
    if bad:
        raise NumericOverflowError(
            f"Taylor term {bad} exceeded {OVERFLOW_GUARD:g}; use a smaller gamma", term=bad
        )
    if failed_step > 0:
        raise SingularIterationError(
            f"step {failed_step}: |T_n M| = {nrm:g}; the truncated exponential is "
            "numerically singular, increase n"
        )
    return cur, trace


cdef double _phi_prime(const double* a, double tau, const double* x, int nu,
                       double* lower, double* upper, Py_ssize_t m) noexcept nogil:
    cdef Py_ssize_t i
    cdef int step
    for i in range(m):
        lower[i] = x[i]
    for step in range(nu - 1):
        _gemm(a, lower, upper, m, 1, 1.0)
        for i in range(m):
            lower[i] = upper[i] - tau * lower[i]
    _gemm(a, lower, upper, m, 1, 1.0)
    for i in range(m):
        upper[i] = upper[i] - tau * lower[i]
    return -2.0 * nu * _pairwise_dot(lower, upper, m)


def phi_prime(a, double tau, x, int nu):
    cdef const double[:, ::1] av = a
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t m = xv.shape[0]
    cdef double[::1] lower = np.empty(m)
    cdef double[::1] upper = np.empty(m)
    return _phi_prime(&av[0, 0], tau, &xv[0], nu, &lower[0], &upper[0], m)


def flow_rk4(a, x, int nu, double s0, double coeff, double dt, long nsteps,
             long sample_every, double lo, double hi):
    cdef const double[:, ::1] av = a
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t m = xv.shape[0]
    cdef double[::1] lower = np.empty(m)
    cdef double[::1] upper = np.empty(m)
    cdef long nsamples = nsteps // sample_every + 2
    times = np.empty(nsamples)
    taus = np.empty(nsamples)
    cdef double[::1] tt = times
    cdef double[::1] uu = taus
    cdef double tau = s0, k1, k2, k3, k4
    cdef long i, count = 1, diverged = 0
    tt[0] = 0.0
    uu[0] = s0
    with nogil:
        for i in range(1, nsteps + 1):
            k1 = -coeff * _phi_prime(&av[0, 0], tau, &xv[0], nu, &lower[0], &upper[0], m)
            k2 = -coeff * _phi_prime(&av[0, 0], tau + 0.5 * dt * k1, &xv[0], nu, &lower[0], &upper[0], m)
            k3 = -coeff * _phi_prime(&av[0, 0], tau + 0.5 * dt * k2, &xv[0], nu, &lower[0], &upper[0], m)
            k4 = -coeff * _phi_prime(&av[0, 0], tau + dt * k3, &xv[0], nu, &lower[0], &upper[0], m)
            tau = tau + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not (lo <= tau <= hi):
                diverged = i
                break
            if i % sample_every == 0 or i == nsteps:
                tt[count] = i * dt
                uu[count] = tau
                count += 1
    if diverged:
        raise DivergenceError(
            f"tau = {tau!r} left [{lo:g}, {hi:g}] at t = {diverged * dt:g}; "
            "the flow oscillates, use a smaller gamma"
        )
    return times[:count].copy(), taus[:count].copy()
