# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; same contracts as ``_kernels_py``."""

import numpy as np

from libc.math cimport fabs, sqrt, NAN


cdef inline double _dist(const double* u, const double* v, Py_ssize_t m,
                         int kind, int index, const double* w) noexcept nogil:
    cdef Py_ssize_t c
    cdef double acc = 0.0, t
    if kind == 0:
        for c in range(m):
            t = fabs(u[c] - v[c])
            if t > acc:
                acc = t
        return acc
    if kind == 1:
        for c in range(m):
            t = u[c] - v[c]
            acc += t * t
        return sqrt(acc)
    if kind == 2:
        return fabs(u[index] - v[index])
    for c in range(m):
        acc = acc + w[c] * (u[c] - v[c])
    return fabs(acc)


def batch_sup(const double[:, :, ::1] F, const double[:, ::1] G,
              int kind, int index, const double[::1] weights):
    cdef Py_ssize_t B = F.shape[0], X = F.shape[1], m = F.shape[2]
    cdef Py_ssize_t b, j, best_j
    cdef double best, d
    vals = np.empty(B)
    args = np.empty(B, dtype=np.int64)
    cdef double[::1] vv = vals
    cdef long long[::1] aa = args
    cdef const double* w = &weights[0]
    with nogil:
        for b in range(B):
            best = -1.0
            best_j = 0
            for j in range(X):
                d = _dist(&F[b, j, 0], &G[j, 0], m, kind, index, w)
                if d > best:
                    best = d
                    best_j = j
            vv[b] = best
            aa[b] = best_j
    return vals, args


def diameter(const double[:, ::1] U, int kind, int index, const double[::1] weights):
    cdef Py_ssize_t n = U.shape[0], m = U.shape[1]
    cdef Py_ssize_t i, j, c, hi_i, lo_i, bi = 0, bj = 0
    cdef double best = 0.0, d, hi, lo
    cdef const double* w = &weights[0]
    if kind == 0 or kind == 2:
        best = -1.0
        for c in range(m):
            if kind == 2 and c != index:
                continue
            hi_i = 0
            lo_i = 0
            hi = U[0, c]
            lo = U[0, c]
            for i in range(1, n):
                if U[i, c] > hi:
                    hi = U[i, c]
                    hi_i = i
                if U[i, c] < lo:
                    lo = U[i, c]
                    lo_i = i
            if hi - lo > best:
                best = hi - lo
                bi = hi_i
                bj = lo_i
        return best, bi, bj
    with nogil:
        for i in range(n):
            for j in range(n):
                d = _dist(&U[i, 0], &U[j, 0], m, kind, index, w)
                if d > best:
                    best = d
                    bi = i
                    bj = j
    return best, bi, bj


def tail_scan(const double[:, :, ::1] V, const long long[::1] rows, double eps,
              Py_ssize_t cap, int kind, int index, const double[::1] weights):
    cdef Py_ssize_t T = V.shape[0], X = V.shape[1], m = V.shape[2]
    cdef Py_ssize_t R = rows.shape[0]
    cdef Py_ssize_t r, x, p, n, fp
    cdef double run, d, df
    first = np.empty((R, X), dtype=np.int64)
    dev_first = np.empty((R, X))
    dev_cap = np.empty((R, X))
    cdef long long[:, ::1] ff = first
    cdef double[:, ::1] dfv = dev_first
    cdef double[:, ::1] dcv = dev_cap
    cdef const double* w = &weights[0]
    with nogil:
        for r in range(R):
            n = rows[r]
            for x in range(X):
                run = 0.0
                fp = T
                df = NAN
                for p in range(T - 1, -1, -1):
                    d = _dist(&V[n, x, 0], &V[p, x, 0], m, kind, index, w)
                    if d > run:
                        run = d
                    if p == cap:
                        dcv[r, x] = run
                    if run <= eps:
                        fp = p
                        df = run
                    elif p <= cap:
                        break
                ff[r, x] = fp
                dfv[r, x] = df
    return first, dev_first, dev_cap


def abel_sums(const double[:, :, ::1] F, const double[:, ::1] E):
    cdef Py_ssize_t N = F.shape[0], X = F.shape[1], m = F.shape[2]
    cdef Py_ssize_t n, x, c
    cdef double s, direct_acc, carry
    direct = np.empty((N, X, m))
    parts = np.empty((N, X, m))
    cdef double[:, :, ::1] dv = direct
    cdef double[:, :, ::1] pv = parts
    with nogil:
        for x in range(X):
            for c in range(m):
                s = 0.0
                direct_acc = 0.0
                carry = 0.0
                for n in range(N):
                    if n > 0:
                        carry = carry + s * (E[n - 1, x] - E[n, x])
                    s = s + F[n, x, c]
                    direct_acc = direct_acc + F[n, x, c] * E[n, x]
                    dv[n, x, c] = direct_acc
                    pv[n, x, c] = s * E[n, x] + carry
    return direct, parts
