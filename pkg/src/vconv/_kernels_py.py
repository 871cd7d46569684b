"""Numpy implementations of the hot kernels (fallback backend).

Semidistance kind codes: 0 sup-norm, 1 euclidean, 2 coordinate projection
(``index``), 3 absolute value of a linear functional (``weights``).
"""

import numpy as np


def _rows(U, V, kind, index, weights):
    diff = U - V
    if kind == 0:
        return np.max(np.abs(diff), axis=-1)
    if kind == 1:
        return np.sqrt(np.sum(diff * diff, axis=-1))
    if kind == 2:
        return np.abs(diff[..., index])
    out = np.zeros(diff.shape[:-1])
    for j in range(diff.shape[-1]):
        out = out + weights[j] * diff[..., j]
    return np.abs(out)


def batch_sup(F, G, kind, index, weights):
    """Max over samples of ``d(F[b, j], G[j])`` for every batch row ``b``.

    Returns ``(values, argmax)``; the first maximiser wins ties.
    """
    D = _rows(F, G[None, :, :], kind, index, weights)
    arg = np.argmax(D, axis=1)
    return D[np.arange(len(D)), arg], arg.astype(np.int64)


def diameter(U, kind, index, weights):
    """Largest pairwise semidistance among the rows of ``U``: ``(value, i, j)``."""
    n = len(U)
    if kind in (0, 2):
        cols = U if kind == 0 else U[:, index : index + 1]
        hi = np.argmax(cols, axis=0)
        lo = np.argmin(cols, axis=0)
        spread = cols[hi, np.arange(cols.shape[1])] - cols[lo, np.arange(cols.shape[1])]
        c = int(np.argmax(spread))
        return float(spread[c]), int(hi[c]), int(lo[c])
    best, bi, bj = 0.0, 0, 0
    step = max(1, 2**20 // max(n, 1))
    for s in range(0, n, step):
        D = _rows(U[s : s + step, None, :], U[None, :, :], kind, index, weights)
        flat = int(np.argmax(D))
        v = float(D.flat[flat])
        if v > best:
            best, bi, bj = v, s + flat // n, flat % n
    return best, bi, bj


def tail_scan(V, rows, eps, cap, kind, index, weights):
    """Suffix-maximum tail deviations for the Cauchy criterion.

    ``V`` has shape ``(T, X, m)`` (sequence index, sample point, value).
    For each requested row ``n`` and sample ``x`` let
    ``dev(P) = max_{P <= p < T} d(V[n, x], V[p, x])``.  Returns
    ``first``: the smallest ``P`` with ``dev(P) <= eps`` (``T`` if none),
    ``dev_first``: ``dev(first)`` (``nan`` if none), and ``dev_cap``: ``dev(cap)``.
    """
    T, X, _ = V.shape
    R = len(rows)
    first = np.empty((R, X), dtype=np.int64)
    dev_first = np.empty((R, X))
    dev_cap = np.empty((R, X))
    for r, n in enumerate(rows):
        D = _rows(V[n][None, :, :], V, kind, index, weights)
        suffix = np.maximum.accumulate(D[::-1], axis=0)[::-1]
        ok = suffix <= eps
        cnt = ok.sum(axis=0)
        first[r] = T - cnt
        fi = np.minimum(first[r], T - 1)
        dev_first[r] = np.where(cnt > 0, suffix[fi, np.arange(X)], np.nan)
        dev_cap[r] = suffix[cap]
    return first, dev_first, dev_cap


def abel_sums(F, E):
    """Direct and summation-by-parts partial sums of ``sum_n F[n] * E[n]``.

    ``F``: ``(N, X, m)``, ``E``: ``(N, X)``.  With ``S_n`` the partial sums
    of ``F``, the second output is ``S_N E_N + sum_{n<N} S_n (E_n - E_{n+1})``.
    """
    Ew = E[:, :, None]
    direct = np.cumsum(F * Ew, axis=0)
    S = np.cumsum(F, axis=0)
    carry = np.zeros_like(S)
    if len(F) > 1:
        carry[1:] = np.cumsum(S[:-1] * (Ew[:-1] - Ew[1:]), axis=0)
    parts = S * Ew + carry
    return direct, parts
