"""Compiled inner loops for modular elimination and slice reduction.

All arrays are int64 with entries in [0, p), p < 2**31, so every product
fits in 64 bits before reduction.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def inv_mod(a, p):
    t, new_t = 0, 1
    r, new_r = p, a % p
    while new_r != 0:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    if r != 1:
        raise ZeroDivisionError("element is not invertible")
    return t % p


@njit(cache=True)
def _update_budget(p):
    # Rows are reduced lazily: an entry starts in [0, p) and each pivot step
    # adds at most (p-1)^2 in magnitude, so this many steps stay in int64.
    return (2**62) // ((p - 1) * (p - 1) + 1)


@njit(cache=True)
def _normalize_pivot_row(a, rank, c, p, idx):
    cols = a.shape[1]
    inv = inv_mod(a[rank, c] % p, p)
    nz = 0
    for k in range(c, cols):
        v = (a[rank, k] % p) * inv % p
        a[rank, k] = v
        if v != 0:
            idx[nz] = k
            nz += 1
    return nz


@njit(cache=True)
def _find_pivot(a, rank, c, p):
    piv = -1
    for r in range(rank, a.shape[0]):
        v = a[r, c] % p
        a[r, c] = v
        if v != 0 and piv < 0:
            piv = r
    return piv


@njit(cache=True)
def _swap_rows(a, i, j, start):
    for k in range(start, a.shape[1]):
        tmp = a[i, k]
        a[i, k] = a[j, k]
        a[j, k] = tmp


@njit(cache=True)
def rref_inplace(a, p):
    """Reduce ``a`` to reduced row echelon form; return the pivot columns."""
    rows, cols = a.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    idx = np.empty(cols, dtype=np.int64)
    budget = _update_budget(p)
    steps = 0
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        piv = _find_pivot(a, rank, c, p)
        if piv < 0:
            continue
        if piv != rank:
            _swap_rows(a, rank, piv, 0)
        nz = _normalize_pivot_row(a, rank, c, p, idx)
        if steps >= budget:
            for r in range(rows):
                for k in range(cols):
                    a[r, k] %= p
            steps = 0
        steps += 1
        for r in range(rows):
            if r == rank:
                continue
            f = a[r, c] % p
            if f == 0:
                continue
            for t in range(nz):
                k = idx[t]
                a[r, k] -= f * a[rank, k]
        pivots[rank] = c
        rank += 1
    for r in range(rows):
        for k in range(cols):
            a[r, k] %= p
    return pivots[:rank]


@njit(cache=True)
def echelon_rank(a, p):
    """Rank by forward elimination only (destroys ``a``)."""
    rows, cols = a.shape
    idx = np.empty(cols, dtype=np.int64)
    budget = _update_budget(p)
    steps = 0
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        piv = _find_pivot(a, rank, c, p)
        if piv < 0:
            continue
        if piv != rank:
            _swap_rows(a, rank, piv, c)
        nz = _normalize_pivot_row(a, rank, c, p, idx)
        if steps >= budget:
            for r in range(rank + 1, rows):
                for k in range(c, cols):
                    a[r, k] %= p
            steps = 0
        steps += 1
        for r in range(rank + 1, rows):
            f = a[r, c]
            if f == 0:
                continue
            for t in range(nz):
                k = idx[t]
                a[r, k] -= f * a[rank, k]
        rank += 1
    return rank


@njit(cache=True)
def reduce_slice(v, start, red_g, red_cof, gstart, glen, gcodes, gcoefs,
                 sorted_codes, perm, p):
    """Fully reduce the dense slice vector ``v`` from position ``start`` on.

    Position i is reducible when red_g[i] >= 0; its reducer is the stored
    element red_g[i] (monic, terms as monomial codes) shifted by the
    cofactor code red_cof[i]. Reducer tails only touch later positions.
    """
    n = v.shape[0]
    for i in range(start, n):
        c = v[i]
        if c == 0:
            continue
        g = red_g[i]
        if g < 0:
            continue
        cof = red_cof[i]
        s = gstart[g]
        for k in range(s, s + glen[g]):
            pos = perm[np.searchsorted(sorted_codes, cof + gcodes[k])]
            v[pos] = (v[pos] - c * gcoefs[k]) % p


@njit(cache=True)
def assign_reducers(exps, codes, lt_arr, lt_codes, lt_deg, max_deg, red_g, red_cof):
    """For each slice monomial, pick the first stored leading monomial
    (of weighted degree <= max_deg) dividing it."""
    n_mono, nv = exps.shape
    n_g = lt_arr.shape[0]
    for i in range(n_mono):
        for g in range(n_g):
            if lt_deg[g] > max_deg:
                continue
            ok = True
            for k in range(nv):
                if lt_arr[g, k] > exps[i, k]:
                    ok = False
                    break
            if ok:
                red_g[i] = g
                red_cof[i] = codes[i] - lt_codes[g]
                break
