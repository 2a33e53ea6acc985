"""Brute-force references. Deliberately naive and independent of the solvers."""

from __future__ import annotations

import itertools
import math

import numpy as np

GUARD = 10**7


class OracleGuardError(ValueError):
    pass


def _guard(count):
    if count > GUARD:
        raise OracleGuardError(f"{count} candidates exceed the brute-force guard of {GUARD}")


def brute_1d(values, n, lo, hi):
    """Every size-``n`` index tuple (input order) whose sum lies in [lo, hi]."""
    values = [float(v) for v in values]
    _guard(math.comb(len(values), n))
    out = []
    for combo in itertools.combinations(range(len(values)), n):
        s = math.fsum(values[i] for i in combo)
        if lo <= s <= hi:
            out.append(combo)
    return out


def brute_md(x, n, S_L, S_U):
    """Every size-``n`` row tuple whose column sums all lie in [S_L, S_U]."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    lo = np.asarray(S_L, dtype=float).ravel()
    hi = np.asarray(S_U, dtype=float).ravel()
    N, d = x.shape
    _guard(math.comb(N, n))
    out = []
    for combo in itertools.combinations(range(N), n):
        ok = True
        for t in range(d):
            s = math.fsum(x[i, t] for i in combo)
            if not lo[t] <= s <= hi[t]:
                ok = False
                break
        if ok:
            out.append(combo)
    return out


def brute_knapsack(costs, profits, budgets, n=None):
    """(best profit, one best index tuple), or (None, None) if nothing fits.

    ``n=None`` allows every nonempty size. Subsets are enumerated as bit
    masks in chunks and summed with matrix products.
    """
    c = np.asarray(costs, dtype=float)
    if c.ndim == 1:
        c = c[:, None]
    p = np.asarray(profits, dtype=float).ravel()
    b = np.asarray(budgets, dtype=float).ravel()
    N = c.shape[0]
    _guard(2**N)
    bits = np.arange(N, dtype=np.int64)
    best, arg = None, None
    chunk = 1 << 16
    for start in range(1, 2**N, chunk):
        masks = np.arange(start, min(start + chunk, 2**N), dtype=np.int64)
        pick = ((masks[:, None] >> bits) & 1).astype(float)
        ok = (pick @ c <= b).all(axis=1)
        if n is not None:
            ok &= pick.sum(axis=1) == n
        if not ok.any():
            continue
        value = pick[ok] @ p
        i = int(np.argmax(value))
        if best is None or value[i] > best:
            best = float(value[i])
            arg = tuple(int(j) for j in np.flatnonzero(pick[ok][i]))
    return best, arg


def brute_gap(cost, profit, budgets):
    """(best profit, agent per task) over all A^T assignments, or (None, None)."""
    c = np.asarray(cost, dtype=float)
    p = np.asarray(profit, dtype=float)
    b = np.asarray(budgets, dtype=float).ravel()
    T, A = c.shape
    _guard(A**T)
    best, arg = None, None
    for assign in itertools.product(range(A), repeat=T):
        load = [[] for _ in range(A)]
        for task, agent in enumerate(assign):
            load[agent].append(c[task, agent])
        if all(math.fsum(load[a]) <= b[a] for a in range(A)):
            v = math.fsum(p[task, agent] for task, agent in enumerate(assign))
            if best is None or v > best:
                best, arg = v, assign
    return best, arg
