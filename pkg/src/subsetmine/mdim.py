"""Multidimensional fixed-size subset sum.

The superset (N rows, d columns) gets an extra integer key column that makes
all columns rise together once each column is offset by ``key * theta``. Every
achievable key sum then defines one ordinary range to mine, with the 1-D
engine running on vector-valued elements under the component-wise order.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .contraction import build_matrix, vector_algebra
from .core import (
    EXHAUSTED,
    QUOTA,
    Deadline,
    InvalidInputError,
    MiningConfig,
    MiningResult,
    Solution,
    SubsetMineError,
)
from .schedule import run_counter
from .subspacing import Miner

DEFAULT_ROW_CAP = 10**6


class RowCapError(SubsetMineError):
    pass


def as_superset_md(x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] < 1:
        raise InvalidInputError("superset must be a nonempty N x d matrix")
    if not np.isfinite(x).all():
        bad = np.argwhere(~np.isfinite(x))[0]
        raise InvalidInputError(f"non-finite value at row {bad[0]}, column {bad[1]}")
    return x


@dataclass
class Comonotonized:
    star: np.ndarray  # N x (d + 1); last column is the key column
    theta: np.ndarray
    leader: int
    row_perm: np.ndarray  # sorted row -> original row

    @property
    def key(self):
        return self.star[:, -1]


@dataclass
class TargetTable:
    rows_lower: np.ndarray
    rows_upper: np.ndarray
    key_sums: np.ndarray
    order: list

    def __len__(self):
        return len(self.key_sums)


def leader_column(x):
    """Column with the largest summed Spearman correlation against the others."""
    d = x.shape[1]
    if d == 1 or x.shape[0] < 2:
        return 0
    ranks = np.column_stack([rankdata(x[:, t]) for t in range(d)])
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = np.corrcoef(ranks, rowvar=False)
    corr = np.nan_to_num(corr, nan=0.0)
    score = corr.sum(axis=0) - np.diag(corr)
    return int(np.argmax(score))


def key_column(x):
    """0, then +1 whenever a row fails to dominate its predecessor."""
    N = x.shape[0]
    v = np.zeros(N, dtype=np.int64)
    for s in range(1, N):
        v[s] = v[s - 1] + (0 if (x[s - 1] <= x[s]).all() else 1)
    return v


def multipliers(x):
    if x.shape[0] < 2:
        return np.zeros(x.shape[1], dtype=x.dtype)
    return np.abs(np.minimum(0, np.diff(x, axis=0).min(axis=0)))


def comonotonize(x, leader_sort=True) -> Comonotonized:
    x = np.asarray(x)
    leader = leader_column(x)
    if leader_sort:
        perm = np.argsort(x[:, leader], kind="stable")
    else:
        perm = np.arange(x.shape[0])
    xs = x[perm]
    v = key_column(xs)
    theta = multipliers(xs)
    cols = xs + v[:, None] * theta
    if cols.dtype.kind == "f":
        # float rounding may undo the dominance chain by an ulp
        cols = np.maximum.accumulate(cols, axis=0)
    star = np.column_stack([cols, v.astype(cols.dtype)])
    return Comonotonized(star, theta, leader, perm)


def key_sum_range(key, n):
    key = np.sort(key)
    return int(key[:n].sum()), int(key[len(key) - n:].sum())


def build_targets(c: Comonotonized, n, S_L, S_U, row_cap=DEFAULT_ROW_CAP) -> TargetTable:
    S_L = np.asarray(S_L)
    S_U = np.asarray(S_U)
    if (S_L > S_U).any():
        raise InvalidInputError("lower target exceeds upper target")
    N = c.star.shape[0]
    if not 1 <= n <= N:
        raise InvalidInputError(f"need 1 <= n <= N, got n={n}, N={N}")
    lo_key, hi_key = key_sum_range(c.key, n)
    count = hi_key - lo_key + 1
    if count > row_cap:
        raise RowCapError(f"{count} target rows exceed the cap of {row_cap}")
    keys = np.arange(lo_key, hi_key + 1)
    lower = np.column_stack([keys[:, None] * c.theta + S_L, keys])
    upper = np.column_stack([keys[:, None] * c.theta + S_U, keys])
    return TargetTable(lower, upper, keys, list(range(count)))


def order_targets(tt: TargetTable, c: Comonotonized, n, S_L, S_U):
    """Rows whose normalised key sum sits nearest the leader's target percentile first."""
    NS = len(tt.key_sums)
    natural = list(range(NS))
    if NS == 1:
        return natural
    col = np.sort(c.star[:, c.leader] - c.key * c.theta[c.leader])
    low = col[:n].sum()
    high = col[len(col) - n:].sum()
    if high == low:
        return natural
    t = c.leader
    p = ((S_L[t] + S_U[t]) / 2 - low) / (high - low)
    keys = tt.key_sums
    span = keys[-1] - keys[0]
    pos = (keys - keys[0]) / span
    dist = np.abs(pos - p)
    return sorted(natural, key=lambda s: (dist[s], keys[s]))


def mine_table(elems, cols, alg, lows, highs, order, config, on_solution,
               variant="binary", deadline=None):
    """Mine every target row in ``order`` with ``config.threads`` workers.

    ``on_solution(sorted_positions)`` returns True when the quota is met.
    """
    deadline = deadline or Deadline(config.deadline())
    lock = threading.Lock()
    nodes = [0]

    def on_leaf(buf):
        with lock:
            if on_solution(tuple(sorted(buf))):
                deadline.stop(QUOTA)
                return True
        return False

    def work(i):
        s = order[i]
        miner = Miner(elems, cols, alg, config.use_binary_search_in_contraction,
                      variant, deadline, on_leaf)
        miner.run(list(range(n)), [N - n + k for k in range(n)], lows[s], highs[s])
        with lock:
            nodes[0] += miner.nodes

    N = len(elems)
    n = len(cols)
    run_counter(len(order), work, config.threads, deadline)
    return deadline.stopped or EXHAUSTED, nodes[0]


def solve_md(x, n, target, me, config=None, *, leader_sort=True, order_rows=True,
             variant="binary", row_cap=DEFAULT_ROW_CAP):
    """Size-``n`` row subsets whose column sums lie in ``target -/+ me``."""
    config = config or MiningConfig()
    x = as_superset_md(x)
    target = np.broadcast_to(np.asarray(target, dtype=float), (x.shape[1],))
    me = np.broadcast_to(np.asarray(me, dtype=float), (x.shape[1],))
    if (me < 0).any():
        raise InvalidInputError("me must be nonnegative")
    S_L, S_U = target - me, target + me
    return solve_md_range(x, n, S_L, S_U, config, leader_sort=leader_sort,
                          order_rows=order_rows, variant=variant, row_cap=row_cap)


def solve_md_range(x, n, S_L, S_U, config=None, *, leader_sort=True, order_rows=True,
                   variant="binary", row_cap=DEFAULT_ROW_CAP):
    config = config or MiningConfig()
    x = as_superset_md(x)
    S_L = np.asarray(S_L, dtype=float)
    S_U = np.asarray(S_U, dtype=float)
    N, d = x.shape
    if not 1 <= n <= N:
        raise InvalidInputError(f"need 1 <= n <= N, got n={n}, N={N}")
    c = comonotonize(x, leader_sort)
    tt = build_targets(c, n, S_L, S_U, row_cap)
    order = order_targets(tt, c, n, S_L, S_U) if order_rows else list(range(len(tt)))
    alg = vector_algebra(d + 1)
    elems = [alg.lift(r) for r in c.star]
    lows = [alg.lift(r) for r in tt.rows_lower]
    highs = [alg.lift(r) for r in tt.rows_upper]
    matrix = build_matrix(elems, n)
    result = MiningResult()
    quota = config.max_solutions
    perm = c.row_perm

    def on_solution(pos):
        idx = tuple(sorted(int(perm[i]) for i in pos))
        total = np.zeros(d)
        for i in idx:
            total = total + x[i]
        if (S_L <= total).all() and (total <= S_U).all():
            result.solutions.append(Solution(idx, tuple(float(v) for v in total)))
        return quota is not None and len(result.solutions) >= quota

    status, nodes = mine_table(elems, matrix.cols, alg, lows, highs, order, config,
                               on_solution, variant)
    result.status = status
    result.nodes = nodes
    return result
