"""Exact multidimensional 0-1 knapsack on top of the multidimensional miner.

Items are sorted by profit, so the largest profit any subset inside an index
box can reach is the profit summed over the box's upper bounds. That bound is
checked against the incumbent after every contraction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contraction import build_matrix, vector_algebra
from .core import (
    EXHAUSTED,
    TIMEOUT,
    Deadline,
    InvalidInputError,
    MiningConfig,
    Solution,
)
from .mdim import DEFAULT_ROW_CAP, build_targets, comonotonize
from .schedule import Incumbent, breadth_first, run_queue
from .subspacing import Miner


@dataclass(frozen=True)
class KnapsackInstance:
    costs: np.ndarray
    profits: np.ndarray
    budgets: np.ndarray
    n: int | None = None

    def __post_init__(self):
        costs = np.asarray(self.costs, dtype=float)
        if costs.ndim == 1:
            costs = costs[:, None]
        profits = np.asarray(self.profits, dtype=float).ravel()
        budgets = np.asarray(self.budgets, dtype=float).ravel()
        if costs.ndim != 2 or costs.shape[0] < 1:
            raise InvalidInputError("costs must be a nonempty N x d matrix")
        if profits.shape[0] != costs.shape[0]:
            raise InvalidInputError("one profit per item required")
        if budgets.shape[0] != costs.shape[1]:
            raise InvalidInputError("one budget per cost column required")
        for name, a in (("costs", costs), ("profits", profits), ("budgets", budgets)):
            if not np.isfinite(a).all():
                raise InvalidInputError(f"non-finite entry in {name}")
        if self.n is not None and not 1 <= self.n <= costs.shape[0]:
            raise InvalidInputError(f"subset size {self.n} out of range")
        object.__setattr__(self, "costs", costs)
        object.__setattr__(self, "profits", profits)
        object.__setattr__(self, "budgets", budgets)

    @property
    def N(self):
        return self.costs.shape[0]

    def with_size(self, n):
        return KnapsackInstance(self.costs, self.profits, self.budgets, n)


@dataclass
class KnapsackResult:
    solution: Solution | None  # achieved_sum holds the per-column cost sums
    profit: float | None
    status: str = EXHAUSTED
    nodes: int = 0

    @property
    def proven(self):
        return self.status == EXHAUSTED


def _feasible(inst, idx):
    total = np.zeros(inst.costs.shape[1])
    for i in idx:
        total = total + inst.costs[i]
    return bool((total <= inst.budgets).all()), total


def _mine_size(inst, n, config, phi, prune, incumbent, deadline):
    """Search every size-``n`` subset; improvements go to ``incumbent``."""
    order = np.argsort(inst.profits, kind="stable")
    costs = inst.costs[order]
    profits = [float(v) for v in inst.profits[order]]
    S_L = np.sort(costs, axis=0)[:n].sum(axis=0)
    if (S_L > inst.budgets).any():
        return 0
    c = comonotonize(costs, leader_sort=False)
    tt = build_targets(c, n, S_L, inst.budgets, DEFAULT_ROW_CAP)
    d1 = costs.shape[1] + 1
    alg = vector_algebra(d1)
    elems = [alg.lift(r) for r in c.star]
    cols = build_matrix(elems, n).cols
    N = len(elems)
    nodes = [0]

    def on_leaf(buf):
        idx = tuple(sorted(int(order[i]) for i in buf))
        ok, _ = _feasible(inst, idx)
        if ok:
            incumbent.offer(sum(float(inst.profits[i]) for i in idx), idx)
        return False

    def bound(f, buf):
        if incumbent.witness is None:
            return False
        best = 0.0
        for i in buf:
            best += profits[i]
        for i in f.u:
            best += profits[i]
        return best <= incumbent.value

    def make_miner():
        m = Miner(elems, cols, alg, config.use_binary_search_in_contraction,
                  "binary", deadline, on_leaf, bound if prune else None)
        miners.append(m)
        return m

    miners = []
    # largest key sums first: they hold the most profitable items
    for s in range(len(tt) - 1, -1, -1):
        if deadline.check():
            break
        root = (list(range(n)), [N - n + k for k in range(n)],
                alg.lift(tt.rows_lower[s]), alg.lift(tt.rows_upper[s]), ())
        seeder = make_miner()
        tasks = breadth_first(root, seeder.expand, config.threads * phi)
        run_queue(tasks, make_miner, config.threads, deadline)
    nodes[0] = sum(m.nodes for m in miners)
    return nodes[0]


def _result(inst, incumbent, deadline, nodes):
    status = TIMEOUT if deadline.stopped == TIMEOUT else EXHAUSTED
    if incumbent.witness is None:
        return KnapsackResult(None, None, status, nodes)
    idx = incumbent.witness
    _, total = _feasible(inst, idx)
    sol = Solution(idx, tuple(float(v) for v in total))
    return KnapsackResult(sol, incumbent.value, status, nodes)


def solve_mf01k(inst: KnapsackInstance, config=None, phi=16, prune=True):
    """Most profitable subset of exactly ``inst.n`` items within the budgets."""
    config = config or MiningConfig()
    if inst.n is None:
        raise InvalidInputError("fixed-size knapsack needs a subset size")
    if phi < 1:
        raise InvalidInputError("phi must be >= 1")
    deadline = Deadline(config.deadline())
    incumbent = Incumbent()
    nodes = _mine_size(inst, inst.n, config, phi, prune, incumbent, deadline)
    return _result(inst, incumbent, deadline, nodes)


def solve_01(inst: KnapsackInstance, config=None, phi=16, prune=True):
    """Most profitable subset of any size, trying every size in turn."""
    config = config or MiningConfig()
    if phi < 1:
        raise InvalidInputError("phi must be >= 1")
    deadline = Deadline(config.deadline())
    incumbent = Incumbent()
    nodes = 0
    for n in range(1, inst.N + 1):
        if deadline.check():
            break
        nodes += _mine_size(inst, n, config, phi, prune, incumbent, deadline)
    return _result(inst, incumbent, deadline, nodes)
