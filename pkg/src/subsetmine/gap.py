"""Exact generalized assignment by block-wise branch and bound.

Each task is a block of A rows, one per agent, sorted by profit and keyed by
profit rank. A single multiplier larger than every cost makes all columns
rise with the key, so a row is fully described by (cost, agent, key): its
scaled value is ``cost + key * M`` in its agent's column and ``key * M``
elsewhere. Exactly one row is taken from each block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import EXHAUSTED, TIMEOUT, Deadline, InvalidInputError, MiningConfig
from .schedule import Incumbent, breadth_first, run_queue


@dataclass(frozen=True)
class GapInstance:
    cost: np.ndarray  # T x A
    profit: np.ndarray  # T x A
    budgets: np.ndarray  # A

    def __post_init__(self):
        c = np.asarray(self.cost, dtype=float)
        p = np.asarray(self.profit, dtype=float)
        b = np.asarray(self.budgets, dtype=float).ravel()
        if c.ndim != 2 or c.shape[0] < 1 or c.shape[1] < 1:
            raise InvalidInputError("cost must be a nonempty T x A matrix")
        if p.shape != c.shape:
            raise InvalidInputError("profit and cost shapes differ")
        if b.shape[0] != c.shape[1]:
            raise InvalidInputError("one budget per agent required")
        for name, a in (("cost", c), ("profit", p), ("budgets", b)):
            if not np.isfinite(a).all():
                raise InvalidInputError(f"non-finite entry in {name}")
        if (c < 0).any():
            raise InvalidInputError("costs must be nonnegative")
        object.__setattr__(self, "cost", c)
        object.__setattr__(self, "profit", p)
        object.__setattr__(self, "budgets", b)

    @property
    def T(self):
        return self.cost.shape[0]

    @property
    def A(self):
        return self.cost.shape[1]


@dataclass(frozen=True)
class CompactRow:
    cost: float
    col: int
    key: int


@dataclass(frozen=True)
class GapSuperset:
    blocks: tuple  # T tuples of A CompactRows, profit ascending
    profits: tuple  # matching original profits
    multiplier: int
    budgets: tuple

    @property
    def T(self):
        return len(self.blocks)

    @property
    def A(self):
        return len(self.budgets)

    def ranked_matrix(self):
        """Block-sorted rows: agent costs on the diagonal pattern, then the rank."""
        out = []
        for block in self.blocks:
            for r in block:
                row = [0.0] * self.A
                row[r.col] = r.cost
                out.append(row + [r.key])
        return out

    def dense_matrix(self):
        """Comonotonized rows as exact fractions; last column is the key."""
        return [dense_row(r, self.A, self.multiplier) for block in self.blocks for r in block]

    def key_sums(self):
        return list(range(self.T * (self.A - 1), -1, -1))

    def target_upper(self):
        """Upper range per key sum, largest key sum first; lower ranges are unbounded."""
        M = self.multiplier
        return [[(Fraction(b) + s * M) / M for b in self.budgets] + [Fraction(s)]
                for s in self.key_sums()]

    def target_lower(self):
        return [[-math.inf] * self.A + [s] for s in self.key_sums()]


def dense_row(r: CompactRow, A, M):
    row = [Fraction(r.key)] * A
    row[r.col] = (Fraction(r.cost) + r.key * M) / M
    return row + [Fraction(r.key)]


def universal_multiplier(cost):
    """Smallest integer strictly above every cost."""
    return int(math.floor(float(np.max(cost)))) + 1


def build_gap_superset(g: GapInstance) -> GapSuperset:
    M = universal_multiplier(g.cost)
    blocks, profits = [], []
    for s in range(g.T):
        order = np.argsort(g.profit[s], kind="stable")
        blocks.append(tuple(CompactRow(float(g.cost[s, a]), int(a), key)
                            for key, a in enumerate(order)))
        profits.append(tuple(float(g.profit[s, a]) for a in order))
    return GapSuperset(tuple(blocks), tuple(profits), M, tuple(float(b) for b in g.budgets))


# compact algebra: a sum of rows is (per-agent cost totals, key total); its
# scaled dense value in column t is cost[t] + key * M


def compact_zero(A):
    return ([0.0] * A, 0)


def compact_add(acc, r: CompactRow):
    cost, key = acc
    cost = list(cost)
    cost[r.col] += r.cost
    return (cost, key + r.key)


def compact_sub(acc, r: CompactRow):
    cost, key = acc
    cost = list(cost)
    cost[r.col] -= r.cost
    return (cost, key - r.key)


def compact_dense(acc, M):
    cost, key = acc
    return [(Fraction(c) + key * M) / M for c in cost] + [Fraction(key)]


def compact_leq_upper(acc, budgets, sigma, M):
    """``acc <= S_U(sigma)`` in every column, compared after scaling by M."""
    cost, key = acc
    if key > sigma:
        return False
    return all(c + key * M <= b + sigma * M for c, b in zip(cost, budgets))


@dataclass
class GapResult:
    assignment: tuple | None  # agent per task
    profit: float | None
    status: str = EXHAUSTED
    nodes: int = 0

    @property
    def proven(self):
        return self.status == EXHAUSTED


class _BlockSearch:
    """Branch and bound over per-block rank intervals for one key sum."""

    def __init__(self, gs: GapSuperset, sigma, incumbent, deadline, prune=True):
        self.sigma = sigma
        self.M = gs.multiplier
        self.budgets = gs.budgets
        self.cost = [[r.cost for r in b] for b in gs.blocks]
        self.col = [[r.col for r in b] for b in gs.blocks]
        self.prof = gs.profits
        self.incumbent = incumbent
        self.deadline = deadline
        self.prune = prune
        self.share = None
        self.nodes = 0

    def contract(self, l, u):
        """Tighten ``l``/``u`` in place; False when the box holds no assignment."""
        T = len(l)
        sigma, M, budgets = self.sigma, self.M, self.budgets
        cost, col = self.cost, self.col
        while True:
            changed = False
            # key total must reach sigma exactly
            lo_sum, hi_sum = sum(l), sum(u)
            if lo_sum > sigma or hi_sum < sigma:
                return False
            for k in range(T):
                a = max(l[k], sigma - (hi_sum - u[k]))
                b = min(u[k], sigma - (lo_sum - l[k]))
                if a > b:
                    return False
                if a != l[k] or b != u[k]:
                    hi_sum += b - u[k]
                    lo_sum += a - l[k]
                    l[k], u[k] = a, b
                    changed = True
            # smallest scaled sum per agent column must stay under the upper range
            low = [0.0] * len(budgets)
            for k in range(T):
                low[col[k][l[k]]] += cost[k][l[k]]
            slack = sigma - lo_sum
            for t, b in enumerate(budgets):
                if low[t] > b + slack * M:
                    return False
            # budget left over by fixed blocks rules out end rows of open blocks
            used = [0.0] * len(budgets)
            for k in range(T):
                if l[k] == u[k]:
                    used[col[k][l[k]]] += cost[k][l[k]]
            for t, b in enumerate(budgets):
                if used[t] > b:
                    return False
            for k in range(T):
                if l[k] == u[k]:
                    continue
                a, b = l[k], u[k]
                while a <= b and used[col[k][a]] + cost[k][a] > budgets[col[k][a]]:
                    a += 1
                while b >= a and used[col[k][b]] + cost[k][b] > budgets[col[k][b]]:
                    b -= 1
                if a > b:
                    return False
                if a != l[k] or b != u[k]:
                    l[k], u[k] = a, b
                    changed = True
                    if a == b:
                        used[col[k][a]] += cost[k][a]
            if not changed:
                return True

    def bound_fails(self, u):
        inc = self.incumbent
        if not self.prune or inc.witness is None:
            return False
        best = 0.0
        for k, j in enumerate(u):
            best += self.prof[k][j]
        return best <= inc.value

    def leaf(self, l):
        used = [0.0] * len(self.budgets)
        profit = 0.0
        for k, j in enumerate(l):
            used[self.col[k][j]] += self.cost[k][j]
            profit += self.prof[k][j]
        if all(c <= b for c, b in zip(used, self.budgets)):
            self.incumbent.offer(profit, tuple(self.col[k][j] for k, j in enumerate(l)))

    def process(self, l, u):
        """Contract and bound a box; return its two halves (upper first) or []."""
        self.nodes += 1
        if self.bound_fails(u) or not self.contract(l, u) or self.bound_fails(u):
            return []
        best, width = -1, None
        for k in range(len(l)):
            w = u[k] - l[k]
            if w and (width is None or w < width):
                best, width = k, w
        if best < 0:
            self.leaf(l)
            return []
        mid = (l[best] + u[best]) >> 1
        lo_l, lo_u = list(l), list(u)
        lo_u[best] = mid
        hi_l, hi_u = list(l), list(u)
        hi_l[best] = mid + 1
        return [(hi_l, hi_u), (lo_l, lo_u)]

    def expand(self, task):
        return self.process(list(task[0]), list(task[1]))

    def run(self, l, u):
        stack = [(list(l), list(u))]
        deadline = self.deadline
        while stack:
            if deadline.check():
                return
            if self.share is not None and len(stack) > 1 and self.share.hungry():
                self.share.put(stack.pop(0))
            box = stack.pop()
            # push the lower half first so the upper half is explored next
            stack.extend(reversed(self.process(*box)))


def solve_gap(g: GapInstance, config=None, phi=16, prune=True):
    """Most profitable assignment of every task to one agent within budgets."""
    config = config or MiningConfig()
    if phi < 1:
        raise InvalidInputError("phi must be >= 1")
    gs = build_gap_superset(g)
    deadline = Deadline(config.deadline())
    incumbent = Incumbent()
    searches = []
    T, A = g.T, g.A
    for sigma in gs.key_sums():
        if deadline.check():
            break

        def make(sigma=sigma):
            s = _BlockSearch(gs, sigma, incumbent, deadline, prune)
            searches.append(s)
            return s

        root = ([0] * T, [A - 1] * T)
        tasks = breadth_first(root, make().expand, config.threads * phi)
        run_queue(tasks, make, config.threads, deadline)
    nodes = sum(s.nodes for s in searches)
    status = TIMEOUT if deadline.stopped == TIMEOUT else EXHAUSTED
    if incumbent.witness is None:
        return GapResult(None, None, status, nodes)
    return GapResult(incumbent.witness, incumbent.value, status, nodes)
