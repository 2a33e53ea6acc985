"""Multi-subset sum: one subset from each of K supersets, joint sum in a range.

Supersets are shifted so that, pooled end to end, they form one nondecreasing
superset; the target range moves by the total shift and each block's indexes
are confined to that block.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    IndexBounds,
    InvalidInputError,
    MiningConfig,
    MiningResult,
    Superset1D,
    TargetRange,
    make_superset,
)
from .subspacing import mine


@dataclass(frozen=True)
class MultiInstance:
    supersets: tuple
    sizes: tuple
    range: TargetRange

    def __post_init__(self):
        if len(self.supersets) != len(self.sizes) or not self.supersets:
            raise InvalidInputError("need one subset size per superset")
        for h, (s, n) in enumerate(zip(self.supersets, self.sizes)):
            if not 1 <= n <= len(s):
                raise InvalidInputError(f"subset size {n} invalid for superset {h}")


@dataclass(frozen=True)
class PooledInstance:
    pooled: Superset1D
    adjusted_range: TargetRange
    block_bounds: IndexBounds
    offsets: tuple
    starts: tuple


@dataclass(frozen=True)
class MultiSolution:
    picks: tuple  # per superset, a sorted tuple of input indexes
    achieved_sum: float


def pool(mi: MultiInstance) -> PooledInstance:
    pooled = []
    offsets = []
    starts = []
    prev_last = None
    for s in mi.supersets:
        elems = s.elems
        off = 0.0 if prev_last is None else prev_last - elems[0]
        starts.append(len(pooled))
        if prev_last is None:
            shifted = list(elems)
        else:
            shifted = [v - elems[0] + prev_last for v in elems]
        # rounding must not break the global order at the seam
        if prev_last is not None and shifted[0] < prev_last:
            shifted[0] = prev_last
        pooled.extend(shifted)
        offsets.append(off)
        prev_last = shifted[-1]
    shift = sum(off * n for off, n in zip(offsets, mi.sizes))
    width = mi.range.max - mi.range.min
    lo = mi.range.min + shift
    adjusted = TargetRange(lo, lo + width)
    lower, upper = [], []
    for h, (s, n) in enumerate(zip(mi.supersets, mi.sizes)):
        start = starts[h]
        for j in range(n):
            lower.append(start + j)
            upper.append(start + len(s) - n + j)
    return PooledInstance(Superset1D(tuple(pooled)), adjusted,
                          IndexBounds(lower, upper), tuple(offsets), tuple(starts))


def solve_multi(supersets, sizes, rng: TargetRange, config=None):
    """Solve from raw (unsorted) supersets; picks are reported in input indexes."""
    config = config or MiningConfig()
    sorted_sets, perms, raw = [], [], []
    for vals in supersets:
        vals = [float(v) for v in vals]
        s, perm = make_superset(vals)
        sorted_sets.append(s)
        perms.append(perm)
        raw.append(vals)
    mi = MultiInstance(tuple(sorted_sets), tuple(sizes), rng)
    pi = pool(mi)
    res = mine(pi.pooled, sum(sizes), pi.adjusted_range, config, bounds=pi.block_bounds.copy())
    out = MiningResult(status=res.status, nodes=res.nodes)
    for sol in res.solutions:
        picks = [[] for _ in sizes]
        for p in sol.indexes:
            h = _block_of(pi.starts, p)
            picks[h].append(perms[h][p - pi.starts[h]])
        picks = tuple(tuple(sorted(p)) for p in picks)
        total = 0.0
        for h, p in enumerate(picks):
            for i in p:
                total += raw[h][i]
        if rng.min <= total <= rng.max:
            out.solutions.append(MultiSolution(picks, total))
    return out


def _block_of(starts, p):
    h = 0
    while h + 1 < len(starts) and starts[h + 1] <= p:
        h += 1
    return h
