"""Shared vocabulary for every solver: supersets, ranges, index bounds, results."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class SubsetMineError(Exception):
    pass


class InfeasibleSizeError(SubsetMineError, ValueError):
    pass


class InvalidInputError(SubsetMineError, ValueError):
    pass


EXHAUSTED = "exhausted"
QUOTA = "quota"
TIMEOUT = "timeout"


@dataclass(frozen=True)
class Superset1D:
    elems: tuple

    def __post_init__(self):
        if len(self.elems) < 1:
            raise InvalidInputError("superset must be nonempty")
        for k in range(len(self.elems) - 1):
            if self.elems[k] > self.elems[k + 1]:
                raise InvalidInputError(f"superset not sorted at position {k}")

    def __len__(self):
        return len(self.elems)


@dataclass(frozen=True)
class TargetRange:
    min: float
    max: float

    def __post_init__(self):
        if not self.min <= self.max:
            raise InvalidInputError(f"empty target range [{self.min}, {self.max}]")

    @classmethod
    def around(cls, target, me):
        if me < 0:
            raise InvalidInputError("me must be nonnegative")
        return cls(target - me, target + me)

    def __contains__(self, value):
        return self.min <= value <= self.max


@dataclass
class IndexBounds:
    """Per-position index bounds ``lower[k] <= i_k <= upper[k]``."""

    lower: list
    upper: list

    def __post_init__(self):
        self.lower = [int(v) for v in self.lower]
        self.upper = [int(v) for v in self.upper]
        if len(self.lower) != len(self.upper):
            raise InvalidInputError("lower and upper bounds differ in length")

    def __len__(self):
        return len(self.lower)

    def validate(self, N, ordered=True):
        n = len(self.lower)
        for k in range(n):
            if not 0 <= self.lower[k] <= self.upper[k] < N:
                raise InvalidInputError(f"bounds invalid at position {k}")
            if ordered and k and (
                self.lower[k] <= self.lower[k - 1] or self.upper[k] <= self.upper[k - 1]
            ):
                raise InvalidInputError(f"bounds not strictly increasing at position {k}")

    def copy(self):
        return IndexBounds(list(self.lower), list(self.upper))

    def contains(self, indexes):
        return all(lo <= i <= hi for lo, i, hi in zip(self.lower, indexes, self.upper))


@dataclass(frozen=True)
class Solution:
    indexes: tuple
    achieved_sum: object

    def to_json(self):
        s = self.achieved_sum
        if isinstance(s, (tuple, list, np.ndarray)):
            s = [float(v) for v in s]
        else:
            s = float(s)
        return {"indexes": [int(i) for i in self.indexes], "sum": s}


@dataclass
class MiningConfig:
    max_solutions: int | None = None
    time_limit: float | None = None
    threads: int = 1
    use_binary_search_in_contraction: bool = False

    def __post_init__(self):
        if self.threads < 1:
            raise InvalidInputError("threads must be >= 1")
        if self.time_limit is not None and not self.time_limit > 0:
            raise InvalidInputError("time_limit must be positive")
        if self.max_solutions is not None and self.max_solutions < 1:
            raise InvalidInputError("max_solutions must be positive")

    def deadline(self):
        if self.time_limit is None:
            return math.inf
        return time.monotonic() + self.time_limit


@dataclass
class MiningResult:
    solutions: list = field(default_factory=list)
    status: str = EXHAUSTED
    approximate: bool = False
    nodes: int = 0

    def index_sets(self):
        return sorted(tuple(s.indexes) for s in self.solutions)

    def __len__(self):
        return len(self.solutions)


def make_superset(values: Sequence[float]):
    """Sort values into a Superset1D; return it with the sorted->input permutation."""
    vals = list(values)
    if not vals:
        raise InvalidInputError("superset must be nonempty")
    for i, v in enumerate(vals):
        if not math.isfinite(v):
            raise InvalidInputError(f"non-finite value at input index {i}")
    perm = sorted(range(len(vals)), key=vals.__getitem__)
    return Superset1D(tuple(float(vals[i]) for i in perm)), tuple(perm)


def initial_bounds(N: int, n: int) -> IndexBounds:
    if not 1 <= n:
        raise InfeasibleSizeError("subset size must be at least 1")
    if n > N:
        raise InfeasibleSizeError(f"subset size {n} exceeds superset size {N}")
    return IndexBounds(list(range(n)), [N - n + k for k in range(n)])


class Deadline:
    """Shared stop flag polled by search workers."""

    def __init__(self, at=math.inf):
        self.at = at
        self.stopped = None

    def stop(self, status):
        if self.stopped is None:
            self.stopped = status

    def check(self):
        if self.stopped is None and self.at != math.inf and time.monotonic() > self.at:
            self.stopped = TIMEOUT
        return self.stopped is not None
