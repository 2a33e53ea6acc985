"""Exact subset sum mining by index-bound contraction and branch and bound."""

from .core import (
    EXHAUSTED,
    QUOTA,
    TIMEOUT,
    IndexBounds,
    InfeasibleSizeError,
    InvalidInputError,
    MiningConfig,
    MiningResult,
    Solution,
    SubsetMineError,
    Superset1D,
    TargetRange,
    make_superset,
)
from .gap import GapInstance, solve_gap
from .knapsack import KnapsackInstance, solve_01, solve_mf01k
from .mdim import solve_md
from .multiset import solve_multi
from .packedint import solve_md_integerized
from .solver1d import solve_fixed, solve_range, solve_variable

__all__ = [
    "EXHAUSTED", "QUOTA", "TIMEOUT", "IndexBounds", "InfeasibleSizeError",
    "InvalidInputError", "MiningConfig", "MiningResult", "Solution", "SubsetMineError",
    "Superset1D", "TargetRange", "make_superset", "GapInstance", "solve_gap",
    "KnapsackInstance", "solve_01", "solve_mf01k", "solve_md", "solve_multi",
    "solve_md_integerized", "solve_fixed", "solve_range", "solve_variable",
]
