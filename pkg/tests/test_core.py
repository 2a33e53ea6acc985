import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from subsetmine.core import (
    Deadline,
    IndexBounds,
    InfeasibleSizeError,
    InvalidInputError,
    MiningConfig,
    Solution,
    Superset1D,
    TargetRange,
    initial_bounds,
    make_superset,
)

from .helpers import GOLDEN_X


def test_make_superset_sorts_and_reports_permutation():
    s, perm = make_superset([3, 1, 2])
    assert s.elems == (1, 2, 3)
    assert perm == (1, 2, 0)


def test_make_superset_keeps_sorted_input():
    s, perm = make_superset(GOLDEN_X)
    assert s.elems == GOLDEN_X
    assert perm == tuple(range(10))


def test_make_superset_stable_on_ties():
    _, perm = make_superset([2, 1, 2, 1])
    assert perm == (1, 3, 0, 2)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_make_superset_rejects_non_finite(bad):
    with pytest.raises(InvalidInputError, match="index 2"):
        make_superset([1.0, 2.0, bad])


def test_make_superset_rejects_empty():
    with pytest.raises(InvalidInputError):
        make_superset([])


def test_uniform_round_trip(rng):
    vals = rng.uniform(0, 1e6, 1000)
    s, perm = make_superset(vals)
    assert list(s.elems) == sorted(vals)
    back = np.empty(1000)
    back[list(perm)] = s.elems
    assert (back == vals).all()


@given(st.lists(st.floats(-1e9, 1e9), min_size=1, max_size=50))
def test_permutation_round_trip(values):
    s, perm = make_superset(values)
    assert all(s.elems[k] == values[perm[k]] for k in range(len(values)))
    assert sorted(perm) == list(range(len(values)))


def test_superset_requires_sorted():
    with pytest.raises(InvalidInputError):
        Superset1D((2.0, 1.0))


@pytest.mark.parametrize("N,n,lo,hi", [
    (10, 5, [0, 1, 2, 3, 4], [5, 6, 7, 8, 9]),
    (3, 3, [0, 1, 2], [0, 1, 2]),
    (6, 1, [0], [5]),
])
def test_initial_bounds(N, n, lo, hi):
    b = initial_bounds(N, n)
    assert b.lower == lo and b.upper == hi


@pytest.mark.parametrize("N,n", [(3, 4), (3, 0)])
def test_initial_bounds_infeasible(N, n):
    with pytest.raises(InfeasibleSizeError):
        initial_bounds(N, n)


def test_target_range():
    r = TargetRange.around(817, 4)
    assert (r.min, r.max) == (813, 821)
    assert 813 in r and 822 not in r
    with pytest.raises(InvalidInputError):
        TargetRange(2, 1)
    with pytest.raises(InvalidInputError):
        TargetRange.around(0, -1)


def test_index_bounds_validation():
    IndexBounds([0, 2], [1, 3]).validate(4)
    with pytest.raises(InvalidInputError):
        IndexBounds([0, 0], [1, 3]).validate(4)
    with pytest.raises(InvalidInputError):
        IndexBounds([0, 2], [1, 4]).validate(4)
    with pytest.raises(InvalidInputError):
        IndexBounds([0], [1, 2])


def test_config_validation():
    with pytest.raises(InvalidInputError):
        MiningConfig(threads=0)
    with pytest.raises(InvalidInputError):
        MiningConfig(time_limit=0)
    with pytest.raises(InvalidInputError):
        MiningConfig(max_solutions=0)
    assert MiningConfig().deadline() == math.inf


def test_deadline_flags_timeout():
    d = Deadline(0.0)
    assert d.check()
    assert d.stopped == "timeout"
    d = Deadline()
    d.stop("quota")
    d.stop("timeout")
    assert d.stopped == "quota"


def test_solution_json():
    assert Solution((0, 3), 5.0).to_json() == {"indexes": [0, 3], "sum": 5.0}
    assert Solution((1,), np.array([1.0, 2.0])).to_json()["sum"] == [1.0, 2.0]
