import numpy as np
import pytest

from subsetmine.core import IndexBounds, InvalidInputError, MiningConfig, TargetRange
from subsetmine.oracle import brute_1d
from subsetmine.solver1d import solve_bounded, solve_fixed, solve_range, solve_variable

from .helpers import GOLDEN_X, dyadic, instance_1d


def _all_sizes(values, lo, hi):
    out = []
    for n in range(1, len(values) + 1):
        out.extend(brute_1d(values, n, lo, hi))
    return sorted(out)


def test_golden_target():
    res = solve_fixed(GOLDEN_X, 5, 817, 4)
    assert res.solutions
    for s in res.solutions:
        assert 813 <= sum(GOLDEN_X[i] for i in s.indexes) <= 821
        assert s.achieved_sum == sum(GOLDEN_X[i] for i in s.indexes)


def test_unsorted_input_indexes():
    vals = [9.0, 1.0, 5.0, 3.0]
    res = solve_fixed(vals, 2, 8, 0)
    assert res.index_sets() == [(2, 3)]


def test_whole_set():
    vals = [3.0, 1.0, 2.0]
    assert solve_fixed(vals, 3, 6, 0).index_sets() == [(0, 1, 2)]
    assert solve_fixed(vals, 3, 7, 0.5).index_sets() == []


def test_fixed_matches_oracle(rng):
    for _ in range(150):
        x, n, t = instance_1d(rng)
        me = float(rng.choice([0.0, 1.0]))
        assert solve_fixed(x, n, t, me).index_sets() == brute_1d(x, n, t - me, t + me)


def test_planted_always_found(rng):
    for _ in range(100):
        N = int(rng.integers(2, 22))
        x = rng.choice(2**40, N, replace=False).astype(float)
        n = int(rng.integers(1, N + 1))
        planted = tuple(sorted(rng.choice(N, n, replace=False).tolist()))
        res = solve_fixed(x, n, float(x[list(planted)].sum()), 0)
        assert planted in res.index_sets()


def test_variable_hand_example():
    for strategy in ("loop-sizes", "pad-zeros"):
        assert solve_variable([1, 2, 3], 3, 0, strategy=strategy).index_sets() == [(0, 1), (2,)]


def test_variable_target_too_large():
    assert solve_variable([1, 2, 3], 10, 0.5).index_sets() == []


def test_strategies_agree(rng):
    for _ in range(100):
        N = int(rng.integers(1, 13))
        x = dyadic(rng, N, -10, 30)
        t = float(x[rng.choice(N, int(rng.integers(1, N + 1)), replace=False)].sum())
        me = float(rng.choice([0.0, 0.5]))
        a = solve_variable(x, t, me, strategy="loop-sizes").index_sets()
        b = solve_variable(x, t, me, strategy="pad-zeros").index_sets()
        assert a == b == _all_sizes(x, t - me, t + me)


def test_variable_threads(rng):
    x = dyadic(rng, 12, 0, 20)
    t = float(x[:4].sum())
    one = solve_variable(x, t, 0.25).index_sets()
    four = solve_variable(x, t, 0.25, MiningConfig(threads=4)).index_sets()
    assert one == four


def test_variable_quota():
    res = solve_variable(list(range(1, 15)), 20, 0, MiningConfig(max_solutions=3))
    assert len(res) == 3 and res.status == "quota"
    with pytest.raises(InvalidInputError):
        solve_variable([1, 2], 3, 0, strategy="bogus")


def test_bounded_full_box_equals_fixed(rng):
    for _ in range(50):
        x, n, t = instance_1d(rng)
        r = TargetRange.around(t, 0.5)
        N = len(x)
        box = IndexBounds(list(range(n)), list(range(N - n, N)))
        assert solve_bounded(x, n, r, box).index_sets() == solve_range(x, n, r).index_sets()


def test_bounded_excluding_solution():
    vals = [1.0, 2, 3, 4, 10]
    r = TargetRange(14, 14)
    assert solve_range(vals, 2, r).index_sets() == [(3, 4)]
    assert solve_bounded(vals, 2, r, IndexBounds([0, 1], [2, 3])).index_sets() == []


def test_bounded_respects_box(rng):
    for _ in range(60):
        x, n, t = instance_1d(rng, max_N=12)
        N = len(x)
        xs = np.sort(x)
        order = np.argsort(x, kind="stable")
        lo = sorted(rng.choice(N, n, replace=False).tolist())
        lo = [min(v, N - n + k) for k, v in enumerate(lo)]
        for k in range(1, n):
            lo[k] = max(lo[k], lo[k - 1] + 1)
        hi = [min(N - n + k, lo[k] + int(rng.integers(0, 4))) for k in range(n)]
        for k in range(1, n):
            hi[k] = max(hi[k], hi[k - 1] + 1)
        box = IndexBounds(lo, hi)
        r = TargetRange.around(t, 2.0)
        got = solve_bounded(x, n, r, box).index_sets()
        want = sorted(tuple(sorted(int(order[p]) for p in c))
                      for c in brute_1d(xs, n, r.min, r.max)
                      if all(lo[k] <= c[k] <= hi[k] for k in range(n)))
        assert got == want


def test_bounded_rejects_bad_box():
    with pytest.raises(InvalidInputError):
        solve_bounded([1, 2, 3], 2, TargetRange(0, 9), IndexBounds([1, 0], [2, 2]))
