import numpy as np


def dyadic(rng, shape, lo, hi, denom=8):
    """Values k / denom: sums of a few of them are exact in double precision."""
    return rng.integers(int(lo * denom), int(hi * denom) + 1, size=shape) / denom


def instance_1d(rng, max_N=14, max_n=6):
    N = int(rng.integers(1, max_N + 1))
    n = int(rng.integers(1, min(N, max_n) + 1))
    x = dyadic(rng, N, -50, 100)
    planted = rng.choice(N, n, replace=False)
    target = float(x[planted].sum())
    if rng.random() < 0.3:
        target += float(dyadic(rng, (), -5, 5))
    return x, n, target


def instance_md(rng, max_N=14, max_d=4, max_n=5):
    N = int(rng.integers(1, max_N + 1))
    d = int(rng.integers(1, max_d + 1))
    n = int(rng.integers(1, min(N, max_n) + 1))
    x = dyadic(rng, (N, d), -20, 40, 4)
    sums = x[rng.choice(N, n, replace=False)].sum(axis=0)
    me = dyadic(rng, d, 0, 6, 4)
    return x, n, sums, me


GOLDEN_X = (14, 60, 134, 135, 141, 192, 199, 203, 207, 234)


def random_layout(rng, max_d=14, max_bits=24):
    from subsetmine.packedint import layout_from_bits

    d = int(rng.integers(1, max_d + 1))
    return layout_from_bits([int(b) for b in rng.integers(3, max_bits + 1, d)])


def packed_fuzz(rng, cases, batch=20000):
    """Packed add/sub/leq against plain int64 ops; returns (cases checked, mismatches)."""
    from subsetmine.packedint import packed_add, packed_leq, packed_sub, pack_rows, unpack_rows

    done = bad = 0
    while done < cases:
        lay = random_layout(rng)
        m = min(batch, cases - done)
        psi = np.array(lay.psi, dtype=np.int64)
        half = psi // 2
        a = rng.integers(-half, half + 1, (m, len(psi)))
        # b dominates a on most rows; some rows get one negative column or equality
        delta = rng.integers(0, half + 1, (m, len(psi)))
        flip = np.flatnonzero(rng.random(m) < 0.4)
        cols = rng.integers(0, len(psi), len(flip))
        delta[flip, cols] = -rng.integers(1, half[cols] + 1)
        delta[rng.random(m) < 0.1] = 0
        b = np.clip(a + delta, -half, half)
        pa, pb = pack_rows(a, lay), pack_rows(b, lay)
        bad += int((unpack_rows(pa, lay) != a).any(axis=1).sum())
        bad += int((unpack_rows(packed_add(pa, pb), lay) != a + b).any(axis=1).sum())
        bad += int((unpack_rows(packed_sub(pa, pb), lay) != a - b).any(axis=1).sum())
        bad += int((packed_leq(pa, pb, lay) != (a <= b).all(axis=1)).sum())
        bad += int((packed_leq(pb, pa, lay) != (b <= a).all(axis=1)).sum())
        done += m
    return done, bad


def knapsack_data(rng, max_N=18, max_d=3):
    """Costs, profits and budgets set to 5-30% of each cost column's total."""
    N = int(rng.integers(1, max_N + 1))
    d = int(rng.integers(1, max_d + 1))
    costs = dyadic(rng, (N, d), 0.25, 50, 4)
    profits = dyadic(rng, N, 1, 100, 4)
    budgets = np.floor(costs.sum(axis=0) * rng.uniform(0.05, 0.3, d) * 4) / 4
    return costs, profits, budgets


def gap_data(rng, max_T=7, max_A=5):
    T = int(rng.integers(1, max_T + 1))
    A = int(rng.integers(1, max_A + 1))
    cost = rng.integers(1, 30, (T, A)).astype(float)
    profit = rng.integers(1, 500, (T, A)).astype(float)
    # roughly T/A tasks per agent fit, sometimes fewer
    budgets = np.floor(cost.mean(axis=0) * rng.uniform(0.5, 1.5, A) * max(1.0, T / A))
    return cost, profit, budgets
