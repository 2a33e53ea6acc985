"""One-dimensional solving surface over unsorted input values."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from .core import (
    EXHAUSTED,
    QUOTA,
    TIMEOUT,
    IndexBounds,
    InvalidInputError,
    MiningConfig,
    MiningResult,
    Solution,
    TargetRange,
    make_superset,
)
from .subspacing import mine


def _resum(values, idx):
    total = 0.0
    for i in idx:
        total += values[i]
    return total


def _to_input_order(values, perm, res, rng):
    """Map sorted positions back to input positions and re-check each sum."""
    out = MiningResult(status=res.status, nodes=res.nodes)
    for sol in res.solutions:
        idx = tuple(sorted(perm[i] for i in sol.indexes))
        total = _resum(values, idx)
        if rng.min <= total <= rng.max:
            out.solutions.append(Solution(idx, total))
    return out


def solve_fixed(values, n, target, me, config=None, *, variant="binary"):
    """Size-``n`` subsets of ``values`` summing into ``[target - me, target + me]``."""
    rng = TargetRange.around(target, me)
    return solve_range(values, n, rng, config, variant=variant)


def solve_range(values, n, rng, config=None, *, variant="binary"):
    values = [float(v) for v in values]
    s, perm = make_superset(values)
    res = mine(s, n, rng, config, variant=variant)
    return _to_input_order(values, perm, res, rng)


def solve_bounded(values, n, rng, initial: IndexBounds, config=None):
    """Like solve_range, with ``initial`` bounding positions in the *sorted* order."""
    values = [float(v) for v in values]
    s, perm = make_superset(values)
    initial.validate(len(s))
    res = mine(s, n, rng, config, bounds=initial)
    return _to_input_order(values, perm, res, rng)


def solve_variable(values, target, me, config=None, strategy="loop-sizes"):
    """Subsets of any size summing into ``[target - me, target + me]``."""
    config = config or MiningConfig()
    rng = TargetRange.around(target, me)
    values = [float(v) for v in values]
    N = len(values)
    if strategy == "pad-zeros":
        return _pad_zeros(values, rng, config)
    if strategy != "loop-sizes":
        raise InvalidInputError(f"unknown strategy {strategy!r}")

    def job(n):
        return solve_range(values, n, rng, config)

    if config.threads > 1:
        with ThreadPoolExecutor(config.threads) as pool:
            parts = list(pool.map(job, range(1, N + 1)))
    else:
        parts = [job(n) for n in range(1, N + 1)]
    out = MiningResult()
    for part in parts:
        out.solutions.extend(part.solutions)
        out.nodes += part.nodes
        if part.status == TIMEOUT:
            out.status = TIMEOUT
        elif part.status == QUOTA and out.status == EXHAUSTED:
            out.status = QUOTA
    if config.max_solutions is not None and len(out.solutions) > config.max_solutions:
        out.solutions = out.solutions[:config.max_solutions]
        out.status = QUOTA
    return out


def _pad_zeros(values, rng, config):
    N = len(values)
    padded = values + [0.0] * N
    quota = config.max_solutions
    # padded duplicates collapse, so the inner quota cannot be applied directly
    inner = MiningConfig(None, config.time_limit, 1, config.use_binary_search_in_contraction)
    res = solve_range(padded, N, rng, inner)
    seen = set()
    out = MiningResult(status=res.status, nodes=res.nodes)
    for sol in res.solutions:
        idx = tuple(i for i in sol.indexes if i < N)
        if not idx or idx in seen:
            continue
        seen.add(idx)
        out.solutions.append(Solution(idx, _resum(values, idx)))
        if quota is not None and len(out.solutions) >= quota:
            out.status = QUOTA
            break
    return out
