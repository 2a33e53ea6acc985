"""Paired timing experiments on seeded random workloads.

Each experiment draws instances from one generator, runs both arms on every
instance and reports wall time (preprocessing included) per run, plus the
mean per-instance ratio ``slow_arm / fast_arm`` in the order the arms are
expected to rank.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field

import numpy as np

from .core import MiningConfig
from .mdim import solve_md
from .packedint import solve_md_integerized
from .solver1d import solve_fixed

# reference ratios reported alongside ours; not asserted
REFERENCE = {
    "contraction-search": 1.79,
    "subspacing-tree": 1.59,
    "order-opt": 4.39,
    "integerization": 1.48,
}


@dataclass
class BenchParams:
    instances: int = 10
    N: int | None = None
    n: int | None = None
    d: int | None = None
    me: float | None = None
    solutions: int | None = None
    seed: int = 42
    threads: int = 1
    time_limit: float | None = None
    lam: int | None = None


@dataclass
class BenchResult:
    experiment: str
    arms: tuple  # (numerator arm, denominator arm)
    rows: list = field(default_factory=list)
    ratios: list = field(default_factory=list)

    @property
    def mean_ratio(self):
        return float(np.mean(self.ratios)) if self.ratios else float("nan")

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["instance_id", "arm", "wall_ms", "solutions_found"])
        for r in self.rows:
            w.writerow([r["instance_id"], r["arm"], f"{r['wall_ms']:.3f}", r["solutions_found"]])
        w.writerow(["mean_ratio", f"{self.arms[0]}/{self.arms[1]}", f"{self.mean_ratio:.4f}", ""])
        return buf.getvalue()


# defaults: the original workload shapes, shrunk (fewer rows, smaller subsets,
# wider 1-D tolerance) so a pure-Python run of 10 instances takes seconds
DEFAULTS = {
    "contraction-search": dict(N=1000, n=100, me=1.0, solutions=10),
    "subspacing-tree": dict(N=40, d=14, n=5, me=0.01, solutions=1000),
    "order-opt": dict(N=40, d=5, n=4, me=0.001, solutions=10**6),
    "integerization": dict(N=40, d=14, n=5, me=0.001, solutions=1000, lam=10**4),
}


def _fill(experiment, p: BenchParams):
    d = DEFAULTS[experiment]
    for k, v in d.items():
        if getattr(p, k) is None:
            setattr(p, k, v)
    return p


def _timed(fn):
    t0 = time.perf_counter()
    res = fn()
    return (time.perf_counter() - t0) * 1000.0, len(res.solutions)


def _contraction_search(p, rng):
    def make():
        s = np.sort(rng.uniform(0, 1e6, p.N))
        target = float(s[rng.choice(p.N, p.n, replace=False)].sum())
        arms = {}
        for name, binary in (("binary", True), ("linear", False)):
            cfg = MiningConfig(p.solutions, p.time_limit, p.threads, binary)
            arms[name] = (lambda cfg=cfg: solve_fixed(s, p.n, target, p.me, cfg))
        return arms
    return ("binary", "linear"), make


def _md_instance(p, rng, relative):
    x = rng.uniform(0, 10000, (p.N, p.d))
    sums = x[rng.choice(p.N, p.n, replace=False)].sum(axis=0)
    if relative:
        lo, hi = sums * (1 - p.me), sums * (1 + p.me)
        return x, (lo + hi) / 2, (hi - lo) / 2
    return x, sums, np.full(p.d, p.me)


def _subspacing_tree(p, rng):
    def make():
        x, t, me = _md_instance(p, rng, relative=False)
        cfg = MiningConfig(p.solutions, p.time_limit, p.threads)
        return {v: (lambda v=v: solve_md(x, p.n, t, me, cfg, variant=v))
                for v in ("variable", "binary")}
    return ("variable", "binary"), make


def _order_opt(p, rng):
    def make():
        x, t, me = _md_instance(p, rng, relative=True)
        cfg = MiningConfig(p.solutions, p.time_limit, p.threads)
        return {
            "unordered": lambda: solve_md(x, p.n, t, me, cfg, leader_sort=False,
                                          order_rows=False),
            "ordered": lambda: solve_md(x, p.n, t, me, cfg),
        }
    return ("unordered", "ordered"), make


def _integerization(p, rng):
    def make():
        x, t, me = _md_instance(p, rng, relative=True)
        cfg = MiningConfig(p.solutions, p.time_limit, p.threads)
        return {
            "real": lambda: solve_md(x, p.n, t, me, cfg),
            "integerized": lambda: solve_md_integerized(x, p.n, t, me, p.lam, cfg),
        }
    return ("real", "integerized"), make


EXPERIMENTS = {
    "contraction-search": _contraction_search,
    "subspacing-tree": _subspacing_tree,
    "order-opt": _order_opt,
    "integerization": _integerization,
}


def run_bench(experiment, params: BenchParams | None = None) -> BenchResult:
    if experiment not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {experiment!r}")
    p = _fill(experiment, params or BenchParams())
    rng = np.random.default_rng(p.seed)
    arms, make = EXPERIMENTS[experiment](p, rng)
    out = BenchResult(experiment, arms)
    for i in range(p.instances):
        runs = make()
        ms = {}
        for arm in arms:
            ms[arm], found = _timed(runs[arm])
            out.rows.append(dict(instance_id=i, arm=arm, wall_ms=ms[arm], solutions_found=found))
        out.ratios.append(ms[arms[0]] / ms[arms[1]])
    return out
