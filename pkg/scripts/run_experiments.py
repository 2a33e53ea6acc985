"""Run all four timing experiments and write one CSV per experiment.

    python3 scripts/run_experiments.py --out results/ --instances 10
"""

import argparse
import os
import time

from subsetmine.bench import EXPERIMENTS, REFERENCE, BenchParams, run_bench


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--instances", type=int, default=10)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--only", choices=sorted(EXPERIMENTS), nargs="+")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    for name in args.only or list(EXPERIMENTS):
        t0 = time.perf_counter()
        res = run_bench(name, BenchParams(instances=args.instances, seed=args.seed,
                                          threads=args.threads))
        path = os.path.join(args.out, f"{name}.csv")
        with open(path, "w") as fh:
            fh.write(res.to_csv())
        print(f"{name:20s} {'/'.join(res.arms):22s} mean ratio {res.mean_ratio:6.2f} "
              f"(reference {REFERENCE[name]})  {time.perf_counter() - t0:6.1f} s  -> {path}",
              flush=True)


if __name__ == "__main__":
    main()
