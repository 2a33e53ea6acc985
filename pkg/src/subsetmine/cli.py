"""Command-line entry point.

Exit status: 0 when something was found, 2 when the instance has no
solution (or none was found before the time limit), 1 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import bench, oracle
from .core import MiningConfig, SubsetMineError, TargetRange
from .gap import GapInstance, solve_gap
from .knapsack import KnapsackInstance, solve_01, solve_mf01k
from .mdim import solve_md
from .multiset import solve_multi
from .packedint import solve_md_integerized
from .solver1d import solve_fixed

OK, USAGE, NONE = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _common(p, solve=True):
    p.add_argument("--file", required=True, help="instance file (JSON, or CSV superset)")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--timeout", type=float, help="time limit in seconds")
    if solve:
        p.add_argument("--solutions", type=int, help="stop after this many solutions")
        p.add_argument("--use-bisearch", action="store_true",
                       help="binary instead of linear search during contraction")


def _subset_flags(p):
    p.add_argument("--len", type=int, help="subset size")
    p.add_argument("--target", type=float, nargs="+")
    p.add_argument("--me", type=float, nargs="+", help="half-width of the target range")


def build_parser():
    ap = _Parser(prog="subsetmine", description="Exact subset sum mining and friends.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, help_ in (("flsss", "one-dimensional fixed-size subset sum"),
                        ("mflsss", "multidimensional fixed-size subset sum"),
                        ("mflsss-int", "multidimensional, integerized and bit-packed")):
        p = sub.add_parser(name, help=help_)
        _common(p)
        _subset_flags(p)
        if name == "mflsss-int":
            p.add_argument("--lambda", dest="lam", type=int, nargs="+",
                           help="integer maximum per column")

    p = sub.add_parser("multiset", help="one subset from each of several supersets")
    _common(p)
    p.add_argument("--target", type=float)
    p.add_argument("--me", type=float)

    for name in ("knapsack", "gap"):
        p = sub.add_parser(name, help=f"exact {name} optimum")
        _common(p, solve=False)
        p.add_argument("--phi", type=int, default=16, help="tasks per thread")
        if name == "knapsack":
            p.add_argument("--len", type=int, help="fixed item count (default: any)")

    p = sub.add_parser("oracle", help="brute-force reference answer")
    p.add_argument("problem", choices=["flsss", "mflsss", "knapsack", "gap"])
    p.add_argument("--file", required=True)
    p.add_argument("--out")
    _subset_flags(p)

    p = sub.add_parser("bench", help="paired timing experiment, CSV output")
    p.add_argument("experiment", choices=sorted(bench.EXPERIMENTS))
    p.add_argument("--instances", type=int, default=10)
    p.add_argument("--N", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--me", type=float)
    p.add_argument("--solutions", type=int)
    p.add_argument("--lambda", dest="lam", type=int)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--timeout", type=float, help="per-run time limit in seconds")
    p.add_argument("--out")
    return ap


# -- input ------------------------------------------------------------------


def _read_csv(path):
    rows = []
    with open(path, newline="") as fh:
        for lineno, rec in enumerate(csv.reader(fh), 1):
            if not rec or all(not c.strip() for c in rec):
                continue
            try:
                rows.append([float(c) for c in rec])
            except ValueError:
                if not rows and lineno == 1:
                    continue  # header
                raise InputError(f"{path}:{lineno}: non-numeric field in {rec!r}") from None
            if len(rows[-1]) != len(rows[0]):
                raise InputError(f"{path}:{lineno}: expected {len(rows[0])} fields, got {len(rec)}")
    if not rows:
        raise InputError(f"{path}: no data rows")
    return {"superset": rows}


def read_instance(path):
    if path.lower().endswith(".csv"):
        return _read_csv(path)
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be a JSON object")
    return data


def _field(data, key, path, override=None):
    if override is not None:
        return override
    if key not in data:
        raise InputError(f"{path}: missing field {key!r}")
    return data[key]


def _matrix(data, key, path):
    try:
        x = np.asarray(_field(data, key, path), dtype=float)
    except (TypeError, ValueError):
        raise InputError(f"{path}: field {key!r} must be numeric") from None
    return x


def _vector(v, d, key):
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if v.shape[0] == 1 and d > 1:
        v = np.repeat(v, d)
    if v.shape[0] != d:
        raise InputError(f"field {key!r} needs {d} values, got {v.shape[0]}")
    return v


def _subset_instance(args):
    data = read_instance(args.file)
    x = _matrix(data, "superset", args.file)
    if x.ndim == 1:
        x = x[:, None]
    d = x.shape[1]
    n = int(_field(data, "len", args.file, args.len))
    target = _vector(_field(data, "target", args.file, args.target), d, "target")
    me = _vector(_field(data, "me", args.file, args.me), d, "me")
    return data, x, n, target, me


def _config(args):
    return MiningConfig(getattr(args, "solutions", None), args.timeout, args.threads,
                        getattr(args, "use_bisearch", False))


# -- output -----------------------------------------------------------------


def _num(v):
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_num(u) for u in v]
    f = float(v)
    return int(f) if f.is_integer() and abs(f) < 2**53 else f


def _solutions(res):
    sols = sorted(res.solutions, key=lambda s: tuple(s.indexes))
    return [{"indexes": [int(i) for i in s.indexes], "sum": _num(s.achieved_sum)} for s in sols]


def _emit(obj, args):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands ---------------------------------------------------------------


def _cmd_flsss(args):
    _, x, n, target, me = _subset_instance(args)
    if x.shape[1] != 1:
        raise InputError("flsss needs a one-dimensional superset")
    res = solve_fixed(x[:, 0], n, float(target[0]), float(me[0]), _config(args))
    _emit({"status": res.status, "solutions": _solutions(res)}, args)
    return OK if res.solutions else NONE


def _cmd_mflsss(args):
    _, x, n, target, me = _subset_instance(args)
    res = solve_md(x, n, target, me, _config(args))
    _emit({"status": res.status, "solutions": _solutions(res)}, args)
    return OK if res.solutions else NONE


def _cmd_mflsss_int(args):
    data, x, n, target, me = _subset_instance(args)
    lam = _field(data, "lambda", args.file, args.lam)
    lam = _vector(lam, x.shape[1], "lambda").astype(np.int64)
    res = solve_md_integerized(x, n, target, me, lam, _config(args))
    _emit({"status": res.status, "approximate": True, "solutions": _solutions(res)}, args)
    return OK if res.solutions else NONE


def _cmd_multiset(args):
    data = read_instance(args.file)
    sets = _field(data, "supersets", args.file)
    sizes = [int(v) for v in _field(data, "len", args.file)]
    target = float(np.ravel(_field(data, "target", args.file, args.target))[0])
    me = float(np.ravel(_field(data, "me", args.file, args.me))[0])
    res = solve_multi(sets, sizes, TargetRange.around(target, me), _config(args))
    sols = sorted(res.solutions, key=lambda s: s.picks)
    out = [{"picks": [list(p) for p in s.picks], "sum": _num(s.achieved_sum)} for s in sols]
    _emit({"status": res.status, "solutions": out}, args)
    return OK if sols else NONE


def _cmd_knapsack(args):
    data = read_instance(args.file)
    n = args.len if args.len is not None else data.get("len")
    inst = KnapsackInstance(_matrix(data, "costs", args.file), _matrix(data, "profits", args.file),
                            _matrix(data, "budgets", args.file), None if n is None else int(n))
    cfg = _config(args)
    res = solve_01(inst, cfg, args.phi) if inst.n is None else solve_mf01k(inst, cfg, args.phi)
    out = {"status": res.status, "profit": None, "indexes": None, "cost": None}
    if res.solution is not None:
        out.update(profit=_num(res.profit), indexes=list(res.solution.indexes),
                   cost=_num(res.solution.achieved_sum))
    _emit(out, args)
    return OK if res.solution is not None else NONE


def _cmd_gap(args):
    data = read_instance(args.file)
    g = GapInstance(_matrix(data, "cost", args.file), _matrix(data, "profit", args.file),
                    _matrix(data, "budgets", args.file))
    res = solve_gap(g, _config(args), args.phi)
    out = {"status": res.status, "profit": None, "assignment": None}
    if res.assignment is not None:
        out.update(profit=_num(res.profit), assignment=list(res.assignment))
    _emit(out, args)
    return OK if res.assignment is not None else NONE


def _cmd_oracle(args):
    data = read_instance(args.file)
    if args.problem in ("flsss", "mflsss"):
        args.len = getattr(args, "len", None)
        _, x, n, target, me = _subset_instance(args)
        sets = oracle.brute_md(x, n, target - me, target + me)
        _emit({"solutions": [list(s) for s in sets]}, args)
        return OK if sets else NONE
    if args.problem == "knapsack":
        n = data.get("len") if args.len is None else args.len
        best, arg = oracle.brute_knapsack(_matrix(data, "costs", args.file),
                                          _matrix(data, "profits", args.file),
                                          _matrix(data, "budgets", args.file),
                                          None if n is None else int(n))
        _emit({"profit": _num(best) if best is not None else None,
               "indexes": list(arg) if arg else None}, args)
        return OK if arg else NONE
    best, arg = oracle.brute_gap(_matrix(data, "cost", args.file),
                                 _matrix(data, "profit", args.file),
                                 _matrix(data, "budgets", args.file))
    _emit({"profit": _num(best) if best is not None else None,
           "assignment": list(arg) if arg else None}, args)
    return OK if arg else NONE


def _cmd_bench(args):
    params = bench.BenchParams(args.instances, args.N, args.n, args.d, args.me,
                               args.solutions, args.seed, args.threads, args.timeout, args.lam)
    res = bench.run_bench(args.experiment, params)
    text = res.to_csv()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return OK


COMMANDS = {
    "flsss": _cmd_flsss,
    "mflsss": _cmd_mflsss,
    "mflsss-int": _cmd_mflsss_int,
    "multiset": _cmd_multiset,
    "knapsack": _cmd_knapsack,
    "gap": _cmd_gap,
    "oracle": _cmd_oracle,
    "bench": _cmd_bench,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InputError, SubsetMineError, OSError, ValueError) as e:
        print(f"subsetmine: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
