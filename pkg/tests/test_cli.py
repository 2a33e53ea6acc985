import json
import subprocess
import sys

import numpy as np
import pytest

from subsetmine.cli import main

INSTANCES = {
    "flsss": {"superset": [14, 60, 134, 135, 141, 192, 199, 203, 207, 234], "len": 5,
              "target": 817, "me": 4},
    "mflsss": {"superset": [[4, 10], [2, 25], [8, 17]], "len": 2, "target": [11.5, 27],
               "me": [0.5, 1]},
    "mflsss-int": {"superset": [[4, 10], [2, 25], [8, 17]], "len": 2, "target": [11.5, 27],
                   "me": [0.5, 1], "lambda": 1000},
    "multiset": {"supersets": [[1, 5, 9], [2, 3, 7, 8]], "len": [1, 2], "target": 14, "me": 0},
    "knapsack": {"costs": [[2], [3], [4], [5]], "profits": [3, 4, 5, 6], "budgets": [5]},
    "gap": {"cost": [[21, 13, 9], [6, 11, 17]], "profit": [[117, 214, 167], [111, 453, 20]],
            "budgets": [26, 25, 27]},
}


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(p)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_flsss(tmp_path, capsys):
    f = write(tmp_path, "a.json", INSTANCES["flsss"])
    code, out, _ = run(["flsss", "--file", f], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "exhausted"
    for s in doc["solutions"]:
        assert 813 <= s["sum"] <= 821
        assert s["sum"] == sum(INSTANCES["flsss"]["superset"][i] for i in s["indexes"])


def test_flsss_csv_with_flags(tmp_path, capsys):
    f = write(tmp_path, "s.csv", "value\n1\n2\n3\n4\n")
    code, out, _ = run(["flsss", "--file", f, "--len", "2", "--target", "5", "--me", "0"], capsys)
    assert code == 0
    assert [s["indexes"] for s in json.loads(out)["solutions"]] == [[0, 3], [1, 2]]


def test_no_solution_exit_code(tmp_path, capsys):
    f = write(tmp_path, "s.csv", "1\n2\n3\n")
    code, out, _ = run(["flsss", "--file", f, "--len", "2", "--target", "100", "--me", "0"],
                       capsys)
    assert code == 2 and json.loads(out)["solutions"] == []


def test_mflsss_and_int(tmp_path, capsys):
    f = write(tmp_path, "m.json", INSTANCES["mflsss"])
    code, out, _ = run(["mflsss", "--file", f], capsys)
    assert code == 0
    assert json.loads(out)["solutions"] == [{"indexes": [0, 2], "sum": [12, 27]}]
    f = write(tmp_path, "mi.json", INSTANCES["mflsss-int"])
    code, out, _ = run(["mflsss-int", "--file", f], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["approximate"] is True
    assert [s["indexes"] for s in doc["solutions"]] == [[0, 2]]


def test_multiset(tmp_path, capsys):
    f = write(tmp_path, "ms.json", INSTANCES["multiset"])
    code, out, _ = run(["multiset", "--file", f], capsys)
    picks = [s["picks"] for s in json.loads(out)["solutions"]]
    assert code == 0
    for p in picks:
        vals = INSTANCES["multiset"]["supersets"]
        assert sum(vals[h][i] for h in range(2) for i in p[h]) == 14


def test_knapsack_and_gap(tmp_path, capsys):
    f = write(tmp_path, "k.json", INSTANCES["knapsack"])
    code, out, _ = run(["knapsack", "--file", f], capsys)
    assert code == 0 and json.loads(out)["profit"] == 7
    code, out, _ = run(["knapsack", "--file", f, "--len", "1"], capsys)
    assert json.loads(out)["profit"] == 6
    f = write(tmp_path, "g.json", INSTANCES["gap"])
    code, out, _ = run(["gap", "--file", f], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["profit"] == 667 and doc["assignment"] == [1, 1]


def test_oracle_subcommand(tmp_path, capsys):
    f = write(tmp_path, "g.json", INSTANCES["gap"])
    code, out, _ = run(["oracle", "gap", "--file", f], capsys)
    assert json.loads(out) == {"assignment": [1, 1], "profit": 667}
    f = write(tmp_path, "m.json", INSTANCES["mflsss"])
    code, out, _ = run(["oracle", "mflsss", "--file", f], capsys)
    assert json.loads(out) == {"solutions": [[0, 2]]}
    f = write(tmp_path, "k.json", INSTANCES["knapsack"])
    code, out, _ = run(["oracle", "knapsack", "--file", f], capsys)
    assert json.loads(out)["profit"] == 7


def test_out_file(tmp_path, capsys):
    f = write(tmp_path, "g.json", INSTANCES["gap"])
    out = tmp_path / "res.json"
    code, stdout, _ = run(["gap", "--file", f, "--out", str(out)], capsys)
    assert code == 0 and stdout == ""
    assert json.loads(out.read_text())["profit"] == 667


def test_usage_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as e:
        main(["flsss"])
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        main(["bogus-command"])
    assert e.value.code == 1
    code, _, err = run(["flsss", "--file", str(tmp_path / "missing.json")], capsys)
    assert code == 1 and "missing.json" in err


def test_input_diagnostics(tmp_path, capsys):
    f = write(tmp_path, "bad.csv", "1\n2\nthree\n")
    code, _, err = run(["flsss", "--file", f, "--len", "1", "--target", "1", "--me", "0"],
                       capsys)
    assert code == 1 and "bad.csv:3" in err
    f = write(tmp_path, "ragged.csv", "1,2\n3\n")
    code, _, err = run(["mflsss", "--file", f, "--len", "1", "--target", "1", "--me", "0"],
                       capsys)
    assert code == 1 and "ragged.csv:2" in err
    f = write(tmp_path, "bad.json", '{"superset": [1, 2],\n "len": }')
    code, _, err = run(["flsss", "--file", f], capsys)
    assert code == 1 and "bad.json:2:" in err
    f = write(tmp_path, "nolen.json", {"superset": [1, 2], "target": 1, "me": 0})
    code, _, err = run(["flsss", "--file", f], capsys)
    assert code == 1 and "missing field 'len'" in err
    f = write(tmp_path, "neg.json", {"cost": [[-1]], "profit": [[1]], "budgets": [1]})
    code, _, err = run(["gap", "--file", f], capsys)
    assert code == 1 and "nonnegative" in err


def test_bench_csv(tmp_path, capsys):
    code, out, _ = run(["bench", "contraction-search", "--instances", "2", "--N", "60",
                        "--n", "6", "--me", "1"], capsys)
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "instance_id,arm,wall_ms,solutions_found"
    assert len(lines) == 1 + 4 + 1
    assert lines[-1].startswith("mean_ratio,binary/linear,")


def _cli(args, cwd):
    return subprocess.run([sys.executable, "-m", "subsetmine", *args], cwd=cwd,
                          capture_output=True, text=True, check=False)


def test_determinism_across_processes(tmp_path):
    for cmd, inst in INSTANCES.items():
        f = write(tmp_path, f"{cmd}.json", inst)
        a, b = _cli([cmd, "--file", f], tmp_path), _cli([cmd, "--file", f], tmp_path)
        assert a.returncode == b.returncode == 0
        assert a.stdout == b.stdout and a.stdout


@pytest.mark.slow
def test_thousand_element_flsss(tmp_path, capsys):
    rng = np.random.default_rng(11)
    x = np.sort(rng.uniform(0, 1e6, 1000))
    target = float(x[rng.choice(1000, 100, replace=False)].sum())
    f = tmp_path / "s.csv"
    f.write_text("\n".join(repr(float(v)) for v in rng.permutation(x)) + "\n")
    code, out, _ = run(["flsss", "--len", "100", "--target", repr(target), "--me", "1e-4",
                        "--solutions", "10", "--file", str(f)], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "quota" and len(doc["solutions"]) >= 10
