import csv
import io as stdio
import json
import subprocess
import sys

import pytest

from vbrcac.cli import main
from vbrcac.envelope import validate
from vbrcac.io import read_envelope_file


def dump(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def derived(tmp_path):
    return dump(tmp_path, "derived.json", {"bandwidth": 5, "streams": [
        {"id": "committed", "peaks": [[4, 0, 2], [1, 2, 6], [4, 6, 8]]},
        {"id": "request", "peaks": [[2, 0, 2]]},
    ]})


@pytest.mark.parametrize("algo", ["naive", "morph", "oracle"])
def test_admit_derived(capsys, derived, algo):
    code, out, _ = run(capsys, "admit", derived, "request", "--algorithm", algo)
    assert code == 0
    assert json.loads(out)["displacement"] == 2


def test_admit_zero_stream(capsys, tmp_path):
    f = dump(tmp_path, "z.json", {"bandwidth": 3, "streams": [{"id": "z", "peaks": [[0, 0, 5]]}]})
    code, out, _ = run(capsys, "admit", f, "z", "--committed", "z")
    assert code == 0 and json.loads(out)["displacement"] == 0


def test_admit_infeasible(capsys, tmp_path):
    f = dump(tmp_path, "big.json", {"bandwidth": 3, "streams": [
        {"id": "a", "peaks": [[1, 0, 2]]}, {"id": "b", "peaks": [[4, 0, 2]]}]})
    code, out, err = run(capsys, "admit", f, "b")
    assert code == 2 and "infeasible" in err
    assert json.loads(out)["feasible"] is False


def test_admit_errors(capsys, tmp_path, derived):
    assert run(capsys, "admit", derived, "ghost")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"bandwidth": 5,\n "streams": [}')
    code, _, err = run(capsys, "admit", str(bad), "x")
    assert code == 1 and "line 2" in err
    assert run(capsys, "admit")[0] == 1


def test_schedule_and_verify(capsys, tmp_path, derived):
    out_file = tmp_path / "sched.json"
    code, out, _ = run(capsys, "schedule", derived, "-o", out_file)
    assert code == 0
    sched = json.loads(out)
    assert sched["optimal"] and sched["ids"] == ["committed", "request"]
    assert run(capsys, "verify", derived, out_file)[0] == 0

    code, out, _ = run(capsys, "schedule", derived, "--method", "greedy", "--order", "0,1")
    assert code == 0 and json.loads(out)["displacements"] == [0, 2]

    bad = dump(tmp_path, "bad_sched.json", {"displacements": [0, 1]})
    code, out, _ = run(capsys, "verify", derived, bad)
    assert code == 2 and not json.loads(out)["ok"]


def test_schedule_infeasible(capsys, tmp_path):
    f = dump(tmp_path, "big.json", {"bandwidth": 3, "streams": [{"id": "b", "peaks": [[4, 0, 2]]}]})
    assert run(capsys, "schedule", f)[0] == 2


def test_gen_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "gen", "--peaks", 12, "--seed", 1, "-o", a)[0] == 0
    assert run(capsys, "gen", "--peaks", 12, "--seed", 1, "-o", b)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    run(capsys, "gen", "--peaks", 12, "--seed", 2, "-o", b)
    assert a.read_bytes() != b.read_bytes()


def test_gen_single_peak_and_validity(capsys, tmp_path):
    p = tmp_path / "one.json"
    run(capsys, "gen", "--peaks", 1, "--seed", 5, "-o", p)
    (env,) = read_envelope_file(p).streams.values()
    assert len(env) == 1
    for seed in range(20):
        run(capsys, "gen", "--peaks", 15, "--streams", 3, "--seed", seed, "-o", p)
        assert all(validate(e) == [] for e in read_envelope_file(p).streams.values())
    assert run(capsys, "gen", "--peaks", 0)[0] == 1


def test_bench_rows_and_regimes(capsys, tmp_path):
    path = tmp_path / "b.csv"
    code, _, err = run(capsys, "bench", "--sizes", "5,20", "--trials", 3, "--regime", "adversarial", "--csv", path)
    assert code == 0 and "size" in err
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 2 * 3 * 3  # sizes x trials x algorithms
    for r in rows:
        assert int(r["P"]) == int(r["n"]) * int(r["m"])
    code, out, _ = run(capsys, "bench", "--sizes", "30", "--trials", 2, "--regime", "low")
    rows = list(csv.DictReader(stdio.StringIO(out)))
    assert len(rows) == 6 and all(r["P"] == "0" and r["displacement"] == "0" for r in rows)


def test_reduce_scp(capsys, tmp_path):
    yes = dump(tmp_path, "yes.json", {"points": [0, 3], "intervals": [[1, 2], [4, 5]]})
    code, out, _ = run(capsys, "reduce-scp", yes)
    assert code == 0 and json.loads(out)["translation"] == 1
    no = dump(tmp_path, "no.json", {"points": [0, 1], "intervals": [[0, 1], [3, 4]]})
    code, out, err = run(capsys, "reduce-scp", no)
    assert code == 2 and "no translation" in err and "threshold" in err
    data = json.loads(out)
    assert data["displacement"] >= data["threshold"]


def test_reduce_stringpack(capsys, tmp_path):
    f = dump(tmp_path, "sp.json", {"strings": ["100011", "100000", "000101", "010010"]})
    code, out, _ = run(capsys, "reduce-stringpack", f, "--brute")
    data = json.loads(out)
    assert code == 0 and data["packing_length"] == data["brute_length"] == 8


def test_reduce_coloring_star(capsys, tmp_path):
    f = dump(tmp_path, "g.json", {"vertices": 4, "edges": [[0, 3], [1, 3], [2, 3]]})
    code, out, _ = run(capsys, "reduce-coloring", f)
    data = json.loads(out)
    assert code == 0 and data["colors"] == data["chromatic_number"] == 2
    assert run(capsys, "reduce-coloring", f, "--l", 2)[0] == 1


def test_verify_sa(capsys):
    code, out, _ = run(capsys, "verify-sa", "--n", 3, "--l", 81)
    assert code == 0 and json.loads(out)["ok"] and json.loads(out)["length"] == 333


def test_scale(capsys, tmp_path):
    f = dump(tmp_path, "frac.json", {"bandwidth": 2, "streams": [{"id": "a", "peaks": [[1, 0, 0.5]]}]})
    code, out, _ = run(capsys, "scale", f)
    assert code == 0 and json.loads(out)["streams"][0]["peaks"] == [[1, 0, 1]]


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "vbrcac", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "admit" in out.stdout
