import json
from pathlib import Path

import numpy as np
import pytest

from grusskit import cli
from grusskit.formats import read_map, read_matrix, write_matrix
from grusskit.posmaps import embedded_transpose_map, random_unital_cp, reduction_map, transpose_map

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_fixtures_match_constructors():
    pairs = {"transpose_2": transpose_map(2), "transpose_3": transpose_map(3),
             "embedded_transpose_2_1": embedded_transpose_map(2, 1), "reduction_3": reduction_map(3),
             "random_unital_cp_3_2": random_unital_cp(3, 2, 7)}
    for name, phi in pairs.items():
        assert np.array_equal(read_map(FIX / f"{name}.json").choi, phi.choi), name
    assert np.array_equal(read_matrix(FIX / "counter_a.json"), [[1, 3], [3, 3]])
    assert np.array_equal(read_matrix(FIX / "counter_b_k3.json"), np.diag([1, 3, 0]))


def test_counterexample_command(capsys):
    code, out, _ = run(capsys, "paper-example")
    assert code == 0
    assert out.count("VIOLATED") == 4
    assert "6.000000000" in out and "4.743416490" in out and "3.162277660" in out


def test_counterexample_command_machine_is_deterministic(capsys):
    _, first, _ = run(capsys, "paper-example", "--machine")
    _, second, _ = run(capsys, "paper-example", "--machine")
    assert first == second
    doc = json.loads(first)
    assert doc["ok"] and doc["cases"][0]["report"]["defect"] == pytest.approx(6.0)


def test_defect_and_radius(capsys):
    code, out, _ = run(capsys, "defect", FIX / "transpose_3.json", FIX / "counter_a_k3.json", FIX / "counter_b_k3.json")
    assert code == 0 and "verdict VIOLATED" in out
    code, out, _ = run(capsys, "radius", FIX / "counter_a.json")
    assert code == 0 and out == "center 2+0i, radius 3.16227766017\n"
    code, out, _ = run(capsys, "radius", FIX / "jordan_block.json", "--machine")
    assert code == 0 and json.loads(out)["radius"] == pytest.approx(1.0, abs=1e-8)


def test_decompose_and_dilate(capsys, tmp_path):
    code, out, _ = run(capsys, "decompose", FIX / "counter_a.json", "--machine")
    assert code == 0 and json.loads(out)["weights"] == [0.5, 0.5]
    code, out, _ = run(capsys, "dilate", FIX / "random_unital_cp_3_2.json", "--out", tmp_path / "v.json", "--machine")
    assert code == 0 and out == ""
    assert json.loads((tmp_path / "v.json").read_text())["env_dim"] == 2


def test_falsify(capsys):
    code, out, _ = run(capsys, "falsify", FIX / "transpose_2.json", 2)
    assert code == 0 and out == "witness k=2 value -1.000000000\n"
    code, out, _ = run(capsys, "falsify", FIX / "reduction_3.json", 2, "--restarts", 8)
    assert code == 0 and out.startswith("no Schmidt-rank-2 witness")


def test_suite_small_and_seeded(capsys):
    code, out, _ = run(capsys, "suite", "--trials", 10, "--seed", 7, "--machine")
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] and doc["seed"] == 7
    assert all(s["ok"] for s in doc["suites"] if s["contractual"])
    _, again, _ = run(capsys, "suite", "--trials", 10, "--seed", 7, "--machine")
    assert again == out


def test_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    assert run(capsys, "radius", bad)[0] == 2
    assert run(capsys, "radius", tmp_path / "missing.json")[0] == 2
    code, _, err = run(capsys, "dilate", FIX / "transpose_3.json")
    assert code == 3 and "Choi matrix not PSD" in err
    code, _, err = run(capsys, "defect", FIX / "transpose_2.json", FIX / "counter_a_k3.json", FIX / "counter_b_k3.json")
    assert code == 3 and err.startswith("precondition violated")
    rect = tmp_path / "rect.json"
    write_matrix(rect, np.ones((2, 3)))
    assert run(capsys, "radius", rect)[0] == 3


def test_argument_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["suite", "--trials", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        cli.main(["nonsense"])
