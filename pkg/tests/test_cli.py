import json
import subprocess
import sys
from pathlib import Path

import pytest

from polystruct.cli import main

HERE = Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"

GOLDEN_CASES = sorted(p.name for p in GOLDEN.glob("*.json"))


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", GOLDEN_CASES)
def test_structured_output_matches_golden(capsys, name):
    example, command, _ = name.split(".")
    code, out, _ = run(capsys, command, DATA / f"{example}.json", "--format", "json")
    assert code == 0
    assert out == (GOLDEN / name).read_text()


def test_kstruct_example1(capsys):
    code, out, _ = run(capsys, "kstruct", DATA / "example1.json", "--grade", "2",
                       "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert d["rank"] == 2
    assert d["zeros"] == [{"value": 1.0, "multiplicities": [1]}]
    assert d["infinite_multiplicities"] == [0, 2]
    assert d["right_indices"] == [0] and d["left_indices"] == [1]


def test_poles_example2_text(capsys):
    code, out, _ = run(capsys, "poles", DATA / "example2.json")
    assert code == 0
    assert "finite: -1 (x2); infinite: mult 1; McMillan degree 3" in out


def test_roots_of_singular_matrix(capsys):
    code, out, err = run(capsys, "roots", DATA / "example1.json")
    assert code == 3
    assert "matrix is singular" in err
    assert out == ""


def test_text_and_json_carry_same_numbers(capsys):
    _, text, _ = run(capsys, "kstruct", DATA / "example2.json")
    _, js, _ = run(capsys, "kstruct", DATA / "example2.json", "--format", "json")
    d = json.loads(js)
    assert f"rank: {d['rank']}" in text
    assert f"mcmillan_degree: {d['mcmillan_degree']}" in text
    assert f"infinite_structural_indices: {d['infinite_structural_indices']}" in text


def test_repeated_runs_are_identical(capsys):
    outs = {run(capsys, "kstruct", DATA / "example2.json", "--format", "json")[1]
            for _ in range(3)}
    assert len(outs) == 1


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "nonsense"}')
    assert run(capsys, "kstruct", bad)[0] == 2
    bad.write_text("not json")
    assert run(capsys, "kstruct", bad)[0] == 2
    ragged = tmp_path / "ragged.json"
    ragged.write_text('{"kind": "rationalmatrix", "num": [[[1], [2]], [[1]]], '
                      '"den": [[[1], [1]], [[1]]]}')
    assert run(capsys, "kstruct", ragged)[0] == 2
    assert run(capsys, "kstruct", tmp_path / "missing.json")[0] == 2
    assert run(capsys, "frobnicate", DATA / "example1.json")[0] == 2
    # polynomial-only command on a rational input
    assert run(capsys, "smith", DATA / "example2.json")[0] == 2


def test_other_kinds(capsys, tmp_path):
    pencil = tmp_path / "pencil.json"
    pencil.write_text('{"kind": "pencil", "M": [[1, 0], [0, 1]], "N": [[0, 1], [0, 0]]}')
    code, out, _ = run(capsys, "unimodular", pencil, "--format", "json")
    assert code == 0 and json.loads(out)["unimodular"] is True

    real = tmp_path / "real.json"
    real.write_text('{"kind": "realization", "A": [[-1]], "B": [[1]], "C": [[1]]}')
    code, out, _ = run(capsys, "poles", real, "--format", "json")
    assert code == 0
    assert json.loads(out)["poles"] == [{"value": -1.0, "multiplicities": [1]}]

    psm = tmp_path / "psm.json"
    psm.write_text('{"kind": "polysystemmatrix", "T": [[[1]], [[1]]], "U": [[[-1]], [[1]]], '
                   '"V": [[[1]]], "W": [[[0]]]}')
    code, out, _ = run(capsys, "zeros", psm, "--format", "json")
    assert code == 0
    assert json.loads(out)["zeros"] == [{"value": 1.0, "multiplicities": [1]}]


def test_smith_and_linearize(capsys):
    code, out, _ = run(capsys, "smith", DATA / "example1.json", "--format", "json")
    assert json.loads(out)["invariant_polynomials"] == [["1"], ["-1", "1"]]
    code, out, _ = run(capsys, "linearize", DATA / "example1.json", "--format", "json")
    d = json.loads(out)
    assert d["form"] == "cf1" and len(d["M"]) == 6
    code, out, _ = run(capsys, "minreal", DATA / "example2.json", "--via", "lps",
                       "--format", "json")
    assert json.loads(out)["order"] == 2


def test_verbose_rank(capsys):
    code, out, _ = run(capsys, "rank", DATA / "example1.json", "--verbose", "--seed", "3",
                       "--format", "json")
    d = json.loads(out)
    assert d["rank"] == d["rank_by_evaluation"] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "polystruct", "rank",
                          str(DATA / "example1.json")], capture_output=True, text=True)
    assert res.returncode == 0
    assert "rank: 2" in res.stdout
