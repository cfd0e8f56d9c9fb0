from __future__ import annotations

import json
import subprocess
import sys

import pytest

from conftest import SAMPLES
from ewopt import cli


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def solve_json(capsys, *argv):
    code, out, _ = run(capsys, "solve", *argv, "--json")
    assert code == cli.EXIT_OK
    return json.loads(out)


def test_solve_soft_pair(capsys):
    data = solve_json(capsys, SAMPLES / "soft_pair.gpw", "--format", "gpw")
    assert data["models"] == [{"atoms": [], "evaluation": {}, "costs": {"1": "5"}}]
    assert data["stats"]["sense"] == "max" and data["stats"]["models"] == 3


def test_solve_omt_extended(capsys):
    data = solve_json(capsys, SAMPLES / "min_x.omt", "--format", "omt", "--extended")
    assert [(m["atoms"], m["evaluation"]) for m in data["models"]] == [(["b"], {"x": 0})]


def test_solve_oprogram(capsys):
    data = solve_json(capsys, SAMPLES / "choice_weak.lp", "--format", "op")
    assert [m["atoms"] for m in data["models"]] == [["a"]]
    assert data["models"][0]["costs"] == {"1": "-2"}


def test_sense_override_is_reported(capsys):
    data = solve_json(capsys, SAMPLES / "choice_weak.lp", "--format", "op", "--sense", "max")
    assert [m["atoms"] for m in data["models"]] == [["b"]]
    assert data["stats"]["sense_overridden"] is True


def test_all_marks_optimal(capsys):
    data = solve_json(capsys, SAMPLES / "maxsat.wcnf", "--format", "wcnf", "--all")
    assert sorted((m["atoms"], m["optimal"]) for m in data["models"]) == [
        (["x1"], True), (["x1", "x2"], False), (["x2"], True)]


def test_text_output(capsys):
    code, out, _ = run(capsys, "solve", SAMPLES / "linear_objective.cc3", "--format", "cc3")
    assert code == 0
    assert "{d}  x=1  costs [@1: 3]" in out


def test_transform_normalize_levels(capsys, tmp_path):
    src = tmp_path / "levels.gpw"
    src.write_text("bool a\n" + "".join(f"assert-soft a :weight 1 :level {l}\n" for l in (2, 6, 8, 9)))
    out_file = tmp_path / "out.ews"
    code, _, err = run(capsys, "transform", src, "--format", "gpw", "--apply", "normalize-levels", "-o", out_file)
    assert code == 0 and "normalize-levels: 4 rewrites" in err
    assert [s["level"] for s in json.loads(out_file.read_text())["soft"]] == [1, 2, 3, 4]


def test_transform_star_twice_is_identity(capsys, tmp_path):
    code, original, _ = run(capsys, "transform", SAMPLES / "maxsmt.gpw", "--format", "gpw", "--apply", "drop-inert")
    base = tmp_path / "base.ews"
    base.write_text(original)
    code, twice, _ = run(capsys, "transform", base, "--apply", "star", "--apply", "star")
    assert code == 0 and twice == original


def test_transform_then_solve(capsys, tmp_path):
    out_file = tmp_path / "elim.ews"
    run(capsys, "transform", SAMPLES / "choice_weak.lp", "--format", "op", "--apply", "elim-neg", "-o", out_file)
    data = solve_json(capsys, out_file)
    assert [m["atoms"] for m in data["models"]] == [["a"]]
    assert json.loads(out_file.read_text())["soft"][0]["weight"] == 2


def test_unsafe_transform_warns_in_extended_mode(capsys):
    code, _, err = run(capsys, "transform", SAMPLES / "sum_bound.ilp", "--format", "ilp", "--apply", "zero-coeffs")
    assert code == 0 and "warning: zero-coeffs" in err


def test_exit_code_for_bad_input(capsys, tmp_path):
    bad = tmp_path / "bad.gpw"
    bad.write_text("assert nonsense (\n")
    assert run(capsys, "solve", bad, "--format", "gpw")[0] == cli.EXIT_INPUT
    assert run(capsys, "solve", tmp_path / "missing.ews")[0] == cli.EXIT_INPUT
    code, _, err = run(capsys, "solve", SAMPLES / "sum_bound.ilp", "--format", "ilp", "--threads", "0")
    assert code == cli.EXIT_INPUT and "threads" in err


def test_exit_code_for_state_cap(capsys):
    code, _, err = run(capsys, "solve", SAMPLES / "square_bound.cc22", "--format", "cc22", "--cap", "100")
    assert code == cli.EXIT_CAP and "exceeds the cap" in err


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "--trials", "4")
    assert code == cli.EXIT_VERIFY and "FAIL sign-elim-plain" in out
    code, out, _ = run(capsys, "verify", "--trials", "4", "--sign-checks", "guarded", "--json")
    assert code == cli.EXIT_OK and json.loads(out)["passed"] is True


def test_stdin_and_entry_point(tmp_path):
    text = (SAMPLES / "maxsat.wcnf").read_text()
    proc = subprocess.run([sys.executable, "-m", "ewopt.cli", "solve", "-", "--format", "wcnf", "--json"],
                          input=text, capture_output=True, text=True, check=True)
    assert len(json.loads(proc.stdout)["models"]) == 2


def test_parser_rejects_unknown_format():
    with pytest.raises(SystemExit):
        cli.main(["solve", "x", "--format", "dimacs"])
