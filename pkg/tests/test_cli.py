from __future__ import annotations

import json

import pytest

from affcat.cli import main
from affcat.skein import braid_closure_pd
from affcat.term import format_presentation, load_preset, parse_presentation


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_jones_of_trefoil(capsys):
    data = run_json(capsys, "invariant", "jones", "--braid", "1 1 1", "--strands", "2")
    assert data["writhe"] == 3 and data["components"] == 1
    assert {(t["exp"][0], t["coeff"]) for t in data["polynomial"]["terms"]} == {(-16, -1), (-12, 1), (-4, 1)}


def test_text_output(capsys):
    code, out, _ = run(capsys, "--format", "text", "invariant", "homflypt", "--braid", "1 1 1", "--strands", "2")
    assert code == 0
    assert "polynomial  -t^-4 + 2*t^-2 + z^2*t^-2" in out.splitlines()


def test_flags_after_the_leaf(capsys):
    a = run(capsys, "--format", "text", "trace", "golf", "--depth", "2")
    b = run(capsys, "trace", "golf", "--depth", "2", "--format", "text")
    assert a == b


@pytest.mark.parametrize("name", ["homflypt", "kauffman", "dubrovnik", "jones"])
def test_both_methods_agree(capsys, name):
    args = ["invariant", name, "--braid", "1 -2 1 -2", "--strands", "3"]
    if name in ("homflypt", "jones"):
        args += ["--method", "both"]
    data = run_json(capsys, *args)
    assert data.get("agree", True)


def test_pd_file_input(capsys, tmp_path):
    path = tmp_path / "trefoil.json"
    path.write_text(json.dumps(braid_closure_pd([1, 1, 1], 2).to_json()))
    from_pd = run_json(capsys, "invariant", "homflypt", "--pd", str(path))
    from_braid = run_json(capsys, "invariant", "homflypt", "--braid", "1 1 1", "--strands", "2")
    assert from_pd["polynomial"] == from_braid["polynomial"]


def test_var_annotation(capsys):
    data = run_json(capsys, "invariant", "jones", "--braid", "1", "--strands", "2", "--var", "t")
    assert data["variable"] == {"output": "q", "requested": "t", "relation": "t = q^-4"}


def test_hecke_checks(capsys):
    for check in ("dim", "braid", "jm-commute"):
        assert run_json(capsys, "algebra", "hecke", "--n", "4", "--check", check)["ok"]


def test_affine_hecke(capsys):
    data = run_json(capsys, "algebra", "affine-hecke", "--n", "2", "--normalize", "T1 x1 T1", "--seed", "5")
    assert data["normal_form"] == "x2"
    assert data["random_order_agrees"]


def test_affinize_round_trip(capsys, tmp_path):
    base = tmp_path / "base.pres"
    base.write_text(format_presentation(load_preset("braid")))
    dst = tmp_path / "aff.pres"
    code, text, _ = run(capsys, "affinize", str(base))
    assert code == 0
    report = run_json(capsys, "affinize", str(base), "-o", str(dst))
    assert report["relations"] == 6
    assert parse_presentation(dst.read_text()).relation_set() == parse_presentation(text).relation_set()


def test_trace_commands(capsys):
    assert run_json(capsys, "trace", "vertical", "--model", "hecke", "--max-n", "3")["dimension"] == 7
    q = run_json(capsys, "trace", "qtrace", "--braid", "1", "--strands", "2")["qtrace"]
    assert {tuple(t["exp"]) for t in q["terms"]} == {(1, 0), (5, 0)}
    golf = run_json(capsys, "trace", "golf", "--depth", "4")
    assert golf["htr_end_unit_classes"] == 5 and golf["aff_end_strand_dot_powers"] == 9


def test_lickorish_check(capsys):
    assert run_json(capsys, "check", "lickorish", "--braid", "1 -2 1 -2", "--strands", "3")["holds"]


def test_output_file(capsys, tmp_path):
    dst = tmp_path / "golf.json"
    code, out, _ = run(capsys, "-o", str(dst), "trace", "golf", "--depth", "1")
    assert code == 0 and out == ""
    assert json.loads(dst.read_text())["depth"] == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["trace", "vertical", "--model", "tl", "--max-n", "2", "--seed", "3"],
        ["algebra", "affine-hecke", "--n", "3", "--normalize", "x1 T2 T1 x3", "--seed", "9"],
        ["invariant", "kauffman", "--braid", "1 1 -2", "--strands", "3"],
    ],
)
def test_output_is_deterministic(capsys, argv):
    assert run(capsys, *argv) == run(capsys, *argv)


@pytest.mark.parametrize(
    "argv",
    [
        ["invariant", "jones", "--braid", "1 5", "--strands", "2"],
        ["invariant", "jones", "--braid", "1"],
        ["invariant", "kauffman", "--braid", "1", "--strands", "2", "--method", "hecke"],
        ["algebra", "affine-hecke", "--n", "2", "--normalize", "T7"],
        ["trace", "qtrace", "--braid", "x", "--strands", "2"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert "error" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["invariant", "alexander", "--braid", "1", "--strands", "2"])
    assert info.value.code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["invariant", "jones", "--pd", "/nonexistent/pd.json"],
        ["affinize", "/nonexistent/file.pres"],
        ["trace", "vertical", "--model", "tl", "--max-n", "9"],
    ],
)
def test_computation_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert "computation error" in err


def test_bad_pd_file_exits_1(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"crossings": [[0, 1, 2, 4]], "signs": [1]}))
    code, _, err = run(capsys, "invariant", "jones", "--pd", str(path))
    assert code == 1 and "exactly twice" in err
