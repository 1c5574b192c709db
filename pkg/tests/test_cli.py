"""Command line front end: file formats, exit codes, reports, generation."""

import json

import pytest

from subsetfvs import cli
from subsetfvs.cli import CliError, main, parse_graph_file, write_graph_file
from subsetfvs.graphs import Graph
from subsetfvs.layouts import layout_from_order, parse_layout, serialize_layout, width

TRIANGLE = """\
c a triangle with one tracked vertex
p sfvs 3 3
v v1 1 1
v v2 1 0
v v3 1 0
e v1 v2
e v2 v3
e v3 v1
"""

PATH_T = """\
p sfvs 3 2
v t1 1 0
v a 1 0
v t2 1 0
e t1 a
e a t2
"""


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def run_json(tmp_path, capsys, argv):
    code = main(argv + ["--json", "-"])
    out = capsys.readouterr().out
    return code, json.loads(out)


# ----------------------------------------------------------------- parsing


def test_parse_round_trip():
    g, weights, s_mask, names = parse_graph_file(TRIANGLE)
    assert g.n == 3 and g.edge_count == 3
    assert weights == (1, 1, 1)
    assert s_mask == 0b001
    assert names == ["v1", "v2", "v3"]
    again = parse_graph_file(write_graph_file(g, weights, s_mask, names))
    assert again[0].n == g.n and sorted(again[0].edges()) == sorted(g.edges())
    assert again[1:] == (weights, s_mask, names)


@pytest.mark.parametrize(
    "text",
    [
        "v a 1 0\n",  # no header
        "p sfvs 1 0\np sfvs 1 0\nv a 1 0\n",
        "p wrong 1 0\nv a 1 0\n",
        "p sfvs 2 0\nv a 1 0\n",  # count mismatch
        "p sfvs 1 1\nv a 1 0\n",
        "p sfvs 1 0\nv a 1 2\n",  # bad flag
        "p sfvs 2 1\nv a 1 0\nv a 1 0\ne a a\n",  # duplicate name
        "p sfvs 2 1\nv a 1 0\nv b 1 0\ne a c\n",  # unknown endpoint
        "p sfvs 1 0\nx what\nv a 1 0\n",
    ],
)
def test_parse_rejects_malformed(text):
    with pytest.raises(CliError):
        parse_graph_file(text)


# ------------------------------------------------------------------ solve


def test_solve_triangle_with_s_flag_override(tmp_path, capsys):
    gr = write(tmp_path, "tri.gr", TRIANGLE)
    code, report = run_json(tmp_path, capsys, ["solve", "--graph", gr, "--s", "v1"])
    assert code == 0
    assert report["problem"] == "sfvs"
    assert report["n"] == 3 and report["m"] == 3
    assert report["objective_weight"] == 2
    assert report["sforest_weight"] == 2
    assert len(report["deletion_set"]) == 1
    assert report["oracle_checked"] is False
    assert set(report["width"]) == {"gf2", "rational", "mim"}
    assert report["elapsed_ms"] >= 0


def test_solve_fvs_tracks_everything(tmp_path, capsys):
    ring = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    gr = write(tmp_path, "c4.gr", write_graph_file(ring, [1] * 4, 0, ["a", "b", "c", "d"]))
    code, report = run_json(tmp_path, capsys, ["solve", "--graph", gr, "--problem", "fvs"])
    assert code == 0
    assert report["objective_weight"] == 3
    assert len(report["deletion_set"]) == 1


def test_solve_nmc_path(tmp_path, capsys):
    gr = write(tmp_path, "path.gr", PATH_T)
    code, report = run_json(
        tmp_path, capsys, ["solve", "--graph", gr, "--problem", "nmc", "--terminals", "t1,t2"]
    )
    assert code == 0
    assert report["problem"] == "nmc"
    assert report["objective_weight"] == 1
    assert report["deletion_set"] == ["a"]
    # the kept side still reports its own weight
    assert report["sforest_weight"] == 2


def test_solve_with_oracle_and_layout_file(tmp_path, capsys):
    gr = write(tmp_path, "tri.gr", TRIANGLE)
    lay = layout_from_order([2, 0, 1])
    lf = write(tmp_path, "tri.layout", serialize_layout(lay, ["v1", "v2", "v3"]) + "\n")
    code, report = run_json(
        tmp_path, capsys, ["solve", "--graph", gr, "--layout", lf, "--s", "v1", "--oracle"]
    )
    assert code == 0
    assert report["objective_weight"] == 2
    assert report["oracle_checked"] is True


def test_solve_human_summary_and_json_file(tmp_path, capsys):
    gr = write(tmp_path, "tri.gr", TRIANGLE)
    out = tmp_path / "report.json"
    code = main(["solve", "--graph", gr, "--s", "v1", "--json", str(out)])
    assert code == 0
    printed = capsys.readouterr().out
    assert "objective 2" in printed
    assert json.loads(out.read_text())["objective_weight"] == 2


def test_exit_codes_for_bad_input(tmp_path, capsys):
    assert main(["solve", "--graph", str(tmp_path / "missing.gr")]) == 1
    gr = write(tmp_path, "bad.gr", "p sfvs 1 2\nv a 1 0\n")
    assert main(["solve", "--graph", gr]) == 1
    tri = write(tmp_path, "tri.gr", TRIANGLE)
    assert main(["solve", "--graph", tri, "--s", "nope"]) == 1
    assert main(["solve", "--graph", tri, "--threads", "-2"]) == 1
    capsys.readouterr()


def test_exit_code_on_oracle_mismatch(tmp_path, capsys, monkeypatch):
    gr = write(tmp_path, "tri.gr", TRIANGLE)
    monkeypatch.setattr(cli, "brute_force_sfvs", lambda inst: (99, 0))
    assert main(["solve", "--graph", gr, "--s", "v1", "--oracle"]) == 2
    assert "oracle" in capsys.readouterr().err


def test_exit_code_on_oracle_size_guard(tmp_path, capsys):
    big = Graph(21, [])
    gr = write(tmp_path, "big.gr", write_graph_file(big, [1] * 21, 0, [f"v{i}" for i in range(21)]))
    assert main(["solve", "--graph", gr, "--oracle"]) == 3
    capsys.readouterr()


# --------------------------------------------------------------- generate


def test_generate_is_deterministic(tmp_path, capsys):
    a = tmp_path / "one"
    b = tmp_path / "two"
    for prefix in (a, b):
        assert main(["generate", "random", "--n", "8", "--seed", "5", "--out", str(prefix)]) == 0
    capsys.readouterr()
    assert (tmp_path / "one.gr").read_bytes() == (tmp_path / "two.gr").read_bytes()
    assert (tmp_path / "one.layout").read_bytes() == (tmp_path / "two.layout").read_bytes()


def test_generate_round_trips_and_solves(tmp_path, capsys):
    prefix = tmp_path / "inst"
    assert main(["generate", "random", "--n", "7", "--seed", "3", "--out", str(prefix)]) == 0
    capsys.readouterr()
    g, weights, s_mask, names = parse_graph_file((tmp_path / "inst.gr").read_text())
    assert g.n == 7 and weights == (1,) * 7
    layout = parse_layout((tmp_path / "inst.layout").read_text(), names)
    assert layout.n == 7
    code, report = run_json(
        tmp_path,
        capsys,
        ["solve", "--graph", str(tmp_path / "inst.gr"), "--layout", str(tmp_path / "inst.layout"),
         "--oracle"],
    )
    assert code == 0
    assert report["oracle_checked"] is True
    assert len(report["deletion_set"]) + report["sforest_weight"] == 7


def test_generate_interval_has_unit_mim(tmp_path, capsys):
    prefix = tmp_path / "iv"
    assert main(["generate", "interval", "--n", "20", "--seed", "7", "--out", str(prefix)]) == 0
    capsys.readouterr()
    g, _, _, names = parse_graph_file((tmp_path / "iv.gr").read_text())
    layout = parse_layout((tmp_path / "iv.layout").read_text(), names)
    assert width(g, layout, "mim")[0] <= 1
    intervals = (tmp_path / "iv.intervals").read_text().splitlines()
    assert len(intervals) == 20


def test_generate_rejects_bad_size(tmp_path, capsys):
    assert main(["generate", "random", "--n", "0", "--out", str(tmp_path / "x")]) == 1
    capsys.readouterr()
