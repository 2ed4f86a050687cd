"""Command-line interface: exact output strings and exit codes."""

import io
import contextlib

import pytest

from evacflow.cli import main
from conftest import DATA

D1 = str(DATA / "d1.json")


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def test_horizon():
    code, out, err = run("horizon", D1)
    assert code == 0 and err == ""
    assert out == "T* = 9/2, A* = {v1,v2}\nadmitted tuples: 3\n"


def test_horizon_family_listing():
    code, out, _ = run("horizon", D1, "--family")
    assert code == 0
    assert out.splitlines()[2:] == [
        "  (v2) -> {v2}, theta = 4",
        "  (v1,v1) -> {v1}, theta = 7/2",
        "  (v2,v1) -> {v1,v2}, theta = 9/2",
    ]


def test_solve():
    code, out, _ = run("solve", D1)
    assert code == 0
    assert out == (
        "T* = 9/2, A* = {v1,v2}\n"
        "admitted tuples: 3\n"
        "order v1<v2<t: lambda = 1/5, totals v1=4, v2=1\n"
        "order v2<v1<t: lambda = 4/5, totals v2=7/2, v1=3/2\n"
    )


def test_solve_trace():
    code, out, _ = run("solve", D1, "--trace")
    assert code == 0
    lines = out.splitlines()
    assert "chain: {v2} < {v1,v2}" in lines
    assert "step 1: x = (v1=2, v2=3, t=-5), alpha = 1, beta = 1/5, gamma = 4/5" in lines
    assert "step 2: x = (v1=3/2, v2=7/2, t=-5), alpha = 4/5, beta = -, gamma = -" in lines


def test_theta():
    assert run("theta", D1, "--subset", "v1,v2")[1] == "9/2\n"
    assert run("theta", D1, "--subset", "0")[1] == "7/2\n"
    assert run("theta", D1, "--subset", "v2")[1] == "4\n"


def test_oracle_commands():
    assert run("oracle", "tstar", D1)[1] == "9/2\n"
    assert run("oracle", "otA", D1, "--subset", "v1,v2", "--horizon", "9/2")[1] == "5\n"
    assert run("oracle", "feasible", D1, "--horizon", "9/2")[1] == "feasible\n"
    assert run("oracle", "feasible", D1, "--horizon", "4")[1] == "infeasible\n"


def test_solve_cross_check():
    code, out, _ = run("solve", D1, "--cross-check")
    assert code == 0
    assert out.splitlines()[-1] == "cross-check: ok"


def test_flow_out_and_verify(tmp_path):
    flow_path = str(tmp_path / "flow.json")
    code, out, _ = run("solve", D1, "--out", flow_path)
    assert code == 0
    assert out.splitlines()[-1] == "wrote %s" % flow_path
    code, out, _ = run("verify", D1, flow_path)
    assert code == 0
    assert out == "flow verified: capacity, conservation, demand\n"
    code, out, _ = run("oracle", "verify", D1, flow_path)
    assert code == 0 and out.startswith("flow verified")


def test_gen_grid_and_grid_solve(tmp_path):
    grid_path = str(tmp_path / "grid.json")
    code, out, _ = run("gen-grid", grid_path, "--side", "3", "--sink", "1,1")
    assert code == 0
    assert out == "wrote %s: 9 nodes, 24 edges, sink 4\n" % grid_path
    code, out, _ = run("solve", grid_path, "--grid", "--cross-check")
    assert code == 0
    assert out.splitlines()[0] == "T* = 3, A* = {0,1,2,3,5,6,7,8}"
    assert out.splitlines()[-1] == "cross-check: ok"


def test_bench_table():
    code, out, _ = run("bench", "--sides", "3,4", "--sink-mode", "corner")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["side", "nodes", "candidates", "admitted",
                                "T*", "seconds"]
    assert lines[1].split()[:5] == ["3", "9", "30", "19", "5"]
    assert lines[2].split()[:5] == ["4", "16", "65", "40", "17/2"]
    assert lines[3].startswith("candidate growth slope: ")


def test_missing_file_exits_one(tmp_path):
    code, out, err = run("horizon", str(tmp_path / "absent.json"))
    assert code == 1 and out == ""
    assert err.startswith("error: ")


def test_unknown_node_exits_one():
    code, _, err = run("theta", D1, "--subset", "bogus")
    assert code == 1
    assert err == "error: unknown node 'bogus'\n"


def test_repeat_runs_are_identical():
    first = run("solve", D1, "--trace")
    second = run("solve", D1, "--trace")
    assert first == second
