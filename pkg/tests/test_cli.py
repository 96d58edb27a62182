"""Command-line behavior: outputs, exit codes, determinism."""

from __future__ import annotations

import json
import math

import pytest

from matsum import cli
from matsum import expressions as ex


@pytest.fixture(scope="module")
def g2_path(tmp_path_factory):
    from matsum import fixtures

    path = tmp_path_factory.mktemp("graphs") / "g2.json"
    path.write_text(json.dumps(fixtures.graph_to_dict(fixtures.g2())))
    return str(path)


@pytest.fixture(scope="module")
def g3_path(tmp_path_factory):
    from matsum import fixtures

    path = tmp_path_factory.mktemp("graphs") / "g3.json"
    path.write_text(json.dumps(fixtures.graph_to_dict(fixtures.g3())))
    return str(path)


@pytest.fixture(scope="module")
def g4_path(tmp_path_factory):
    from matsum import fixtures

    path = tmp_path_factory.mktemp("graphs") / "g4.json"
    path.write_text(json.dumps(fixtures.graph_to_dict(fixtures.g4())))
    return str(path)


def run(capsys, *argv):
    code = cli.run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_ok(capsys, g2_path):
    code, out, _ = run(capsys, "validate", "--graph", g2_path)
    assert code == 0
    assert "V=2 I=2 L=1 root=b" in out


def test_validate_bad_graph_exits_1(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"vertices": ["a"],
                               "edges": [{"id": 1, "from": "a", "to": "a"}]}))
    code, out, err = run(capsys, "validate", "--graph", str(bad))
    assert code == 1
    assert "invalid graph" in err


def test_missing_file_exits_1(capsys):
    code, _, err = run(capsys, "validate", "--graph", "/nope/missing.json")
    assert code == 1


def test_usage_error_exits_64(capsys):
    with pytest.raises(SystemExit) as info:
        cli.run(["sum"])  # missing --graph
    assert info.value.code == 64
    with pytest.raises(SystemExit) as info:
        cli.run(["frobnicate", "--graph", "x"])
    assert info.value.code == 64


def test_trees_listing(capsys, g4_path):
    code, out, _ = run(capsys, "trees", "--graph", g4_path)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[-1] == "count: 8"
    assert lines[0] == "{1,2,3}"


def test_cutsets_listing(capsys, g4_path):
    code, out, _ = run(capsys, "cutsets", "--graph", g4_path)
    assert code == 0
    body = out.strip().splitlines()
    assert "{1,2}" in body and "{3,4}" in body
    assert body[-1] == "count: 2 (sizes 1..2)"


def test_operator_counts(capsys, g3_path):
    code, out, _ = run(capsys, "operator", "--graph", g3_path, "--format", "json")
    assert code == 0
    assert len(json.loads(out)["subsets"]) == 7
    code, out, _ = run(capsys, "operator", "--graph", g3_path, "--format", "json",
                       "--full")
    assert len(json.loads(out)["subsets"]) == 8


def test_sum_json_roundtrip(capsys, g2_path):
    code, out, _ = run(capsys, "sum", "--graph", g2_path, "--format", "json")
    assert code == 0
    parsed = ex.parse_expression(out)
    from matsum import engine, fixtures

    assert parsed == engine.matsubara_sum(fixtures.g2())


def test_sum_latex(capsys, g2_path):
    code, out, _ = run(capsys, "sum", "--graph", g2_path, "--format", "latex")
    assert code == 0
    assert "n_B(q_{1})" in out


def test_sum_direct_matches_operator(capsys, g3_path):
    _, out_op, _ = run(capsys, "sum", "--graph", g3_path, "--format", "json")
    _, out_dir, _ = run(capsys, "sum", "--graph", g3_path, "--format", "json",
                        "--method", "direct")
    assert out_op == out_dir


def test_eval_value(capsys, g2_path):
    code, out, _ = run(capsys, "eval", "--graph", g2_path, "--target", "integral",
                       "--q", "1:1.0,2:1.0", "--n", "a:1")
    assert code == 0
    assert float(out) == pytest.approx(2 * math.pi / 5, rel=1e-12)


def test_eval_degenerate_exits_1(capsys, g2_path):
    code, _, err = run(capsys, "eval", "--graph", g2_path,
                       "--q", "1:1.0,2:1.0", "--n", "a:0")
    assert code == 1
    assert "degenerate" in err


def test_verify_passes_and_is_deterministic(capsys, g3_path):
    argv = ("verify", "--graph", g3_path, "--trials", "4", "--cutoff", "300",
            "--tol", "1e-3", "--seed", "7")
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2  # byte-identical under the same seed
    lines = out1.strip().splitlines()
    header = json.loads(lines[0])
    assert header["seed"] == 7 and header["trials"] == 4
    assert len(lines) == 5
    assert all(json.loads(l)["pass"] for l in lines[1:])


def test_verify_failure_exits_2(capsys, g3_path):
    code, out, _ = run(capsys, "verify", "--graph", g3_path, "--trials", "2",
                       "--cutoff", "50", "--tol", "1e-12", "--seed", "7")
    assert code == 2


def test_verify_integral_target(capsys, g2_path):
    code, out, _ = run(capsys, "verify", "--graph", g2_path, "--target",
                       "integral", "--trials", "3", "--tol", "1e-9", "--seed", "5")
    assert code == 0
    assert all(json.loads(l)["pass"] for l in out.strip().splitlines()[1:])


def test_gaudin_check(capsys, g4_path):
    code, out, _ = run(capsys, "gaudin-check", "--graph", g4_path,
                       "--trials", "5", "--seed", "11")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 6
    for line in lines[1:]:
        assert json.loads(line)["residual"] < 1e-12


def test_hierarchy_flag(capsys, g2_path):
    _, out1, _ = run(capsys, "integral", "--graph", g2_path, "--format", "json")
    _, out2, _ = run(capsys, "integral", "--graph", g2_path, "--format", "json",
                     "--hierarchy", "2,1")
    assert out1 == out2  # two-vertex closed form is hierarchy independent
