import json
import subprocess
import sys

import pytest

from moore_obstruction.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_text(capsys):
    code, out, _ = run(capsys, "verify", "--p", "3", "--k", "1")
    assert code == 0
    assert "n_max=2" in out


def test_verify_p2_k1_is_usage_error(capsys):
    code, _, err = run(capsys, "verify", "--p", "2", "--k", "1")
    assert code == 64
    assert "usage" in err


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--p", "5", "--k", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["n_max"] == 24


def test_verify_p2_json(capsys):
    code, out, _ = run(capsys, "verify", "--p", "2", "--k", "3", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["lower"]["n_max"] == 7 and doc["upper"]["first_failure"] == 16


def test_verify_crosscheck_failure_exit_code(capsys, monkeypatch):
    from moore_obstruction import cli
    from moore_obstruction.obstruction import Verification, an_bound

    monkeypatch.setattr(cli, "verify_theorem", lambda p, k: Verification(False, an_bound(p, k)))
    code, _, err = run(capsys, "verify", "--p", "3", "--k", "1")
    assert code == 2
    assert "disagree" in err


@pytest.mark.parametrize("argv", [
    ["verify", "--p", "4", "--k", "1"],
    ["verify", "--p", "3", "--k", "0"],
    ["verify", "--p", "three", "--k", "1"],
    ["solve", "--q", "2", "--m", "1"],
    ["matrix", "--q", "1", "--n", "2"],
    ["generator", "--p", "9"],
    ["table", "--p", "3,4", "--kmax", "1"],
    ["bogus"],
    [],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        code = main(argv)
        raise SystemExit(code)
    assert info.value.code == 64


def test_solve_text(capsys):
    code, out, _ = run(capsys, "solve", "--q", "2", "--m", "4", "--a1", "1")
    assert code == 0
    assert "x - 1/2*x^2 + 1/3*x^3" in out
    assert "residual: 0" in out
    code, out, _ = run(capsys, "solve", "--q", "3", "--m", "2", "--a1", "5")
    assert out.splitlines()[0].startswith("5*x")


def test_solve_q1_rejected(capsys):
    code, _, _ = run(capsys, "solve", "--q", "1", "--m", "4", "--a1", "1")
    assert code == 64


def test_solve_json_rational_a1(capsys):
    code, out, _ = run(capsys, "solve", "--q", "3", "--m", "4", "--a1", "7/2", "--format", "json")
    doc = json.loads(out)
    assert doc == {"modulus": 4, "coeffs": ["0", "7/2", "-7/4", "7/6"], "residual_zero": True}


def test_table_csv(capsys):
    code, out, _ = run(capsys, "table", "--p", "5,3", "--kmax", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "p,k,c,first_failure,n_max"
    assert [tuple(int(x) for x in (l.split(",")[0], l.split(",")[1], l.split(",")[4])) for l in lines[1:]] == [
        (3, 1, 2), (3, 2, 8), (5, 1, 4), (5, 2, 24)
    ]


def test_table_single_row(capsys):
    _, out, _ = run(capsys, "table", "--p", "3", "--kmax", "1")
    assert out.splitlines()[1:] == ["3,1,2,3,2"]


def test_table_p2(capsys):
    _, out, _ = run(capsys, "table", "--p", "2", "--kmax", "3", "--format", "json")
    doc = json.loads(out)
    assert [(d["k"], d["bound"], d["n_max"], d["first_failure"]) for d in doc] == [
        (2, "lower", 3, 4), (2, "upper", 7, 8), (3, "lower", 7, 8), (3, "upper", 15, 16)
    ]


def test_table_file_and_io_error(capsys, tmp_path):
    path = tmp_path / "t.csv"
    code, out, _ = run(capsys, "table", "--p", "3", "--kmax", "2", "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("p,k,c,first_failure,n_max\n3,1,2,3,2\n")
    code, _, err = run(capsys, "table", "--p", "3", "--kmax", "1", "--out", str(tmp_path / "no" / "t.csv"))
    assert code == 74 and "cannot write" in err


@pytest.mark.parametrize("p, text", [
    ("5", "2 (order 20 mod 25)"),
    ("2", "3 (fixed by convention)"),
    ("7", "3 (order 42 mod 49)"),
])
def test_generator(capsys, p, text):
    code, out, _ = run(capsys, "generator", "--p", p)
    assert code == 0 and out.strip() == text


def test_matrix(capsys):
    code, out, _ = run(capsys, "matrix", "--q", "2", "--n", "2")
    assert code == 0
    assert "kernel [(1, -1/2)]" in out and "dim 1" in out
    _, out, _ = run(capsys, "matrix", "--q", "2", "--n", "1")
    assert "kernel [(1)]" in out
    _, out, _ = run(capsys, "matrix", "--q", "3", "--n", "4", "--format", "json")
    doc = json.loads(out)
    assert doc["kernel"] == [["1", "-1/2", "1/3", "-1/4"]] and doc["dim"] == 1


ALL_JSON = [
    ["verify", "--p", "7", "--k", "1"],
    ["verify", "--p", "2", "--k", "2"],
    ["solve", "--q", "5", "--m", "6"],
    ["table", "--p", "2,3", "--kmax", "2"],
    ["generator", "--p", "11"],
    ["generator", "--p", "2"],
    ["matrix", "--q", "2", "--n", "3"],
]


@pytest.mark.parametrize("argv", ALL_JSON)
def test_json_is_strict_and_float_free(capsys, argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == 0

    def no_float(_):
        raise AssertionError("float in JSON output")

    json.loads(out, parse_float=no_float, parse_constant=no_float)


@pytest.mark.parametrize("argv", ALL_JSON)
def test_deterministic(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second


def test_format_env_default(capsys, monkeypatch):
    monkeypatch.setenv("MOORE_OBSTRUCTION_FORMAT", "json")
    _, out, _ = run(capsys, "generator", "--p", "5")
    assert json.loads(out)["q"] == 2


def test_selftest(capsys):
    code, out, _ = run(capsys, "--selftest")
    assert code == 0
    assert "5 passed, 0 failed" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "moore_obstruction", "generator", "--p", "3"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "2 (order 6 mod 9)"
