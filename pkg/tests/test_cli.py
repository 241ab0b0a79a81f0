import csv
import io
import subprocess
import sys
from pathlib import Path

import pytest

from secnet import cli
from secnet.formulations import UnsolvedError

NETS = Path(__file__).resolve().parents[1] / "demos" / "networks"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_single_edge(capsys):
    code, out, _ = run(capsys, "solve", NETS / "single_edge.net", "--algo", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "0.500000000"
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    assert rows[0]["kind"] == "edge" and rows[0]["name"] == "e1"
    assert float(rows[0]["m"]) == pytest.approx(0.5)


def test_solve_algo4_two_wiretaps(capsys):
    code, out, _ = run(capsys, "solve", NETS / "parallel_lossless.net", "--algo", "4", "--wiretaps", "2")
    assert code == 0 and out.splitlines()[0] == "0.000000000"


def test_solve_fig5_matches_oracle(capsys):
    _, out, _ = run(capsys, "solve", NETS / "two_hop_fig5.net", "--algo", "2")
    _, ora, _ = run(capsys, "oracle", "line", "0.2 0.5", "0.6 1.0")
    assert out.splitlines()[0] == ora.strip()


@pytest.mark.parametrize(
    "params,expect",
    [
        (["parallel", "0", "0", "0", "0"], "1.000000000"),
        (["line", "0 0.5"], "0.500000000"),
        (["line", "0 0"], "0.000000000"),
        (["line", "0", "0.5", "0", "0.5"], None),
    ],
)
def test_oracle(capsys, params, expect):
    code, out, _ = run(capsys, "oracle", *params)
    assert code == 0
    if expect:
        assert out.strip() == expect


@pytest.mark.parametrize(
    "argv",
    [
        ["oracle", "parallel", "0", "0"],
        ["oracle", "line", "0 0.5 0.2"],
        ["oracle", "line", "0 1.5"],
        ["solve", "/nonexistent/file.net"],
        ["solve", NETS / "single_edge.net", "--algo", "9"],
        ["sweep"],
        ["simulate", NETS / "single_edge.net", "--eve", "ghost"],
        ["bogus"],
    ],
)
def test_input_errors_exit_4(capsys, argv):
    code = None
    try:
        code, _, err = run(capsys, *argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 4


def test_bad_network_file(tmp_path, capsys):
    f = tmp_path / "bad.net"
    f.write_text("edge e1 s d 0.5\nsource s\nsink d\n")
    code, _, err = run(capsys, "solve", f)
    assert code == 4 and err


def test_resource_limit_exit_5(capsys):
    code, _, err = run(capsys, "solve", NETS / "diamond.net", "--algo", "2", "--max-paths", "1")
    assert code == 5 and "limit" in err


@pytest.mark.parametrize("status,code", [("infeasible", 2), ("unbounded", 3)])
def test_unsolved_exit_codes(monkeypatch, capsys, status, code):
    # every formulation admits the zero scheme and is bounded, so force the status
    def fail(*a, **k):
        raise UnsolvedError(status)

    monkeypatch.setattr(cli, "solve_scheme", fail)
    got, _, err = run(capsys, "solve", NETS / "single_edge.net")
    assert got == code and status in err


def test_sweep_preset_byte_stable(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, "sweep", "--preset", "fig3", "-o", a)[0] == 0
    assert run(capsys, "sweep", "--preset", "fig3", "--output", b)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "delta_e,arq_only,arq_mds"


def test_sweep_custom(capsys):
    code, out, _ = run(
        capsys, "sweep", NETS / "two_hop_fig5.net", "--edge", "e1", "--param", "delta",
        "--start", "0", "--stop", "1", "--step", "0.5", "--algos", "1,2,line_oracle",
    )
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["delta", "algo1", "algo2", "line_oracle"]
    assert [r[0] for r in rows[1:]] == ["0", "0.5", "1"]
    assert all(r[2] == r[3] for r in rows[1:])


def test_simulate_summary_and_determinism(capsys):
    argv = ["simulate", NETS / "single_edge.net", "--eve", "e1", "--slots", "2048", "--trials", "3", "--seed", "7"]
    code, out, _ = run(capsys, *argv)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["trial"] for r in rows] == ["0", "1", "2", "mean", "std"]
    assert all(float(r["lp_rate"]) == pytest.approx(0.5) for r in rows)
    assert float(rows[3]["empirical_secure_rate"]) == pytest.approx(0.5, rel=0.1)
    assert run(capsys, *argv)[1] == out


def test_simulate_tiny_horizon(capsys):
    code, out, _ = run(capsys, "simulate", NETS / "two_hop_fig5.net", "--eve", "e1", "--slots", "10")
    assert code == 0
    row = next(csv.DictReader(io.StringIO(out)))
    assert int(row["max_edge_slots"]) <= 10


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "secnet", "oracle", "line", "0 0.5"], capture_output=True, text=True, check=False
    )
    assert res.returncode == 0 and res.stdout.strip() == "0.500000000"
