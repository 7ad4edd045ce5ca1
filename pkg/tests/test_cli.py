import csv
import io
import json
import subprocess
import sys

import pytest

from moebius_tails import cli
from moebius_tails.moebius import read_block_cache


def run(argv, capsys):
    code = cli.run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    meta = [line for line in text.splitlines() if line.startswith("#")]
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return meta, list(csv.DictReader(io.StringIO("\n".join(body))))


def test_msum_csv_and_manifest(capsys):
    code, out, err = run(["msum", "--s", "2", "--x", "0", "1", "--tol", "1e-8"], capsys)
    assert code == 0
    meta, rows = parse_csv(out)
    assert meta[0].startswith("# moebius-lab msum schema v")
    assert len(rows) == 2 and float(rows[0]["value_re"]) == pytest.approx(0.6079271018540267, abs=1e-8)
    assert "value_error" in rows[0]
    manifest = json.loads(err)
    assert manifest["command"] == "msum" and manifest["argv"][0] == "msum"
    assert "wall_time_s" in manifest and manifest["version"]


def test_seventeen_digits(capsys):
    _, out, _ = run(["psum", "--s", "2", "--x", "0"], capsys)
    _, rows = parse_csv(out)
    from moebius_tails.series import SeriesParams, plain_tail

    assert float(rows[0]["value_re"]) == plain_tail(SeriesParams(2, 0)).value.real


def test_complex_s_syntax(capsys):
    for text in ("3+1i", "3+1j", "(3+1j)"):
        code, out, _ = run(["mb", "--s", text, "--x", "2"], capsys)
        assert code == 0
        assert "s=(3+1j)" in out


def test_exit_codes(capsys):
    assert run(["msum", "--s", "0.5", "--x", "1"], capsys)[0] == cli.EXIT_DOMAIN
    assert run(["msum", "--s", "2"], capsys)[0] == cli.EXIT_USAGE
    assert run(["nonsense"], capsys)[0] == cli.EXIT_USAGE
    assert run(["msum", "--s", "two", "--x", "1"], capsys)[0] == cli.EXIT_USAGE
    assert run(["msum", "--s", "2", "--x", "1", "--tol", "1e-40", "--capacity", "1e6"],
               capsys)[0] == cli.EXIT_DOMAIN
    assert run(["residue-approx", "--s", "2.5", "--x", "100", "--zeros", "/no/such/file"],
               capsys)[0] == cli.EXIT_DOMAIN


def test_nonconvergence_exit(capsys, monkeypatch):
    from moebius_tails.errors import ConvergenceError

    def boom(args):
        raise ConvergenceError("quadrature budget exhausted")

    monkeypatch.setitem(cli.COMMANDS, "mb", boom)
    assert run(["mb", "--s", "2.5", "--x", "1"], capsys)[0] == cli.EXIT_NONCONVERGENCE


def test_env_override_mirrored(capsys, monkeypatch):
    monkeypatch.setenv("MOEBIUS_LAB_BLOCK_SIZE", "4096")
    code, _, err = run(["msum", "--s", "2", "--x", "1", "--tol", "1e-6"], capsys)
    manifest = json.loads(err)
    assert code == 0
    assert manifest["environment"] == {"MOEBIUS_LAB_BLOCK_SIZE": "4096"}
    assert manifest["parameters"]["block_size"] == 4096
    monkeypatch.setenv("MOEBIUS_LAB_BLOCK_SIZE", "lots")
    assert run(["msum", "--s", "2", "--x", "1"], capsys)[0] == cli.EXIT_USAGE


def test_sieve_and_cache(capsys, tmp_path):
    cache = tmp_path / "b.bin"
    code, out, _ = run(["sieve", "--start", "10", "--length", "5", "--cache", str(cache)], capsys)
    _, rows = parse_csv(out)
    assert [int(r["mu"]) for r in rows] == [1, -1, 0, -1, 1]
    assert read_block_cache(cache).values.tolist() == [1, -1, 0, -1, 1]
    _, out, _ = run(["sieve", "--mertens", "10", "100", "10000"], capsys)
    _, rows = parse_csv(out)
    assert [int(r["mertens"]) for r in rows] == [-1, 1, -23]


def test_verify_identities(capsys):
    code, out, _ = run(["verify-identities", "--s", "2.5"], capsys)
    assert code == 0
    _, rows = parse_csv(out)
    assert {r["identity"] for r in rows} >= {"dirichlet_inverse_zeta", "power_series",
                                             "mellin_barnes", "laplace_integral"}
    assert all(r["pass"] == "true" for r in rows)


def test_watson_table(capsys):
    _, out, _ = run(["watson", "--s", "2", "--x", "10", "10000"], capsys)
    _, rows = parse_csv(out)
    assert float(rows[1]["ratio_deviation"]) < 1e-3


def test_replay_bitwise(capsys, tmp_path):
    out1, man = tmp_path / "a.csv", tmp_path / "a.json"
    argv = ["fit", "--s", "2", "--xmin", "100", "--xmax", "10000", "--points", "9",
            "--cutoff", "200000", "--block-size", "20000", "--workers", "1",
            "--out", str(out1), "--manifest", str(man), "--samples", str(tmp_path / "s.csv")]
    assert run(argv, capsys)[0] == 0
    out2 = tmp_path / "b.csv"
    code, _, _ = run(["replay", str(man), "--workers", "4", "--out", str(out2),
                      "--manifest", str(tmp_path / "b.json")], capsys)
    assert code == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert json.loads((tmp_path / "b.json").read_text())["workers"] == 4
    text = out1.read_text()
    assert "# summary=" in text and "verdict" in text


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "moebius_tails", "psum", "--s", "2", "--x", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("# moebius-lab psum")
