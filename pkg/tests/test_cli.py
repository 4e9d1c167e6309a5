import subprocess
import sys

import pytest

from cnot_forge.cli import main
from cnot_forge.fixtures import fixture_path
from cnot_forge.gf2 import Circuit, format_matrix, parse_matrix, random_invertible


@pytest.fixture
def compare6_file():
    return str(fixture_path("compare6"))


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_synth_and_verify(tmp_path, compare6_file, capsys):
    circ = tmp_path / "c.txt"
    code, out, _ = run(["synth", compare6_file, "--method", "mcg", "--out", str(circ)], capsys)
    assert code == 0
    assert "gates=12" in out and "convergent=true" in out
    code, out, _ = run(["verify", compare6_file, str(circ)], capsys)
    assert code == 0 and out.startswith("PASS")
    lines = circ.read_text().splitlines()
    circ.write_text("\n".join(lines[1:]) + "\n")
    code, out, _ = run(["verify", compare6_file, str(circ)], capsys)
    assert code == 1 and out.startswith("FAIL")


def test_synth_to_stdout(compare6_file, capsys):
    code, out, err = run(["synth", compare6_file, "--method", "mcg-reorder"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "perm 1 0 3 5 2 4"
    assert "method=mcg-reorder" in err


@pytest.mark.parametrize("method", ["aecm", "gaussian", "algorithm1", "aecmp", "mcgp"])
def test_synth_methods(method, tmp_path, compare6_file, capsys):
    circ = tmp_path / "c.txt"
    assert run(["synth", compare6_file, "--method", method, "--out", str(circ)], capsys)[0] == 0
    assert run(["verify", compare6_file, str(circ)], capsys)[0] == 0


def test_partial_aecm(capsys):
    code, out, _ = run(["synth", str(fixture_path("stuck5")), "--method", "aecm", "--threshold", "19"], capsys)
    assert code == 0
    assert "residual_cost=16" in out
    assert parse_matrix(out.split("\n", 1)[1]) == parse_matrix(fixture_path("stuck5_cost16").read_text())


def test_threshold_only_for_aecm(compare6_file, capsys):
    with pytest.raises(SystemExit):
        main(["synth", compare6_file, "--method", "mcg", "--threshold", "3"])


def test_bad_inputs(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("2\n12\n01\n")
    assert run(["synth", str(bad)], capsys)[0] == 2
    singular = tmp_path / "s.txt"
    singular.write_text("2\n11\n11\n")
    assert run(["synth", str(singular)], capsys)[0] == 2
    assert run(["synth", str(tmp_path / "missing.txt")], capsys)[0] == 2


def test_oracle_min(tmp_path, capsys):
    code, out, _ = run(["oracle", "min", str(fixture_path("stuck5"))], capsys)
    assert code == 0 and out.strip() == "9"
    big = tmp_path / "big.txt"
    big.write_text(format_matrix(random_invertible(6, 0)))
    assert run(["oracle", "min", str(big)], capsys)[0] == 3


def test_oracle_hist_and_build(tmp_path, capsys):
    png = tmp_path / "h.png"
    code, out, _ = run(["oracle", "hist", "-n", "3", "--figure", str(png)], capsys)
    assert code == 0 and out.startswith("gates,functions\n0,1\n")
    assert png.stat().st_size > 0
    out_bin = tmp_path / "t.bin"
    assert run(["oracle", "build", "-n", "3", "--out", str(out_bin)], capsys)[0] == 0
    assert out_bin.exists()
    assert run(["oracle", "hist", "-n", "7"], capsys)[0] == 3


def test_oracle_peephole(tmp_path, capsys):
    circ = tmp_path / "c.txt"
    circ.write_text("cnot 0 1\ncnot 2 3\ncnot 0 1\n")
    code, out, err = run(["oracle", "peephole", str(circ)], capsys)
    assert code == 0
    assert Circuit.from_text(out, 4).gates == Circuit.from_text("cnot 2 3\n", 4).gates
    assert "3 -> 1" in err


def test_random(tmp_path, capsys):
    code, out, _ = run(["random", "-n", "6", "--seed", "3"], capsys)
    assert code == 0 and parse_matrix(out) == random_invertible(6, 3)


def test_bench_reports(tmp_path, capsys):
    prefix = tmp_path / "rep" / "t1"
    code, _, _ = run(["bench", "table1", "-n", "4", "5", "--trials", "3", "--out", str(prefix)], capsys)
    assert code == 0
    for ext in (".csv", ".md", ".png"):
        assert prefix.with_suffix(ext).stat().st_size > 0
    code, out, _ = run(["bench", "table3", "--trials", "2", "--matrix", str(fixture_path("stuck5"))], capsys)
    assert code == 0 and out.startswith("method,")
    code, out, _ = run(["bench", "hitrates", "--samples", "0"], capsys)
    assert code == 0


def test_bench_hitrates_report(tmp_path, capsys):
    prefix = tmp_path / "hr"
    assert run(["bench", "hitrates", "--samples", "20", "--out", str(prefix)], capsys)[0] == 0
    assert "mcg_nonconvergent" in prefix.with_suffix(".md").read_text()
    assert prefix.with_suffix(".png").exists()


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "cnot_forge", "random", "-n", "3", "--seed", "1"],
        capture_output=True, text=True, check=True,
    )
    assert parse_matrix(res.stdout).n == 3
