import json
from fractions import Fraction

import pytest

from pslkit import bounds, exact
from pslkit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------- compute


def test_compute_psl(tmp_path, capsys):
    f = tmp_path / "seqs.txt"
    f.write_text("+-+\n")
    code, out, _ = run(capsys, "compute", "--input", str(f), "--psl")
    assert code == 0
    assert "1" in out.split()


def test_compute_acf_all_ones(tmp_path, capsys):
    f = tmp_path / "seqs.txt"
    f.write_text("+++++\n")
    code, out, _ = run(capsys, "compute", "--input", str(f), "--acf")
    assert code == 0
    assert "5 4 3 2 1" in out


def test_compute_measure(tmp_path, capsys):
    f = tmp_path / "seqs.txt"
    f.write_text("+++\n")
    code, out, _ = run(capsys, "compute", "--input", str(f), "--measure", "2")
    assert code == 0
    assert "2" in out.split()


def test_compute_parse_error_exit_2(tmp_path, capsys):
    f = tmp_path / "seqs.txt"
    f.write_text("+-+\n+x+\n")
    code, out, err = run(capsys, "compute", "--input", str(f), "--psl")
    assert code == 2
    assert "line 2" in err and "position 2" in err


def test_compute_budget_exit_3(tmp_path, capsys):
    f = tmp_path / "seqs.txt"
    f.write_text("+" * 60 + "\n")
    code, _, err = run(
        capsys, "compute", "--input", str(f), "--measure", "3", "--budget", "100"
    )
    assert code == 3
    assert "budget" in err


def test_compute_missing_file_exit_4(capsys):
    code, _, err = run(capsys, "compute", "--input", "/does/not/exist", "--psl")
    assert code == 4


def test_compute_paths_agree(tmp_path, capsys):
    f = tmp_path / "seqs.txt"
    f.write_text("++-+--+++-\n")
    outputs = []
    for path in ("naive", "bitparallel", "fft"):
        code, out, _ = run(
            capsys, "compute", "--input", str(f), "--acf", "--path", path,
            "--format", "csv",
        )
        assert code == 0
        outputs.append(out)
    assert outputs[0] == outputs[1] == outputs[2]


# ----------------------------------------------------------------- verify


def test_verify_even_single(capsys):
    code, out, _ = run(capsys, "verify", "--lemma", "even-single", "--m", "4", "--q", "2")
    assert code == 0
    assert "True" in out and "False" not in out


def test_verify_moment(capsys):
    code, out, _ = run(capsys, "verify", "--moment", "--n", "6", "--p", "1")
    assert code == 0


def test_verify_concentration(capsys):
    code, out, _ = run(capsys, "verify", "--concentration", "--n", "10")
    assert code == 0
    assert out.count("concentration") == 50


def test_verify_sandwiches(capsys):
    code, out, _ = run(capsys, "verify", "--sandwich", "all")
    assert code == 0


def test_verify_independence(capsys):
    code, out, _ = run(capsys, "verify", "--independence", "--n", "8")
    assert code == 0


def test_verify_nothing_requested_exit_2(capsys):
    code, _, err = run(capsys, "verify")
    assert code == 2


def test_verify_budget_exit_3(capsys):
    code, _, err = run(
        capsys, "verify", "--lemma", "even-double", "--n", "8", "--q", "2",
        "--budget", "10",
    )
    assert code == 3


# --------------------------------------------------------------- simulate


def test_simulate_trend_rows_and_manifest(tmp_path, capsys):
    out = tmp_path / "run"
    code, _, _ = run(
        capsys, "simulate", "trend", "--n", "64,128", "--trials", "200",
        "--seed", "7", "--out", str(out),
    )
    assert code == 0
    csv = (out / "trend.csv").read_text()
    lines = csv.strip().splitlines()
    assert lines[0] == "n,mean,se,lower_bound,sqrt2"
    assert len(lines) == 3
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "simulate trend"
    assert set(manifest["outputs"]) == {"trend.csv", "trend.json"}
    assert manifest["seed"] == 7
    mirror = json.loads((out / "trend.json").read_text())
    assert mirror["meta"]["seed"] == 7
    assert mirror["meta"]["trials"] == 200
    assert len(mirror["rows"]) == 2


def test_simulate_trend_reruns_byte_identical(tmp_path, capsys):
    args = ("simulate", "trend", "--n", "64,128", "--trials", "150", "--seed", "3")
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, *args, "--out", str(a))[0] == 0
    assert run(capsys, *args, "--out", str(b))[0] == 0
    assert (a / "trend.csv").read_bytes() == (b / "trend.csv").read_bytes()
    assert (a / "trend.json").read_bytes() == (b / "trend.json").read_bytes()


def test_simulate_trend_workers_byte_identical(tmp_path, capsys):
    base = ("simulate", "trend", "--n", "64,128", "--trials", "400", "--seed", "5")
    a, b = tmp_path / "w1", tmp_path / "w8"
    assert run(capsys, *base, "--workers", "1", "--out", str(a))[0] == 0
    assert run(capsys, *base, "--workers", "8", "--out", str(b))[0] == 0
    assert (a / "trend.csv").read_bytes() == (b / "trend.csv").read_bytes()


def test_simulate_tail_auto_lambda(tmp_path, capsys):
    out = tmp_path / "tail"
    code, text, _ = run(
        capsys, "simulate", "tail", "--n", "16", "--u", "1", "--lambda", "auto",
        "--trials", "40000", "--seed", "1", "--out", str(out),
    )
    assert code == 0
    rows = json.loads((out / "tails.json").read_text())["rows"]
    est = rows[0]["estimate"]
    exact_p = float(exact.exact_tail_single(16, 1, bounds.lambda_n(16)))
    assert est["ci_low"] <= exact_p <= est["ci_high"]


def test_simulate_joint(tmp_path, capsys):
    out = tmp_path / "joint"
    code, text, _ = run(
        capsys, "simulate", "joint", "--n", "20", "--u", "1", "--v", "2",
        "--lambda", "3.0", "--trials", "3000", "--seed", "2", "--out", str(out),
    )
    assert code == 0
    csv = (out / "tails.csv").read_text()
    assert csv.splitlines()[0] == "n,u,v,lambda,estimate,ci_lo,ci_hi,bound"


def test_simulate_rate(tmp_path, capsys):
    out = tmp_path / "rate"
    code, text, _ = run(
        capsys, "simulate", "rate", "--n", "64", "--trials", "2000",
        "--seed", "9", "--out", str(out),
    )
    assert code == 0
    assert (out / "rate.csv").exists()
    assert "lower bound" in text


def test_simulate_concentration(tmp_path, capsys):
    out = tmp_path / "conc"
    code, _, _ = run(
        capsys, "simulate", "concentration", "--n", "32", "--trials", "1000",
        "--seed", "4", "--theta-points", "10", "--out", str(out),
    )
    assert code == 0
    lines = (out / "concentration.csv").read_text().splitlines()
    assert lines[0] == "theta,empirical,bound,flag"
    assert len(lines) == 11


def test_simulate_io_error_exit_4(tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("a file, not a directory")
    code, _, err = run(
        capsys, "simulate", "trend", "--n", "16", "--trials", "10",
        "--seed", "0", "--out", str(blocker / "sub"),
    )
    assert code == 4


def test_simulate_bad_input_exit_2(tmp_path, capsys):
    code, _, err = run(
        capsys, "simulate", "trend", "--n", "1", "--trials", "10",
        "--seed", "0", "--out", str(tmp_path / "x"),
    )
    assert code == 2


# ------------------------------------------------------------------ search


def test_search_min_psl_barker(capsys):
    code, out, _ = run(capsys, "search", "--min-psl", "7")
    assert code == 0
    assert "1" in out.split()
    witness = [w for w in out.split() if set(w) <= {"+", "-"} and len(w) == 7]
    assert witness


def test_search_min_psl_6(capsys):
    code, out, _ = run(capsys, "search", "--min-psl", "6", "--format", "json")
    assert code == 0
    row = json.loads(out)[0]
    assert row["min_psl"] == 2


def test_search_dist(capsys):
    code, out, _ = run(capsys, "search", "--dist", "3", "--format", "json")
    assert code == 0
    row = json.loads(out)[0]
    assert json.loads(row["distribution"]) == {"1": 4, "2": 4}
    assert row["expectation"] == "3/2"


def test_search_budget_exit_3(capsys):
    code, _, err = run(capsys, "search", "--min-psl", "40")
    assert code == 3


def test_search_nothing_exit_2(capsys):
    code, _, err = run(capsys, "search")
    assert code == 2


def test_search_manifest(tmp_path, capsys):
    out = tmp_path / "s"
    code, _, _ = run(capsys, "search", "--dist", "4", "--out", str(out))
    assert code == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["outputs"] == ["search.json"]


# -------------------------------------------------------------------- env


def test_env_override_seed(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("PSL_SEED", "41")
    out = tmp_path / "env"
    code, _, _ = run(
        capsys, "simulate", "trend", "--n", "32", "--trials", "100",
        "--out", str(out),
    )
    assert code == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["seed"] == 41
