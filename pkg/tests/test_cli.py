"""Command-line interface: argument handling, outputs, and exit codes."""

import csv
import json
import subprocess
import sys

from admmdec.cli import main

from conftest import HAMMING_PATH, TANNER_PATH


def test_project_exact_output(capsys):
    assert main(["project", "--d", "3", "--vector", "1,1,1"]) == 0
    assert capsys.readouterr().out.strip() == "0.666667,0.666667,0.666667"


def test_project_shape_mismatch_is_an_error(capsys):
    assert main(["project", "--d", "4", "--vector", "1,1,1"]) == 2
    assert "error:" in capsys.readouterr().err


def test_decode_with_simulated_channel(capsys):
    rc = main(
        ["decode", "--code", str(HAMMING_PATH), "--decoder", "lp", "--ebn0", "3.0", "--seed", "7"]
    )
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) == {"x_soft", "x_hard", "iterations", "converged", "integral", "valid_codeword"}
    assert len(doc["x_soft"]) == 7


def test_decode_with_llr_file(tmp_path, capsys):
    llr = tmp_path / "llr.txt"
    llr.write_text("2.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0\n")
    rc = main(["decode", "--code", str(HAMMING_PATH), "--decoder", "pd-l2", "--llr", str(llr)])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["x_hard"] == [0] * 7
    assert doc["converged"] and doc["valid_codeword"]


def test_decode_requires_exactly_one_input(tmp_path, capsys):
    llr = tmp_path / "llr.txt"
    llr.write_text("1,1,1,1,1,1,1")
    base = ["decode", "--code", str(HAMMING_PATH), "--decoder", "lp"]
    assert main(base) == 2
    assert main(base + ["--llr", str(llr), "--ebn0", "2.0"]) == 2
    err = capsys.readouterr().err
    assert "exactly one of" in err


def test_decode_rejects_wrong_llr_length(tmp_path, capsys):
    llr = tmp_path / "llr.txt"
    llr.write_text("1,2,3")
    rc = main(["decode", "--code", str(HAMMING_PATH), "--decoder", "lp", "--llr", str(llr)])
    assert rc == 2
    assert "code length" in capsys.readouterr().err


def test_decode_rejects_missing_code(capsys):
    rc = main(["decode", "--code", "/nonexistent.alist", "--decoder", "lp", "--ebn0", "2"])
    assert rc == 2


def test_config_error_is_reported_not_raised(capsys):
    rc = main(
        [
            "decode", "--code", str(TANNER_PATH), "--decoder", "pd-l2",
            "--alpha", "9.0", "--ebn0", "2.0",
        ]
    )
    assert rc == 2
    assert "alpha" in capsys.readouterr().err


def test_wer_writes_csv_and_json(tmp_path, capsys):
    out_csv = tmp_path / "wer.csv"
    out_json = tmp_path / "wer.json"
    rc = main(
        [
            "wer", "--code", str(HAMMING_PATH), "--decoder", "lp", "--tmax", "50",
            "--ebn0", "1.0,2.0", "--target-errors", "4", "--max-trials", "500",
            "--seed", "3", "--out", str(out_csv), "--json", str(out_json),
        ]
    )
    assert rc == 0
    with open(out_csv, newline="") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 3  # header + two points
    doc = json.loads(out_json.read_text())
    assert len(doc["points"]) == 2
    assert doc["meta"]["code_file"] == str(HAMMING_PATH)
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2 and lines[0].startswith("ebn0=1")


def test_sweep_reports_rejections(tmp_path, capsys):
    out_csv = tmp_path / "sweep.csv"
    rc = main(
        [
            "sweep", "--code", str(TANNER_PATH), "--decoder", "pd-l2", "--axis", "alpha",
            "--values", "0.8,99", "--ebn0", "2.0", "--target-errors", "2",
            "--max-trials", "40", "--seed", "3", "--out", str(out_csv),
        ]
    )
    assert rc == 0
    captured = capsys.readouterr()
    assert "rejected alpha=99" in captured.err
    with open(out_csv, newline="") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 2  # header + the one valid point


def test_instanton_writes_json(tmp_path, capsys):
    out = tmp_path / "inst.json"
    rc = main(
        [
            "instanton", "--code", str(TANNER_PATH), "--decoder", "pd-l2", "--alpha", "2.0",
            "--tmax", "100", "--trials", "1", "--sigma", "0.5", "--seed", "11",
            "--out", str(out),
        ]
    )
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["meta"]["decoder"] == "pd-l2"
    assert doc["min_sq_norm"] > 0
    assert len(doc["records"]) + doc["skipped_trials"] == 1
    assert "min_sq_norm=" in capsys.readouterr().out


def test_instanton_rejects_multiround_decoders(tmp_path, capsys):
    rc = main(
        [
            "instanton", "--code", str(TANNER_PATH), "--decoder", "rlpd",
            "--trials", "1", "--out", str(tmp_path / "x.json"),
        ]
    )
    assert rc == 2
    assert "one-shot" in capsys.readouterr().err


def test_console_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "admmdec.cli", "project", "--d", "3", "--vector", "1,1,1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "0.666667,0.666667,0.666667"


def test_version_flag():
    proc = subprocess.run(
        [sys.executable, "-m", "admmdec.cli", "--version"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("admmdec ")


def test_threads_default_from_environment(monkeypatch):
    from admmdec.cli import build_parser

    monkeypatch.setenv("ADMMDEC_THREADS", "3")
    args = build_parser().parse_args(
        ["wer", "--code", "c.alist", "--decoder", "lp", "--ebn0", "2.0", "--out", "o.csv"]
    )
    assert args.threads == 3
    monkeypatch.setenv("ADMMDEC_THREADS", "2")
    args = build_parser().parse_args(
        ["sweep", "--code", "c.alist", "--decoder", "lp", "--axis", "mu",
         "--values", "3", "--out", "o.csv"]
    )
    assert args.threads == 2


def test_threads_environment_flag_override_and_bad_value(monkeypatch, capsys):
    monkeypatch.setenv("ADMMDEC_THREADS", "4")
    from admmdec.cli import build_parser

    args = build_parser().parse_args(
        ["wer", "--code", "c.alist", "--decoder", "lp", "--ebn0", "2.0",
         "--out", "o.csv", "--threads", "1"]
    )
    assert args.threads == 1

    monkeypatch.setenv("ADMMDEC_THREADS", "zero")
    assert main(["project", "--d", "3", "--vector", "1,1,1"]) == 2
    assert "ADMMDEC_THREADS" in capsys.readouterr().err
