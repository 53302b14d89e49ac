"""End-to-end command-line behaviour via in-process main(argv)."""

import csv
import json

import pytest

from kummer.balls import EnclosureError, PrecisionExhausted
from kummer.bounds import BoundReport
from kummer.cli import main
from kummer.config import CACHE_ENV_VAR

# Frozen dual-route values (analytic product and determinant oracle agree).
H_SUBSET = {
    23: 3, 29: 8, 31: 9, 37: 37, 41: 121, 43: 211, 47: 695,
    61: 76301, 97: 411322824001,
}


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    """Point the default cache at a per-test file, never the CWD."""
    path = tmp_path / "cache.jsonl"
    monkeypatch.setenv(CACHE_ENV_VAR, str(path))
    return path


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_no_command_prints_help(capsys):
    code, out, _ = run([], capsys)
    assert code == 2
    assert "usage" in out.lower()


def test_hminus_p23_both(capsys):
    code, out, _ = run(["hminus", "--p", "23", "--method", "both"], capsys)
    assert code == 0
    assert "h_minus=3" in out
    assert "method=both" in out
    assert "certified=true" in out
    assert "siegel=absent" in out


def test_hminus_small_prime_is_one(capsys):
    code, out, _ = run(["hminus", "--p", "5"], capsys)
    assert code == 0
    assert "h_minus=1" in out


def test_hminus_composite_rejected(capsys):
    code, _, err = run(["hminus", "--p", "9"], capsys)
    assert code == 2
    assert "odd prime" in err


def test_hminus_appends_cache(isolated_cache, capsys):
    code, _, _ = run(["hminus", "--p", "23"], capsys)
    assert code == 0
    lines = isolated_cache.read_text().strip().splitlines()
    assert len(lines) == 1
    obj = json.loads(lines[0])
    assert obj["kind"] == "hminus" and obj["p"] == 23
    assert obj["payload"]["h_minus"] == "3"


def test_scan_matches_frozen_values(tmp_path, capsys):
    out_path = tmp_path / "scan.csv"
    code, _, err = run(["scan", "--from", "3", "--to", "100",
                        "--out", str(out_path)], capsys)
    assert code == 0
    with open(out_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    ps = [int(r["p"]) for r in rows]
    assert len(ps) == 24 and ps == sorted(ps)
    for r in rows:
        p, h = int(r["p"]), int(r["h_minus"])
        if p <= 19:
            assert h == 1
        if p in H_SUBSET:
            assert h == H_SUBSET[p]
        assert r["certified"] == "true"
        assert r["siegel_beta"] == ""  # no real zero anywhere down here
    assert "computed=24" in err


def test_scan_empty_range(tmp_path, capsys):
    out_path = tmp_path / "scan.csv"
    code, _, _ = run(["scan", "--from", "24", "--to", "28",
                      "--out", str(out_path)], capsys)
    assert code == 0
    assert out_path.read_text().strip() == ",".join(
        ["p", "h_minus", "log_G", "log_ratio", "siegel_beta",
         "precision_bits", "method", "certified"])


def test_scan_resumes_from_cache(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    code1, _, err1 = run(["scan", "--from", "3", "--to", "30",
                          "--out", str(a)], capsys)
    code2, _, err2 = run(["scan", "--from", "3", "--to", "30",
                          "--out", str(b)], capsys)
    assert code1 == 0 and code2 == 0
    assert "computed=9" in err1 and "cached=0" in err1
    assert "computed=0" in err2 and "cached=9" in err2
    assert a.read_bytes() == b.read_bytes()


def test_scan_jsonl_format(capsys):
    code, out, _ = run(["scan", "--from", "3", "--to", "13",
                        "--format", "jsonl"], capsys)
    assert code == 0
    objs = [json.loads(line) for line in out.strip().splitlines()]
    assert [o["p"] for o in objs] == [3, 5, 7, 11, 13]
    assert all(o["h_minus"] == "1" for o in objs)


def test_pi_exact_example(capsys):
    code, out, _ = run(["pi", "--p", "5", "--x", "50", "--class", "+1"],
                       capsys)
    assert code == 0
    assert "146013/894784" in out
    assert "0.163182" in out
    assert "bound omitted" in out  # needs x > p and p > 500


def test_pi_bound_checked_above_500(capsys):
    code, out, _ = run(["pi", "--p", "503", "--x", "5030", "--class", "-1"],
                       capsys)
    assert code == 0
    assert "PASS" in out


def test_pi_cutoff_too_small(capsys):
    code, _, err = run(["pi", "--p", "5", "--x", "3", "--class", "+1"],
                       capsys)
    assert code == 2
    assert "below the smallest admissible" in err


def test_pi_bad_class(capsys):
    code, _, err = run(["pi", "--p", "5", "--x", "50", "--class", "2"],
                       capsys)
    assert code == 2
    assert "class must be" in err


def test_siegel_single_prime(capsys):
    code, out, _ = run(["siegel", "--p", "23"], capsys)
    assert code == 0
    assert "siegel=absent" in out
    assert "certified=true" in out


def test_siegel_requires_target(capsys):
    code, _, err = run(["siegel"], capsys)
    assert code == 2
    assert "need --p or both" in err


def test_verify_eq2_passes(capsys):
    code, out, _ = run(["verify", "--bound", "eq2", "--from", "3",
                        "--to", "7", "--X", "10000"], capsys)
    assert code == 0
    assert out.count("PASS") == 3
    assert "FAIL" not in out


def test_verify_unknown_bound(capsys):
    code, _, _ = run(["verify", "--bound", "nosuch", "--from", "3",
                      "--to", "7"], capsys)
    assert code == 2


def test_verify_exit_1_on_failure(monkeypatch, capsys):
    fake = [BoundReport(bound_id="x", p=3, parameters={}, lhs=None,
                        rhs=None, passed=False, notes="synthetic")]
    monkeypatch.setattr("kummer.cli.bounds.verify",
                        lambda *a, **k: fake)
    code, out, _ = run(["verify", "--bound", "thm31", "--from", "503",
                        "--to", "509"], capsys)
    assert code == 1
    assert "FAIL" in out


def test_exit_3_on_precision_exhausted(monkeypatch, capsys):
    def boom(*a, **k):
        raise PrecisionExhausted("synthetic")
    monkeypatch.setattr("kummer.cli.hminus", boom)
    code, _, err = run(["hminus", "--p", "23"], capsys)
    assert code == 3
    assert "precision exhausted" in err


def test_exit_3_on_enclosure_error(monkeypatch, capsys):
    def boom(*a, **k):
        raise EnclosureError("synthetic")
    monkeypatch.setattr("kummer.cli.hminus", boom)
    code, _, err = run(["hminus", "--p", "23"], capsys)
    assert code == 3
    assert "not certified" in err


def test_config_file_changes_method_selection(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("oracle_ceiling = 3\n")
    code, out, _ = run(["hminus", "--p", "23", "--config", str(cfg)], capsys)
    assert code == 0
    assert "method=analytic" in out  # 23 above the ceiling: no determinant


def test_flag_overrides_config(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("output_format = jsonl\n")
    code, out, _ = run(["scan", "--from", "3", "--to", "5", "--config",
                        str(cfg), "--format", "csv"], capsys)
    assert code == 0
    assert out.splitlines()[0].startswith("p,h_minus")


def test_env_var_beats_cache_flag(tmp_path, isolated_cache, capsys):
    flag_path = tmp_path / "flag.jsonl"
    code, _, _ = run(["hminus", "--p", "5", "--cache", str(flag_path)],
                     capsys)
    assert code == 0
    assert isolated_cache.exists()       # env target received the record
    assert not flag_path.exists()        # env var wins over the flag


def test_report_writes_csv_and_figure(tmp_path, capsys):
    out_dir = tmp_path / "rep"
    code, out, _ = run(["report", "--from", "3", "--to", "30",
                        "--out", str(out_dir)], capsys)
    assert code == 0
    csv_path = out_dir / "scan.csv"
    png_path = out_dir / "scan.png"
    assert csv_path.exists() and png_path.exists()
    assert png_path.stat().st_size > 1000
    with open(csv_path, newline="") as fh:
        assert len(list(csv.DictReader(fh))) == 9


def test_verify_csv_output(tmp_path, capsys):
    out_path = tmp_path / "v.csv"
    code, _, _ = run(["verify", "--bound", "eq2", "--from", "3", "--to", "5",
                      "--X", "10000", "--out", str(out_path),
                      "--format", "csv"], capsys)
    assert code == 0
    with open(out_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [int(r["p"]) for r in rows] == [3, 5]
    assert all(r["passed"] == "true" for r in rows)
