"""Command line entry points, exercised in-process."""

import json

import pytest

from pathcert.cli import main


@pytest.fixture(scope="module")
def run_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli") / "run"
    code = main(["bench", "run", "--family", "newton", "--m", "10",
                 "--out", str(out)])
    assert code == 0
    return out


def test_bench_run_writes_outputs(run_dir, capsys):
    assert (run_dir / "report.json").exists()
    assert (run_dir / "cert_000.json").exists()


def test_bench_run_reports_progress(tmp_path, capsys):
    out = tmp_path / "r2"
    assert main(["bench", "run", "--family", "newton", "--m", "10",
                 "--dt0", "0.05", "--r0", "0.1", "--lambda", "3",
                 "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "1/1 paths certified" in text
    rep = json.loads((out / "report.json").read_text())
    assert rep["config"]["dt0"] == "0.05"

def test_bench_verify_ok(run_dir, capsys):
    assert main(["bench", "verify", str(run_dir)]) == 0
    assert "all certificates verified" in capsys.readouterr().out


def test_bench_verify_missing_dir(tmp_path, capsys):
    assert main(["bench", "verify", str(tmp_path / "nope")]) == 1
    assert "error" in capsys.readouterr().err


def test_verify_certificate_ok(run_dir, capsys):
    assert main(["verify", str(run_dir / "cert_000.json")]) == 0
    assert capsys.readouterr().out.startswith("OK")


def test_verify_tampered_certificate_fails(run_dir, tmp_path, capsys):
    obj = json.loads((run_dir / "cert_000.json").read_text())
    seg = obj["segments"][len(obj["segments"]) // 2]
    # shrink the certified region; existence replay must now fail
    row = [float(v) for v in seg["box"][0]]
    mid_re, mid_im = (row[0] + row[1]) / 2, (row[2] + row[3]) / 2
    h_re, h_im = (row[1] - row[0]) * 5e-7, (row[3] - row[2]) * 5e-7
    seg["box"][0] = [repr(mid_re - h_re), repr(mid_re + h_re),
                     repr(mid_im - h_im), repr(mid_im + h_im)]
    bad = tmp_path / "tampered.json"
    bad.write_text(json.dumps(obj))
    assert main(["verify", str(bad)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_verify_unparseable_certificate(tmp_path, capsys):
    bad = tmp_path / "junk.json"
    bad.write_text("{not json")
    assert main(["verify", str(bad)]) == 1
    assert "error" in capsys.readouterr().err


def test_unknown_family_rejected(tmp_path):
    with pytest.raises(SystemExit):
        main(["bench", "run", "--family", "cyclic", "--out", str(tmp_path)])
