"""End-to-end tests for the zakbench command line."""

import json

from zakbench import cli


def read_report(path):
    payload = json.loads(path.read_text())
    payload.pop("metadata", None)
    return payload


def test_expsys_sweep_writes_report(tmp_path, capsys):
    code = cli.main(
        ["expsys-sweep", "--g", "linear", "--N", "128", "--W", "8", "--k", "0",
         "--out", str(tmp_path), "--csv"]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "expsys-sweep: PASS" in out
    report = read_report(tmp_path / "expsys_sweep.json")
    assert report["grid_N"] == 128
    assert report["window_W"] == 8
    assert report["flags"]["no_norm_convergence"] is True
    assert len(report["levels"]) == 8
    csv_lines = (tmp_path / "expsys_sweep.csv").read_text().splitlines()
    assert csv_lines[0] == "level,value,flag"
    assert len(csv_lines) == 1 + len(report["levels"])


def test_zak_validate_writes_report(tmp_path, capsys):
    code = cli.main(["zak-validate", "--M", "64", "--out", str(tmp_path)])
    assert code == 0
    assert "zak-validate: PASS" in capsys.readouterr().out
    report = read_report(tmp_path / "zak_validate.json")
    assert report["M"] == 64
    assert report["passed"] is True
    assert abs(report["gaussian_norm"] - 1.0) < 1e-6
    assert report["theta_vs_series_max_dev"] < 1e-10


def test_quotient_ladder_cone_converges(tmp_path, capsys):
    code = cli.main(
        ["quotient-ladder", "--numerator", "cone", "--ladder", "32,64,128",
         "--out", str(tmp_path), "--csv"]
    )
    assert code == 0
    assert "quotient-ladder: PASS" in capsys.readouterr().out
    report = read_report(tmp_path / "quotient_ladder_cone.json")
    assert report["converges"] is True
    assert report["diverges"] is False
    csv_lines = (tmp_path / "quotient_ladder_cone.csv").read_text().splitlines()
    assert csv_lines[0] == "level,value,flag"


def test_quotient_ladder_constant_diverges(tmp_path, capsys):
    code = cli.main(
        ["quotient-ladder", "--numerator", "one", "--ladder", "64,128,256",
         "--out", str(tmp_path)]
    )
    assert code == 0
    report = read_report(tmp_path / "quotient_ladder_one.json")
    assert report["diverges"] is True
    assert all(step > 0.10 for step in report["step_growth"])


def test_quotient_ladder_assertion_failure_exit_code(tmp_path, capsys):
    # adjacent levels grow the estimate by well under ten percent, so the
    # divergence assertion honestly fails
    code = cli.main(
        ["quotient-ladder", "--numerator", "one", "--ladder", "64,66",
         "--out", str(tmp_path)]
    )
    assert code == 2
    assert "quotient-ladder: FAIL" in capsys.readouterr().out


def test_rp_check_writes_report(tmp_path, capsys):
    code = cli.main(["rp-check", "--dim", "6", "--pairs", "5", "--out", str(tmp_path)])
    assert code == 0
    report = read_report(tmp_path / "rp_check.json")
    assert report["passed"] is True
    assert report["max_identity_deviation"] < 1e-10


def test_excess_n_writes_report(tmp_path, capsys):
    code = cli.main(
        ["excess-n", "--dim", "7", "--n", "2", "--out", str(tmp_path), "--seed", "3"]
    )
    assert code == 0
    report = read_report(tmp_path / "excess_n.json")
    assert report["n"] == 2
    assert all(v < 1e-10 for v in report["residuals"].values())


def test_excess_n_dependent_head_reduces(tmp_path, capsys):
    code = cli.main(
        ["excess-n", "--dim", "6", "--n", "3", "--dependent-head",
         "--out", str(tmp_path)]
    )
    assert code == 0
    report = read_report(tmp_path / "excess_n.json")
    assert report["n"] == 2
    assert any(note.startswith("reduction:") for note in report["notes"])


def test_seed_determinism(tmp_path):
    a_dir = tmp_path / "a"
    b_dir = tmp_path / "b"
    for out in (a_dir, b_dir):
        code = cli.main(["rp-check", "--seed", "7", "--out", str(out)])
        assert code == 0
    a = read_report(a_dir / "rp_check.json")
    b = read_report(b_dir / "rp_check.json")
    assert a == b


def test_usage_error_exit_codes(tmp_path, capsys):
    assert cli.main(["expsys-sweep", "--g", "cauchy", "--out", str(tmp_path)]) == 1
    assert "unknown weight" in capsys.readouterr().err
    assert cli.main(
        ["quotient-ladder", "--numerator", "one", "--ladder", "63,126",
         "--out", str(tmp_path)]
    ) == 1
    assert cli.main(["no-such-command"]) == 1
    assert cli.main([]) == 1


def test_thread_env_validation(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("ZAKBENCH_THREADS", "nope")
    code = cli.main(
        ["quotient-ladder", "--numerator", "cone", "--ladder", "32,64",
         "--out", str(tmp_path)]
    )
    assert code == 1
    assert "ZAKBENCH_THREADS" in capsys.readouterr().err


def test_thread_env_does_not_change_results(tmp_path, monkeypatch):
    serial_dir = tmp_path / "serial"
    threaded_dir = tmp_path / "threaded"
    args = ["quotient-ladder", "--numerator", "cone", "--ladder", "32,64,128"]
    assert cli.main(args + ["--out", str(serial_dir)]) == 0
    monkeypatch.setenv("ZAKBENCH_THREADS", "4")
    assert cli.main(args + ["--out", str(threaded_dir)]) == 0
    serial = read_report(serial_dir / "quotient_ladder_cone.json")
    threaded = read_report(threaded_dir / "quotient_ladder_cone.json")
    assert serial == threaded


def test_weight_file_roundtrip(tmp_path, capsys):
    dump_dir = tmp_path / "dump"
    weight_file = tmp_path / "weight.json"
    code = cli.main(
        ["expsys-sweep", "--g", "sqrt", "--N", "64", "--W", "4",
         "--out", str(dump_dir), "--dump-weight", str(weight_file)]
    )
    assert code == 0
    assert weight_file.exists()

    reuse_dir = tmp_path / "reuse"
    code = cli.main(
        ["expsys-sweep", "--g-file", str(weight_file), "--N", "64", "--W", "4",
         "--out", str(reuse_dir)]
    )
    assert code == 0
    report = read_report(reuse_dir / "expsys_sweep.json")
    assert any("ladder unavailable" in n for n in report["flags"]["hypothesis_notes"])


def test_theta_file_roundtrip(tmp_path, capsys):
    dump_dir = tmp_path / "dump"
    theta_file = tmp_path / "theta_grid.json"
    code = cli.main(
        ["zak-validate", "--M", "32", "--out", str(dump_dir),
         "--dump-theta", str(theta_file)]
    )
    assert code == 0
    assert theta_file.exists()

    code = cli.main(
        ["zak-validate", "--M", "32", "--theta-file", str(theta_file),
         "--out", str(tmp_path / "reuse")]
    )
    assert code == 0


def test_version_flag(capsys):
    assert cli.main(["--version"]) == 0
    assert "zakbench" in capsys.readouterr().out
