"""CLI behavior: artifacts, exit codes, config handling, determinism."""

import json

import pytest

from qvortex.cli import run
from qvortex.service.schemas import RunConfig


def test_validate_passes_and_prints_report(capsys):
    code = run(["validate", "--r1", "1", "--r2", "2", "--vortex", "1.4,0,1"])
    out = capsys.readouterr().out
    assert code == 0
    assert "PASS" in out
    assert "laurent vs images" in out
    assert "boundary residuals" in out


def test_validate_fails_on_shallow_truncation(capsys):
    code = run(["validate", "--r1", "1", "--r2", "2", "--vortex", "1.4,0,1",
                "--image-pairs", "2"])
    assert code == 1
    assert "FAIL" in capsys.readouterr().out


def test_validate_convergence_error_exits_2(capsys):
    code = run(["validate", "--r1", "1", "--r2", "2", "--vortex", "1.4,0,1",
                "--max-terms", "2"])
    assert code == 2
    assert "convergence" in capsys.readouterr().err


def test_orbit_rest_point_and_artifacts(tmp_path, capsys):
    out = tmp_path / "orbit.csv"
    code = run(["orbit", "--r1", "1", "--r2", "4", "--vortex", "2,0,1",
                "--t-end", "1", "--dt", "0.001", "--out", str(out)])
    assert code == 0
    stdout = capsys.readouterr().out
    assert "omega = " in stdout
    summary = json.loads((tmp_path / "orbit.summary.json").read_text())
    assert abs(summary["omega"]) < 1e-12  # sqrt(1*4) = 2 is the rest radius
    lines = out.read_text().splitlines()
    assert lines[0] == "t,x1,y1"
    assert len(lines) == 1002  # header + 1001 states


def test_images_json_output(tmp_path):
    out = tmp_path / "images.json"
    code = run(["images", "--r1", "1", "--r2", "4", "--vortex", "2,0,1",
                "--depth", "3", "--out", str(out)])
    assert code == 0
    entries = json.loads(out.read_text())
    assert [e["re"] for e in entries[:4]] == pytest.approx([0.5, 8.0, 0.125, 32.0])
    assert all(set(e) == {"re", "im", "sign", "generation", "family"}
               for e in entries)


def test_images_stdout_when_no_out(capsys):
    code = run(["images", "--r1", "1", "--r2", "4", "--vortex", "2,0,1"])
    assert code == 0
    entries = json.loads(capsys.readouterr().out)
    assert len(entries) == 6  # default depth 3


def test_field_csv_layout(tmp_path):
    out = tmp_path / "field.csv"
    code = run(["field", "--r1", "1", "--r2", "2", "--vortex", "1.4,0,1",
                "--n-r", "3", "--n-theta", "5", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# {")
    meta = json.loads(lines[0][2:])
    assert meta["representation"] == "qlog"
    assert lines[1] == "x,y,u,v,psi"
    assert len(lines) == 2 + 15
    # all floats round-trip
    for line in lines[2:]:
        cells = line.split(",")
        assert len(cells) == 5
        [float(c) for c in cells]


def test_field_deterministic_across_runs(tmp_path, capsys):
    args = ["field", "--r1", "1", "--r2", "2", "--vortex", "1.4,0,1",
            "--n-r", "4", "--n-theta", "6"]
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    assert run(args + ["--out", str(out_a)]) == 0
    stdout_a = capsys.readouterr().out.replace(str(out_a), "OUT")
    assert run(args + ["--out", str(out_b)]) == 0
    stdout_b = capsys.readouterr().out.replace(str(out_b), "OUT")
    assert out_a.read_bytes() == out_b.read_bytes()
    assert stdout_a == stdout_b


def test_limits_table(capsys):
    code = run(["limits", "--q-values", "1e3,1e5", "--n-points", "6"])
    assert code == 0
    out = capsys.readouterr().out
    assert "cylinder" in out and "disk" in out
    assert "monotonically with q: True" in out


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg_path = tmp_path / "run.json"
    cfg_path.write_text(json.dumps({
        "geometry": {"r1": 1.0, "r2": 2.0},
        "vortices": [{"x": 1.4, "y": 0.0, "kappa": 1.0}],
        "validate": {"n_samples": 20},
    }))
    code = run(["validate", "--config", str(cfg_path), "--tol", "1e-6"])
    assert code == 0
    assert "1e-06" in capsys.readouterr().out


def test_dump_config_round_trip(tmp_path):
    dumped = tmp_path / "effective.json"
    code = run(["validate", "--r1", "1", "--r2", "2", "--vortex", "1.4,0,1",
                "--n-samples", "10", "--dump-config", str(dumped)])
    assert code == 0
    reparsed = RunConfig.model_validate(json.loads(dumped.read_text()))
    assert reparsed.geometry.r1 == 1.0
    assert reparsed.geometry.r2 == 2.0
    assert reparsed.vortices[0].x == 1.4
    assert reparsed.validate_opts.n_samples == 10
    # feeding the dump back reproduces the same effective config
    rerun = tmp_path / "effective2.json"
    code = run(["validate", "--config", str(dumped), "--dump-config", str(rerun)])
    assert code == 0
    assert json.loads(rerun.read_text()) == json.loads(dumped.read_text())


def test_bad_vortex_spec_rejected(capsys):
    code = run(["validate", "--r1", "1", "--r2", "2", "--vortex", "1.4,0"])
    assert code == 1
    assert "config error" in capsys.readouterr().err


def test_missing_geometry_rejected(capsys):
    code = run(["validate", "--vortex", "1.4,0,1"])
    assert code == 1
    assert "geometry" in capsys.readouterr().err


def test_domain_error_from_service_exits_1(capsys):
    code = run(["validate", "--r1", "1", "--r2", "2", "--vortex", "0.5,0,1"])
    assert code == 1
    assert "domain" in capsys.readouterr().err


def test_unknown_flag_nonzero():
    assert run(["validate", "--definitely-not-a-flag"]) == 1


def test_unknown_command_nonzero():
    assert run(["transmogrify"]) == 1


def test_orbit_two_vortex_csv_columns(tmp_path):
    out = tmp_path / "pair.csv"
    code = run(["orbit", "--r1", "1", "--r2", "4",
                "--vortex", "2,0,1", "--vortex=-2,0,1",
                "--t-end", "0.1", "--dt", "0.01", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,x1,y1,x2,y2"
    assert all(len(line.split(",")) == 5 for line in lines[1:])
