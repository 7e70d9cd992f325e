import json

import numpy as np
import pytest

from gcflow import cli


def test_analyze_ball_exit_zero(tmp_path, capsys):
    code = cli.main(
        [
            "analyze",
            "--spec", '{"kind": "ball", "radius": 1.0}',
            "--dimension", "2",
            "--resolution", "128",
            "--out", str(tmp_path),
        ]
    )
    assert code == 0
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["entropy"] == pytest.approx(0.0, abs=1e-10)
    assert all(v >= -1e-9 for v in doc["margins"].values())


def test_analyze_nonconvex_exit_two(tmp_path):
    spec = '{"kind": "trig", "base_radius": 1.0, "terms": [[4, 1.0, 0.0]], "amplitude": 0.2}'
    code = cli.main(
        ["analyze", "--spec", spec, "--dimension", "2", "--out", str(tmp_path)]
    )
    assert code == cli.EXIT_CONVEXITY


def test_bad_spec_exit_io(tmp_path):
    code = cli.main(
        ["analyze", "--spec", "{not json", "--dimension", "2", "--out", str(tmp_path)]
    )
    assert code == cli.EXIT_IO
    code = cli.main(
        ["analyze", "--spec", str(tmp_path / "missing.json"), "--out", str(tmp_path)]
    )
    assert code == cli.EXIT_IO


def test_body_make_writes_geometry(tmp_path):
    code = cli.main(
        [
            "body-make",
            "--spec", '{"kind": "ellipsoid", "semiaxes": [2.0, 1.0]}',
            "--dimension", "2",
            "--resolution", "256",
            "--out", str(tmp_path),
        ]
    )
    assert code == 0
    doc = json.loads((tmp_path / "body.json").read_text())
    assert doc["volume"] == pytest.approx(2 * np.pi, rel=1e-9)
    assert doc["inradius"] == pytest.approx(1.0, abs=1e-6)
    assert doc["circumradius"] == pytest.approx(2.0, abs=1e-6)


def test_flow_run_outputs_and_frames(tmp_path):
    code = cli.main(
        [
            "flow-run",
            "--spec", '{"kind": "ball", "radius": 1.0}',
            "--config", '{"n": 2, "resolution": 64, "stop_fraction": 0.3, "snapshot_count": 4}',
            "--out", str(tmp_path),
            "--frames",
        ]
    )
    assert code == 0
    assert (tmp_path / "trace.csv").exists()
    meta = json.loads((tmp_path / "trace.meta.json").read_text())
    assert meta["stop_reason"] == "volume"
    frames = sorted(tmp_path.glob("frame_*.svg"))
    rows = (tmp_path / "trace.csv").read_text().strip().splitlines()
    assert len(frames) == len(rows) - 1  # one frame per snapshot
    assert "<polygon" in frames[0].read_text()


def test_flow_run_deterministic(tmp_path):
    args = [
        "flow-run",
        "--spec", '{"kind": "ellipsoid", "semiaxes": [1.5, 1.0]}',
        "--config", '{"n": 2, "resolution": 64, "stop_fraction": 0.3, "snapshot_count": 4}',
    ]
    cli.main(args + ["--out", str(tmp_path / "a")])
    cli.main(args + ["--out", str(tmp_path / "b")])
    assert (tmp_path / "a/trace.csv").read_bytes() == (tmp_path / "b/trace.csv").read_bytes()


def test_verify_passes_and_deterministic(tmp_path, capsys):
    args = [
        "verify",
        "--dimension", "2",
        "--resolution", "64",
        "--seed", "7",
        "--count", "5",
    ]
    assert cli.main(args + ["--out", str(tmp_path / "a")]) == 0
    assert cli.main(args + ["--out", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a/verify.json").read_bytes() == (
        tmp_path / "b/verify.json"
    ).read_bytes()
    doc = json.loads((tmp_path / "a/verify.json").read_text())
    assert doc["failures"] == []
    assert len(doc["worst_margins"]) >= 5


def test_random_trig_specs_convex(rng):
    from gcflow import body as B
    from gcflow.grid import build_grid

    g = build_grid(3, 12)
    for _ in range(5):
        spec = cli.random_trig_spec(3, rng, g)
        f = B.support_from_spec(spec, g)
        assert B.convexity_margin(f) > 0


def test_study_stability_exit_zero(capsys):
    code = cli.main(["study-stability", "--dimension", "2", "--resolution", "128"])
    assert code == 0
    out = capsys.readouterr().out
    assert "slope=" in out


def test_svg_envelope_circle(circle):
    from gcflow import body as B

    f = B.support_from_spec(B.Ball(1.0), circle)
    svg = cli._svg_frame(f, 1.05)
    pts = svg.split('points="')[1].split('"')[0].split()
    xy = np.array([[float(c) for c in p.split(",")] for p in pts])
    radii = np.hypot(xy[:, 0] - 250, xy[:, 1] - 250)
    # unit circle maps to radius 250/1.05; coordinates are quantized to 1e-3
    np.testing.assert_allclose(radii, 250 / 1.05, atol=2e-3)
