"""End-to-end tests for the command line interface.

Most tests call cli.main() in process so the shared JIT warmup is reused;
subprocess invocations are kept to the entry-point smoke tests.
"""

import csv
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from wifimap import cli
from wifimap.grid import load_pgm
from wifimap.kvisibility import load_kgrid_pgm
from wifimap.traces import load_trace

RES = 0.05
ROUTER_WORLD = "1.0,2.4"
ROUTER_CELL = "20,48"


def run_cli(*args: str) -> int:
    return cli.main(list(args))


class TestUsageErrors:
    def test_no_arguments_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run_cli()
        assert exc.value.code == 2

    def test_unknown_subcommand_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run_cli("frobnicate")
        assert exc.value.code == 2

    def test_missing_input_file_exits_one_with_error_line(self, tmp_path, capsys):
        rc = run_cli(
            "kvis",
            "--map", str(tmp_path / "nope.pgm"),
            "--router", ROUTER_CELL,
            "--out", str(tmp_path / "k.pgm"),
        )
        assert rc == 1
        assert capsys.readouterr().err.startswith("error:")

    def test_render_rejects_multiple_sources(self, tmp_path, capsys):
        rc = run_cli(
            "render",
            "--map", "a.pgm",
            "--kgrid", "b.pgm",
            "--out", str(tmp_path / "x.png"),
        )
        assert rc == 1
        assert "exactly one" in capsys.readouterr().err

    def test_sparse_invert_needs_geometry(self, tmp_path, capsys):
        trace = tmp_path / "t.csv"
        trace.write_text("t,x,y,k\n0.0,1.0,1.0,0\n1.0,2.0,1.0,0\n")
        rc = run_cli(
            "sparse-invert",
            "--trace", str(trace),
            "--router", "1.0,1.0",
            "--out", str(tmp_path / "out"),
        )
        assert rc == 1
        assert "--resolution" in capsys.readouterr().err


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    """Run the documented pipeline once and hand the artifact paths around."""
    root = tmp_path_factory.mktemp("pipeline")
    paths = {
        "map": root / "truth.pgm",
        "trace": root / "trace.csv",
        "kgrid": root / "kgrid.pgm",
        "dense": root / "dense.pgm",
        "classified": root / "classified.csv",
        "model": root / "model.json",
        "sparse": root / "sparse",
        "composite": root / "composite.png",
    }

    assert run_cli(
        "simulate",
        "--map", "three-room",
        "--resolution", str(RES),
        "--export-map", str(paths["map"]),
        "--out", str(paths["trace"]),
    ) == 0
    assert run_cli(
        "kvis",
        "--map", str(paths["map"]),
        "--router", ROUTER_CELL,
        "--out", str(paths["kgrid"]),
    ) == 0
    assert run_cli(
        "dense-invert",
        "--kgrid", str(paths["kgrid"]),
        "--router", ROUTER_CELL,
        "--out", str(paths["dense"]),
    ) == 0
    assert run_cli(
        "classify",
        "--trace", str(paths["trace"]),
        "--kmax", "2",
        "--window", "1",
        "--model", str(paths["model"]),
        "--out", str(paths["classified"]),
    ) == 0
    assert run_cli(
        "sparse-invert",
        "--trace", str(paths["classified"]),
        "--router", ROUTER_WORLD,
        "--like", str(paths["map"]),
        "--out", str(paths["sparse"]),
    ) == 0
    assert run_cli(
        "render",
        "--composite", str(paths["sparse"]),
        "--trace", str(paths["classified"]),
        "--out", str(paths["composite"]),
    ) == 0
    return paths


class TestPipeline:
    def test_simulate_writes_a_trace_and_the_map(self, pipeline):
        samples = load_trace(pipeline["trace"])
        assert len(samples) > 200
        assert all(s.rssi is not None and s.k_true is not None for s in samples)
        truth = load_pgm(pipeline["map"])
        assert truth.resolution == RES
        assert truth.occupied_mask().any()

    def test_kvis_grid_is_zero_at_the_router(self, pipeline):
        kgrid, carrier = load_kgrid_pgm(pipeline["kgrid"])
        assert carrier.resolution == RES
        assert kgrid[48, 20] == 0
        assert kgrid.max() >= 2

    def test_dense_inversion_reproduces_walls(self, pipeline):
        dense = load_pgm(pipeline["dense"])
        truth = load_pgm(pipeline["map"])
        pred = dense.occupied_mask()
        assert pred.any()
        assert not (pred & truth.free_mask()).any()

    def test_classify_recovers_the_true_wall_counts(self, pipeline):
        samples = load_trace(pipeline["classified"])
        agree = sum(1 for s in samples if s.k == s.k_true)
        assert agree / len(samples) >= 0.95
        assert pipeline["model"].exists()

    def test_sparse_invert_writes_the_full_artifact_set(self, pipeline):
        outdir = pipeline["sparse"]
        for name in ("occupancy.pgm", "belief_mu.pgm", "belief.csv", "free_score.pgm", "report.txt"):
            assert (outdir / name).exists(), name
        report = dict(
            line.split("=", 1) for line in (outdir / "report.txt").read_text().splitlines()
        )
        assert report["k_source"] == "k column"
        assert report["telescope_violations"] == "0"
        with open(outdir / "belief.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert rows and {"col", "row", "mu", "sigma"} <= set(rows[0])

    def test_sparse_occupancy_marks_free_space_and_walls(self, pipeline):
        occupancy = load_pgm(pipeline["sparse"] / "occupancy.pgm")
        assert occupancy.free_mask().sum() > 100
        assert occupancy.occupied_mask().any()

    def test_evaluate_text_report(self, pipeline, capsys):
        assert run_cli(
            "evaluate",
            "--pred", str(pipeline["sparse"] / "occupancy.pgm"),
            "--truth", str(pipeline["map"]),
        ) == 0
        out = capsys.readouterr().out
        scores = dict(line.split("=", 1) for line in out.strip().splitlines())
        assert 0.0 <= float(scores["free_iou"]) <= 1.0
        assert scores["tolerance_cells"] == "1"

    def test_evaluate_json_against_builtin_truth(self, pipeline, capsys):
        assert run_cli(
            "evaluate",
            "--pred", str(pipeline["sparse"] / "occupancy.pgm"),
            "--truth", "three-room",
            "--json",
        ) == 0
        scores = json.loads(capsys.readouterr().out)
        assert set(scores) >= {"free_iou", "wall_precision", "wall_recall"}

    def test_render_single_views(self, pipeline, tmp_path):
        for args in (
            ("--map", str(pipeline["map"])),
            ("--kgrid", str(pipeline["kgrid"])),
            ("--belief", str(pipeline["sparse"] / "belief.csv"), "--like", str(pipeline["map"])),
        ):
            out = tmp_path / (args[0].strip("-") + ".png")
            assert run_cli("render", *args, "--scale", "2", "--out", str(out)) == 0
            assert out.read_bytes().startswith(b"\x89PNG\r\n")

    def test_composite_is_a_png(self, pipeline):
        assert pipeline["composite"].read_bytes().startswith(b"\x89PNG\r\n")


class TestDeterminism:
    def test_sparse_invert_outputs_are_byte_stable(self, pipeline, tmp_path):
        dirs = [tmp_path / "a", tmp_path / "b"]
        for d in dirs:
            assert run_cli(
                "sparse-invert",
                "--trace", str(pipeline["classified"]),
                "--router", ROUTER_WORLD,
                "--like", str(pipeline["map"]),
                "--threads", "2",
                "--out", str(d),
            ) == 0
        for name in ("occupancy.pgm", "belief_mu.pgm", "belief.csv", "free_score.pgm"):
            assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes(), name

    def test_composite_render_is_byte_stable(self, pipeline, tmp_path):
        again = tmp_path / "again.png"
        assert run_cli(
            "render",
            "--composite", str(pipeline["sparse"]),
            "--trace", str(pipeline["classified"]),
            "--out", str(again),
        ) == 0
        assert again.read_bytes() == pipeline["composite"].read_bytes()


class TestSimulateOptions:
    def test_config_file_supplies_path_loss_parameters(self, tmp_path):
        cfg = tmp_path / "sim.cfg"
        cfg.write_text("# demo parameters\np0 = -40\nwall_loss = 9\n")
        waypoints = tmp_path / "way.csv"
        waypoints.write_text("x,y\n1.0,2.4\n1.2,2.4\n")
        trace = tmp_path / "t.csv"
        rc = run_cli(
            "simulate",
            "--map", "three-room",
            "--trajectory", str(waypoints),
            "--config", str(cfg),
            "--out", str(trace),
        )
        assert rc == 0
        first = load_trace(trace)[0]
        assert first.rssi == pytest.approx(-40.0)

    def test_flag_beats_config(self, tmp_path):
        cfg = tmp_path / "sim.cfg"
        cfg.write_text("p0 = -40\n")
        waypoints = tmp_path / "way.csv"
        waypoints.write_text("x,y\n1.0,2.4\n1.2,2.4\n")
        trace = tmp_path / "t.csv"
        rc = run_cli(
            "simulate",
            "--map", "three-room",
            "--trajectory", str(waypoints),
            "--config", str(cfg),
            "--p0", "-33",
            "--out", str(trace),
        )
        assert rc == 0
        assert load_trace(trace)[0].rssi == pytest.approx(-33.0)

    def test_file_map_requires_router(self, pipeline, tmp_path, capsys):
        rc = run_cli(
            "simulate",
            "--map", str(pipeline["map"]),
            "--out", str(tmp_path / "t.csv"),
        )
        assert rc == 1
        assert "--router" in capsys.readouterr().err


class TestEntryPoints:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "wifimap", "--help"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "usage: wifimap" in proc.stdout

    def test_unknown_log_level_warns_and_proceeds(self):
        env = dict(os.environ, SFW_LOG="banana")
        proc = subprocess.run(
            [sys.executable, "-m", "wifimap.cli", "--help"],
            capture_output=True,
            text=True,
            env=env,
        )
        assert proc.returncode == 0
        assert "unknown SFW_LOG value" in proc.stderr
