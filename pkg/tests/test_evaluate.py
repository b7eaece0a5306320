"""Map scoring: free IoU, wall precision/recall with tolerance, census."""

import json

import numpy as np
import pytest

from wifimap.errors import DimensionMismatchError
from wifimap.evaluate import evaluate_maps
from wifimap.grid import FREE_VALUE, GridMap, OCCUPIED_VALUE, UNKNOWN_VALUE


def _map(rows):
    lut = {".": FREE_VALUE, "#": OCCUPIED_VALUE, "?": UNKNOWN_VALUE}
    cells = np.array([[lut[ch] for ch in row] for row in rows], np.uint8)
    return GridMap(cells)


class TestScores:
    def test_identical_maps(self):
        m = _map(["..#", ".#.", "..."])
        rep = evaluate_maps(m, m, tolerance_cells=0)
        assert rep.free_iou == 1.0
        assert rep.wall_precision == 1.0
        assert rep.wall_recall == 1.0
        assert rep.explored_fraction == 1.0

    def test_all_unknown_prediction(self):
        truth = _map(["..", ".#"])
        pred = _map(["??", "??"])
        rep = evaluate_maps(pred, truth)
        assert rep.free_iou == 0.0
        assert rep.explored_fraction == 0.0
        assert rep.no_wall_predictions
        assert rep.wall_precision == 1.0
        assert rep.wall_recall == 0.0

    def test_both_free_sets_empty(self):
        truth = _map(["##"])
        pred = _map(["??"])
        rep = evaluate_maps(pred, truth)
        assert rep.free_iou == 1.0
        assert rep.explored_fraction == 1.0

    def test_wall_tolerance_one_cell(self):
        """A wall drawn one cell off counts at tolerance 1 but not at 0."""
        truth = _map(["........", "..####..", "........", "........"])
        pred = _map(["........", "........", "..####..", "........"])
        strict = evaluate_maps(pred, truth, tolerance_cells=0)
        loose = evaluate_maps(pred, truth, tolerance_cells=1)
        assert strict.wall_precision == 0.0 and strict.wall_recall == 0.0
        assert loose.wall_precision == 1.0 and loose.wall_recall == 1.0

    def test_diagonal_offset_within_chebyshev_tolerance(self):
        truth = _map(["#..", "...", "..."])
        pred = _map(["...", ".#.", "..."])
        rep = evaluate_maps(pred, truth, tolerance_cells=1)
        assert rep.wall_precision == 1.0 and rep.wall_recall == 1.0

    def test_partial_free_overlap(self):
        truth = _map(["....", "####"])
        pred = _map(["..??", "####"])
        rep = evaluate_maps(pred, truth)
        assert rep.free_iou == pytest.approx(0.5)
        assert rep.explored_fraction == pytest.approx(0.5)

    def test_hallucinated_walls_hit_precision_only(self):
        truth = _map(["....", "...."])
        pred = _map(["..#.", "...."])
        rep = evaluate_maps(pred, truth, tolerance_cells=1)
        assert rep.wall_precision == 0.0
        assert rep.wall_recall == 1.0


class TestRegion:
    def test_region_restricts_scoring(self):
        truth = _map(["..#.", "..#."])
        pred = _map(["....", "...."])
        region = np.zeros((2, 4), bool)
        region[:, :2] = True
        rep = evaluate_maps(pred, truth, region=region)
        assert rep.free_iou == 1.0
        assert rep.n_wall_true == 0
        assert rep.wall_recall == 1.0

    def test_match_just_outside_region_counts(self):
        """Dilation runs on the full grid before the region cut."""
        truth = _map(["#..."])
        pred = _map([".#.."])
        region = np.array([[True, False, False, False]])
        rep = evaluate_maps(pred, truth, tolerance_cells=1, region=region)
        assert rep.wall_recall == 1.0

    def test_census_sums_to_region(self):
        rng = np.random.default_rng(7)
        cells = rng.choice([FREE_VALUE, OCCUPIED_VALUE, UNKNOWN_VALUE], (10, 10)).astype(np.uint8)
        pred = GridMap(cells)
        truth = GridMap(rng.choice([FREE_VALUE, OCCUPIED_VALUE], (10, 10)).astype(np.uint8))
        region = rng.random((10, 10)) < 0.6
        rep = evaluate_maps(pred, truth, region=region)
        assert rep.count_unknown + rep.count_free + rep.count_occupied == int(region.sum())

    def test_shape_mismatch_rejected(self):
        with pytest.raises(DimensionMismatchError):
            evaluate_maps(_map([".."]), _map(["..."]))
        with pytest.raises(DimensionMismatchError):
            evaluate_maps(_map([".."]), _map([".."]), region=np.ones((3, 3), bool))


class TestReportFormats:
    def test_text_is_key_value_lines(self):
        rep = evaluate_maps(_map([".#"]), _map([".#"]))
        lines = rep.to_text().splitlines()
        assert all("=" in line for line in lines)
        kv = dict(line.split("=", 1) for line in lines)
        assert kv["free_iou"] == "1.000000"
        assert kv["no_wall_predictions"] == "false"
        assert kv["tolerance_cells"] == "1"

    def test_json_roundtrip(self):
        rep = evaluate_maps(_map([".#"]), _map([".."]))
        data = json.loads(rep.to_json())
        assert data["wall_precision"] == 0.0
        assert data["n_wall_true"] == 0
        assert isinstance(data["no_wall_predictions"], bool)
