"""Forward k-visibility: crossing counts, k-plots and their file format."""

import numpy as np
import pytest

from wifimap import kernels
from wifimap.errors import OutOfBoundsError, SourceInsideWallError
from wifimap.grid import FREE_VALUE, GridMap, OCCUPIED_VALUE, UNKNOWN_VALUE
from wifimap.kvisibility import (
    K_UNDEFINED,
    count_crossings,
    count_crossings_batch,
    kvis_plot,
    load_kgrid_pgm,
    save_kgrid_pgm,
)


def _free_map(w, h, walls=()):
    g = GridMap.blank(w, h, value=FREE_VALUE)
    for c, r in walls:
        g.cells[r, c] = OCCUPIED_VALUE
    return g


def transition_count(grid, frm, to):
    """Independent oracle: Free-to-Occupied transitions along the ray.

    Reads the traced list directly and counts rising edges of the occupancy
    sequence, after collapsing each diagonal corner pair (two cells touched
    at the same ray point) into a single step via OR. A trailing run that
    reaches the destination cell is excluded.
    """
    ray = grid.trace_ray(frm, to)
    occ = grid.occupied_mask()[ray[:, 1], ray[:, 0]]
    dc = np.diff(ray[:, 0]) != 0
    dr = np.diff(ray[:, 1]) != 0
    steps = []
    i = 0
    while i < len(occ):
        if i + 1 < len(occ) and dc[i] and dr[i]:
            steps.append(occ[i] | occ[i + 1])
            i += 2
        else:
            steps.append(occ[i])
            i += 1
    s = np.asarray(steps)
    rises = int(s[0]) + int(np.count_nonzero(s[1:] & ~s[:-1]))
    if s[-1]:
        rises -= 1
    return rises


class TestCountCrossings:
    def test_open_space(self):
        g = _free_map(5, 5)
        assert count_crossings(g, (0, 0), (4, 4)) == 0
        assert count_crossings(g, (2, 2), (2, 2)) == 0

    def test_single_wall(self):
        g = _free_map(7, 3, walls=[(3, 1)])
        assert count_crossings(g, (0, 1), (6, 1)) == 1
        assert count_crossings(g, (6, 1), (0, 1)) == 1

    def test_two_walls(self):
        g = _free_map(9, 1, walls=[(2, 0), (6, 0)])
        assert count_crossings(g, (0, 0), (8, 0)) == 2

    def test_thick_wall_is_one_run(self):
        g = _free_map(9, 1, walls=[(3, 0), (4, 0), (5, 0)])
        assert count_crossings(g, (0, 0), (8, 0)) == 1

    def test_ray_ending_inside_wall(self):
        """The run containing the destination is not counted."""
        g = _free_map(6, 1, walls=[(2, 0), (5, 0)])
        assert count_crossings(g, (0, 0), (5, 0)) == 1
        assert count_crossings(g, (0, 0), (4, 0)) == 1

    def test_unknown_counts_as_free(self):
        g = _free_map(5, 1, walls=[(2, 0)])
        g.cells[0, 1] = UNKNOWN_VALUE
        g.cells[0, 3] = UNKNOWN_VALUE
        assert count_crossings(g, (0, 0), (4, 0)) == 1

    def test_source_inside_wall_rejected(self):
        g = _free_map(3, 3, walls=[(0, 0)])
        with pytest.raises(SourceInsideWallError):
            count_crossings(g, (0, 0), (2, 2))

    def test_out_of_bounds_rejected(self):
        g = _free_map(3, 3)
        with pytest.raises(OutOfBoundsError):
            count_crossings(g, (0, 0), (3, 0))


class TestCornerConvention:
    """A ray through an exact lattice corner counts a grazed wall once."""

    def test_grazed_diagonal_cell(self):
        g = _free_map(3, 3, walls=[(1, 1)])
        assert count_crossings(g, (0, 0), (2, 2)) == 1

    def test_grazed_side_cell(self):
        g = _free_map(3, 3, walls=[(1, 0)])
        assert count_crossings(g, (0, 0), (2, 2)) == 1
        g = _free_map(3, 3, walls=[(0, 1)])
        assert count_crossings(g, (0, 0), (2, 2)) == 1

    def test_two_walls_meeting_at_corner(self):
        """Both side cells occupied still reads as a single contact point."""
        g = _free_map(3, 3, walls=[(1, 0), (0, 1)])
        assert count_crossings(g, (0, 0), (2, 2)) == 1

    def test_corner_entry_into_wall(self):
        """The free side cell of a corner pair must not split the wall."""
        g = _free_map(3, 3, walls=[(1, 0), (1, 1)])
        assert count_crossings(g, (0, 0), (2, 2)) == 1

    def test_wall_through_corner_path(self):
        g = _free_map(4, 4, walls=[(2, 1), (2, 2), (2, 3)])
        assert count_crossings(g, (0, 0), (3, 3)) == 1


class TestOracleAgreement:
    def test_random_maps(self):
        rng = np.random.default_rng(41)
        for _ in range(30):
            g = _free_map(16, 16)
            occ = rng.random((16, 16)) < 0.2
            g.cells[occ] = OCCUPIED_VALUE
            free = np.argwhere(~occ)
            src = tuple(int(v) for v in free[rng.integers(0, len(free))][::-1])
            for _ in range(40):
                to = (int(rng.integers(0, 16)), int(rng.integers(0, 16)))
                assert count_crossings(g, src, to) == transition_count(g, src, to)

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(43)
        g = _free_map(20, 14)
        g.cells[rng.random((14, 20)) < 0.15] = OCCUPIED_VALUE
        g.cells[3, 2] = FREE_VALUE
        tc = rng.integers(0, 20, 50).astype(np.int32)
        tr = rng.integers(0, 14, 50).astype(np.int32)
        batch = count_crossings_batch(g, (2, 3), tc, tr)
        for i in range(50):
            assert batch[i] == count_crossings(g, (2, 3), (int(tc[i]), int(tr[i])))


class TestSymmetry:
    def test_free_endpoints_symmetric(self):
        """Crossing counts are direction-independent between free cells."""
        rng = np.random.default_rng(47)
        for _ in range(10):
            g = _free_map(12, 12)
            occ = rng.random((12, 12)) < 0.25
            g.cells[occ] = OCCUPIED_VALUE
            free = np.argwhere(~occ)
            for _ in range(40):
                a = tuple(int(v) for v in free[rng.integers(0, len(free))][::-1])
                b = tuple(int(v) for v in free[rng.integers(0, len(free))][::-1])
                assert count_crossings(g, a, b) == count_crossings(g, b, a)

    def test_exhaustive_kernel_sweep(self):
        assert kernels.symmetry_mismatches(12, 12) == 0


class TestKvisPlot:
    def test_router_zero_walls_undefined(self):
        g = _free_map(5, 5, walls=[(2, 0), (2, 1), (2, 2), (2, 3), (2, 4)])
        kg = kvis_plot(g, (0, 2))
        assert kg.dtype == np.int16
        assert kg[2, 0] == 0
        assert np.all(kg[:, 2] == K_UNDEFINED)
        assert np.all(kg[:, :2] == 0)
        assert np.all(kg[:, 3:] == 1)

    def test_every_cell_matches_scalar(self):
        rng = np.random.default_rng(53)
        g = _free_map(10, 10)
        g.cells[rng.random((10, 10)) < 0.2] = OCCUPIED_VALUE
        g.cells[5, 5] = FREE_VALUE
        kg = kvis_plot(g, (5, 5))
        for r in range(10):
            for c in range(10):
                if g.is_occupied((c, r)):
                    assert kg[r, c] == K_UNDEFINED
                else:
                    assert kg[r, c] == count_crossings(g, (5, 5), (c, r))

    def test_router_in_wall_rejected(self):
        g = _free_map(3, 3, walls=[(1, 1)])
        with pytest.raises(SourceInsideWallError):
            kvis_plot(g, (1, 1))


class TestKgridPgm:
    def test_roundtrip(self, tmp_path):
        kg = np.array([[0, 1, 2], [K_UNDEFINED, 3, 254]], np.int16)
        p = tmp_path / "k.pgm"
        save_kgrid_pgm(kg, p, resolution=0.05, origin=(1.0, 2.0))
        back, carrier = load_kgrid_pgm(p)
        assert np.array_equal(back, kg)
        assert carrier.resolution == 0.05
        assert carrier.origin == (1.0, 2.0)

    def test_undefined_encodes_as_255(self, tmp_path):
        p = tmp_path / "u.pgm"
        save_kgrid_pgm(np.array([[K_UNDEFINED]], np.int16), p)
        assert p.read_bytes().endswith(b"\xff")
