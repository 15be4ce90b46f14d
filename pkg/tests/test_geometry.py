"""Geometry kernel tests against a brute-force full-grid oracle."""

import math
import random

import pytest

from holesim.geometry import (
    Cell,
    GridSpec,
    Point,
    annulus,
    cell_covered,
    cells_in_radius,
    coverage_ratio,
    coverage_sets,
    distance,
    farthest_uncovered_distance,
)


def brute_cells(pos, radius, grid):
    """Independent oracle: test every cell of the grid against the disk."""
    out = set()
    for ix in range(grid.cols):
        for iy in range(grid.rows):
            cx = (ix + 0.5) * grid.cell_side
            cy = (iy + 0.5) * grid.cell_side
            if math.hypot(cx - pos.x, cy - pos.y) <= radius:
                out.add(Cell(ix, iy))
    return out


GRID = GridSpec(width=100.0, height=100.0, cell_side=10.0, subregion_side=50.0)


class TestDistance:
    def test_pythagorean_triple(self):
        assert distance(Point(0, 0), Point(3, 4)) == 5.0

    def test_identity(self):
        assert distance(Point(7, 7), Point(7, 7)) == 0.0

    def test_unit_diagonal(self):
        assert distance(Point(0, 0), Point(1, 1)) == pytest.approx(
            1.4142135623730951, abs=1e-15)


class TestCellCovered:
    def test_own_cell_always_covered(self):
        # Center of the sensor's own cell is at most l_c/sqrt(2) away.
        assert cell_covered(Cell(0, 0), Point(1.0, 9.0), GRID.cell_side, GRID)

    def test_far_cell_not_covered(self):
        # center of (3, 0) is (35, 5); distance from (5, 5) is 30.
        assert not cell_covered(Cell(3, 0), Point(5, 5), 20.0, GRID)

    def test_boundary_distance_is_covered(self):
        # center of (2, 0) is (25, 5); distance from (5, 5) is exactly 20.
        assert cell_covered(Cell(2, 0), Point(5, 5), 20.0, GRID)

    def test_cell_outside_grid_rejected(self):
        with pytest.raises(ValueError):
            cell_covered(Cell(10, 0), Point(5, 5), 20.0, GRID)
        with pytest.raises(ValueError):
            cell_covered(Cell(0, -1), Point(5, 5), 20.0, GRID)


class TestCellsInRadius:
    def test_tiny_radius_own_cell_only(self):
        got = cells_in_radius(Point(15.0, 15.0), 4.9, GRID)
        assert got == {Cell(1, 1)}

    def test_cross_shape(self):
        # Radius equal to the cell side reaches the four edge-adjacent
        # centers (distance 10) but not the diagonals (distance 10*sqrt(2)).
        got = cells_in_radius(Point(15.0, 15.0), 10.0, GRID)
        assert got == {Cell(1, 1), Cell(0, 1), Cell(2, 1), Cell(1, 0), Cell(1, 2)}

    def test_matches_oracle_randomized(self):
        rng = random.Random(20331)
        for _ in range(300):
            cols = rng.randint(1, 30)
            rows = rng.randint(1, 30)
            side = rng.choice([1.0, 2.5, 10.0])
            grid = GridSpec(cols * side, rows * side, side, subregion_side=side)
            pos = Point(rng.uniform(0, grid.width), rng.uniform(0, grid.height))
            radius = rng.uniform(0.1, 5 * side)
            assert cells_in_radius(pos, radius, grid) == brute_cells(pos, radius, grid)

    def test_monotone_in_radius(self):
        rng = random.Random(7)
        for _ in range(100):
            pos = Point(rng.uniform(0, 100), rng.uniform(0, 100))
            r1 = rng.uniform(1, 40)
            r2 = r1 + rng.uniform(0, 40)
            assert cells_in_radius(pos, r1, GRID) <= cells_in_radius(pos, r2, GRID)


class TestAnnulus:
    def test_equal_cell_sets_give_empty_ring(self):
        # No cell center lies between 14 and 14.1 m of a cell center here.
        pos = Point(15.0, 15.0)
        assert cells_in_radius(pos, 14.0, GRID) == cells_in_radius(pos, 14.1, GRID)
        assert annulus(pos, 14.0, 14.1, GRID) == set()

    def test_matches_oracle(self):
        pos = Point(15.0, 15.0)
        got = annulus(pos, 10.0, 20.0, GRID)
        assert got == brute_cells(pos, 20.0, GRID) - brute_cells(pos, 10.0, GRID)

    def test_disjoint_from_inner_disk(self):
        rng = random.Random(99)
        for _ in range(100):
            pos = Point(rng.uniform(0, 100), rng.uniform(0, 100))
            r_l = rng.uniform(1, 30)
            r_s = r_l + rng.uniform(0.1, 30)
            ring = annulus(pos, r_l, r_s, GRID)
            inner = cells_in_radius(pos, r_l, GRID)
            assert ring & inner == set()
            assert ring | inner == cells_in_radius(pos, r_s, GRID)

    def test_bad_radii_rejected(self):
        with pytest.raises(ValueError):
            annulus(Point(5, 5), 20.0, 20.0, GRID)
        with pytest.raises(ValueError):
            annulus(Point(5, 5), 21.0, 20.0, GRID)


class TestCoverageRatio:
    def test_no_sensors(self):
        assert coverage_ratio([], GRID) == 0.0

    def test_full_coverage(self):
        # One disk larger than the grid diagonal covers every cell.
        assert coverage_ratio([(Point(50, 50), 200.0)], GRID) == 1.0

    def test_exact_fraction(self):
        # 37 sensors parked on distinct cell centers with a sub-cell radius
        # cover exactly their own cells.
        cells = [Cell(i % 10, i // 10) for i in range(37)]
        sensors = [(GRID.cell_center(c), 4.0) for c in cells]
        assert coverage_ratio(sensors, GRID) == pytest.approx(0.37)

    def test_monotone_in_sensor_set(self):
        rng = random.Random(5)
        sensors = []
        prev = 0.0
        for _ in range(30):
            sensors.append((Point(rng.uniform(0, 100), rng.uniform(0, 100)),
                            rng.uniform(5, 25)))
            ratio = coverage_ratio(sensors, GRID)
            assert prev <= ratio <= 1.0
            prev = ratio


class TestFarthestUncovered:
    def test_single_own_cell(self):
        pos = Point(12.0, 13.0)
        d = farthest_uncovered_distance(pos, {Cell(1, 1)}, GRID)
        assert d == pytest.approx(distance(pos, GRID.cell_center(Cell(1, 1))))

    def test_max_of_distances(self):
        # Distances from (5, 5) to the three centers: 10, 20, 30.
        pos = Point(5.0, 5.0)
        cells = {Cell(1, 0), Cell(2, 0), Cell(3, 0)}
        assert farthest_uncovered_distance(pos, cells, GRID) == pytest.approx(30.0)

    def test_against_brute_max(self):
        rng = random.Random(11)
        for _ in range(50):
            pos = Point(rng.uniform(0, 100), rng.uniform(0, 100))
            cells = {Cell(rng.randrange(10), rng.randrange(10)) for _ in range(10)}
            expected = max(distance(pos, GRID.cell_center(c)) for c in cells)
            assert farthest_uncovered_distance(pos, cells, GRID) == expected

    def test_empty_set_rejected(self):
        with pytest.raises(ValueError):
            farthest_uncovered_distance(Point(0, 0), set(), GRID)


class TestGridSpec:
    def test_rejects_non_multiple_subregion(self):
        with pytest.raises(ValueError):
            GridSpec(100, 100, cell_side=10, subregion_side=35)

    def test_rejects_non_multiple_area(self):
        with pytest.raises(ValueError):
            GridSpec(120, 100, cell_side=10, subregion_side=50)

    def test_rejects_zero_cell(self):
        with pytest.raises(ValueError):
            GridSpec(100, 100, cell_side=0, subregion_side=50)

    def test_cell_at_clamps_far_edge(self):
        assert GRID.cell_at(100.0, 100.0) == Cell(9, 9)
        assert GRID.cell_at(0.0, 0.0) == Cell(0, 0)

    def test_subregion_layout(self):
        assert GRID.n_subregions == 4
        assert GRID.subregion_index(10, 10) == 0
        assert GRID.subregion_index(60, 10) == 1
        assert GRID.subregion_index(10, 60) == 2
        assert GRID.subregion_bounds(3) == (50.0, 50.0, 100.0, 100.0)
        assert set(GRID.adjacent_subregions(0)) == {1, 2, 3}


class TestCoverageSets:
    def test_ring_identity(self):
        cs = coverage_sets(Point(35, 35), 12.0, 30.0, GRID)
        assert cs.q_l <= cs.q_star
        assert cs.q_l_minus_s == cs.q_star - cs.q_l
        assert cs.q_l == cells_in_radius(Point(35, 35), 12.0, GRID)
        assert cs.q_star == cells_in_radius(Point(35, 35), 30.0, GRID)

    def test_equal_radii_empty_ring(self):
        cs = coverage_sets(Point(35, 35), 30.0, 30.0, GRID)
        assert cs.q_l == cs.q_star
        assert cs.q_l_minus_s == frozenset()
