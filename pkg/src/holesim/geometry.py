"""Grid-cell geometry for disk coverage over a rectangular sensing field.

The target area is tiled with square cells; a cell counts as covered by a
sensor when the cell center lies inside the sensor's sensing disk, boundary
inclusive. Distances are compared exactly (no epsilon). All functions here
are pure and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple


class Cell(NamedTuple):
    """Grid cell addressed by column index ``ix`` and row index ``iy``."""

    ix: int
    iy: int


@dataclass(frozen=True)
class Point:
    """Continuous position in meters."""

    x: float
    y: float


def distance(a: Point, b: Point) -> float:
    """Euclidean distance between two points, in meters."""
    return math.hypot(a.x - b.x, a.y - b.y)


def _integer_multiple(value: float, base: float) -> bool:
    ratio = value / base
    return ratio >= 1.0 - 1e-9 and abs(ratio - round(ratio)) < 1e-9


@dataclass(frozen=True)
class GridSpec:
    """Rectangular target area tiled with square cells and square sub-regions.

    ``subregion_side`` must be an integer multiple of ``cell_side``, and the
    area dimensions integer multiples of ``subregion_side``, so cells nest
    exactly inside sub-regions and sub-regions tile the area.
    """

    width: float
    height: float
    cell_side: float
    subregion_side: float

    def __post_init__(self) -> None:
        problems = []
        if self.cell_side <= 0:
            problems.append(f"cell_side must be > 0, got {self.cell_side}")
        else:
            if not _integer_multiple(self.subregion_side, self.cell_side):
                problems.append(
                    f"subregion_side {self.subregion_side} is not an integer "
                    f"multiple of cell_side {self.cell_side}"
                )
            for name, dim in (("width", self.width), ("height", self.height)):
                if self.subregion_side <= 0 or not _integer_multiple(dim, self.subregion_side):
                    problems.append(
                        f"{name} {dim} is not an integer multiple of "
                        f"subregion_side {self.subregion_side}"
                    )
        if problems:
            raise ValueError("; ".join(problems))

    @property
    def cols(self) -> int:
        return round(self.width / self.cell_side)

    @property
    def rows(self) -> int:
        return round(self.height / self.cell_side)

    @property
    def n_cells(self) -> int:
        return self.cols * self.rows

    @property
    def sub_cols(self) -> int:
        return round(self.width / self.subregion_side)

    @property
    def sub_rows(self) -> int:
        return round(self.height / self.subregion_side)

    @property
    def n_subregions(self) -> int:
        return self.sub_cols * self.sub_rows

    def contains_cell(self, cell: Cell) -> bool:
        return 0 <= cell.ix < self.cols and 0 <= cell.iy < self.rows

    def cell_center(self, cell: Cell) -> Point:
        return Point((cell.ix + 0.5) * self.cell_side, (cell.iy + 0.5) * self.cell_side)

    def cell_at(self, x: float, y: float) -> Cell:
        """Cell containing (x, y); coordinates on the far edge clamp inward."""
        ix = min(self.cols - 1, max(0, int(x / self.cell_side)))
        iy = min(self.rows - 1, max(0, int(y / self.cell_side)))
        return Cell(ix, iy)

    def all_cells(self) -> Iterator[Cell]:
        for ix in range(self.cols):
            for iy in range(self.rows):
                yield Cell(ix, iy)

    def subregion_index(self, x: float, y: float) -> int:
        """Index of the sub-region containing (x, y), row-major."""
        sx = min(self.sub_cols - 1, max(0, int(x / self.subregion_side)))
        sy = min(self.sub_rows - 1, max(0, int(y / self.subregion_side)))
        return sy * self.sub_cols + sx

    def subregion_bounds(self, index: int) -> tuple[float, float, float, float]:
        """(x0, y0, x1, y1) bounds of a sub-region."""
        sy, sx = divmod(index, self.sub_cols)
        s = self.subregion_side
        return (sx * s, sy * s, (sx + 1) * s, (sy + 1) * s)

    def adjacent_subregions(self, index: int) -> list[int]:
        """Indices of the 8-neighborhood sub-regions around ``index``."""
        sy, sx = divmod(index, self.sub_cols)
        out = []
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                if dx == 0 and dy == 0:
                    continue
                nx, ny = sx + dx, sy + dy
                if 0 <= nx < self.sub_cols and 0 <= ny < self.sub_rows:
                    out.append(ny * self.sub_cols + nx)
        return out


def cell_covered(cell: Cell, sensor_pos: Point, radius: float, grid: GridSpec) -> bool:
    """True iff the cell's center lies within ``radius`` of the sensor.

    Boundary inclusive: a center exactly at distance ``radius`` is covered.
    """
    if not grid.contains_cell(cell):
        raise ValueError(f"cell {cell} outside grid ({grid.cols}x{grid.rows})")
    cx = (cell.ix + 0.5) * grid.cell_side
    cy = (cell.iy + 0.5) * grid.cell_side
    return math.hypot(cx - sensor_pos.x, cy - sensor_pos.y) <= radius


def cells_in_radius(sensor_pos: Point, radius: float, grid: GridSpec) -> set[Cell]:
    """All grid cells whose centers lie within the sensing disk.

    Equivalent to testing every cell of the grid, but only scans the bounding
    box of cells the disk can reach. The box is padded by one cell on every
    side so that centers exactly on the disk boundary are never missed; the
    distance test discards the excess. Coverage uses the same rounded
    distance as :func:`distance`, so a radius sized from a cell's measured
    distance always covers that cell.
    """
    side = grid.cell_side
    x, y = sensor_pos.x, sensor_pos.y
    r2 = radius * radius
    hypot = math.hypot
    ix_lo = max(0, int(math.floor((x - radius) / side)) - 1)
    ix_hi = min(grid.cols - 1, int(math.floor((x + radius) / side)) + 1)
    iy_lo = max(0, int(math.floor((y - radius) / side)) - 1)
    iy_hi = min(grid.rows - 1, int(math.floor((y + radius) / side)) + 1)
    out: set[Cell] = set()
    for ix in range(ix_lo, ix_hi + 1):
        dx = (ix + 0.5) * side - x
        if dx * dx > r2:
            continue
        for iy in range(iy_lo, iy_hi + 1):
            dy = (iy + 0.5) * side - y
            if hypot(dx, dy) <= radius:
                out.add(Cell(ix, iy))
    return out


def annulus(sensor_pos: Point, r_l: float, r_s: float, grid: GridSpec) -> set[Cell]:
    """Cells covered at the extended radius ``r_s`` but not at ``r_l``."""
    if r_l >= r_s:
        raise ValueError(f"annulus requires r_l < r_s, got r_l={r_l}, r_s={r_s}")
    return cells_in_radius(sensor_pos, r_s, grid) - cells_in_radius(sensor_pos, r_l, grid)


def coverage_ratio(sensors: Iterable[tuple[Point, float]], grid: GridSpec) -> float:
    """Fraction of grid cells covered by the union of the sensing disks.

    Returns 1.0 exactly when every cell of the area is covered.
    """
    covered: set[Cell] = set()
    for pos, radius in sensors:
        covered |= cells_in_radius(pos, radius, grid)
    return len(covered) / grid.n_cells


def farthest_uncovered_distance(
    sensor_pos: Point, uncovered: Iterable[Cell], grid: GridSpec
) -> float:
    """Distance from the sensor to the farthest cell center in ``uncovered``.

    Used to size a sensing-range increase. Raises on an empty set.
    """
    best = -1.0
    for cell in uncovered:
        d = math.hypot(
            (cell.ix + 0.5) * grid.cell_side - sensor_pos.x,
            (cell.iy + 0.5) * grid.cell_side - sensor_pos.y,
        )
        if d > best:
            best = d
    if best < 0:
        raise ValueError("farthest_uncovered_distance over an empty cell set")
    return best


@dataclass(frozen=True)
class CoverageSets:
    """Per-node cell sets: normal range, extended range, and the ring between.

    ``q_l`` is the set covered at the current sensing radius, ``q_star`` the
    set covered at the maximum radius, ``q_l_minus_s`` their difference, and
    ``q_hat`` the subset of the ring left uncovered by every neighbor (empty
    until a detection pass fills it).
    """

    q_l: frozenset[Cell]
    q_star: frozenset[Cell]
    q_l_minus_s: frozenset[Cell]
    q_hat: frozenset[Cell] = field(default_factory=frozenset)


def coverage_sets(pos: Point, r_l: float, r_s: float, grid: GridSpec) -> CoverageSets:
    """Compute a node's coverage sets at its current and maximum radii."""
    if r_l > r_s:
        raise ValueError(f"coverage_sets requires r_l <= r_s, got {r_l} > {r_s}")
    q_star = frozenset(cells_in_radius(pos, r_s, grid))
    if r_l == r_s:
        q_l = q_star
    else:
        q_l = frozenset(cells_in_radius(pos, r_l, grid))
    return CoverageSets(q_l=q_l, q_star=q_star, q_l_minus_s=q_star - q_l)
