"""Accumulated least-cost path distances over a cost surface.

Movement is 8-connected between cell centers. A move between adjacent cells
i and j costs ``(cost_i + cost_j) / 2 * cellsize * m`` meters, where m is 1
for rook moves and sqrt(2) for diagonals, so distances reduce to plain
center-to-center polyline length on uniform unit-cost water. Nodata cells
cannot be entered, and a diagonal move is forbidden when both orthogonal
cells flanking it are blocked (land or nodata): two land cells touching at a
corner form a watertight wall.

Land cells themselves stay traversable at high cost. Any route forced
through land accumulates at least ``land_cost * cellsize`` meters (one cell
in, one cell out), so cells at or beyond that distance are flagged
unreachable: they cannot be reached without crossing a barrier.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .costsurface import CostSurface
from .errors import SnapError
from .points import PointSet
from .raster import RasterGrid

DEFAULT_SNAP_RADIUS = 2

# (drow, dcol, length multiplier); each undirected pair is listed once
_MOVES = ((0, 1, 1.0), (1, 0, 1.0), (1, 1, math.sqrt(2.0)), (1, -1, math.sqrt(2.0)))


@dataclass(frozen=True)
class DistanceField:
    """Accumulated distances from one source cell.

    ``distances`` holds meters (nodata where no route exists at all);
    ``reachable`` is False for cells that cannot be reached without
    traversing land, including nodata cells.
    """

    source: tuple[int, int]
    distances: RasterGrid
    reachable: np.ndarray

    def __post_init__(self):
        self.reachable.setflags(write=False)


def move_graph(cost: CostSurface) -> sparse.csr_matrix:
    """Sparse symmetric move graph over the cost surface, cells in row-major order."""
    geom = cost.geometry
    nr, nc = geom.nrows, geom.ncols
    vals = cost.raster.values
    traversable = ~cost.raster.is_nodata
    blocked = ~cost.is_water  # land or nodata: blocks corner cutting
    index = np.arange(nr * nc).reshape(nr, nc)

    rows, cols, data = [], [], []
    for dr, dc, mult in _MOVES:
        if nr <= dr or nc <= abs(dc):
            continue
        c_lo, c_hi = max(0, -dc), nc - max(0, dc)
        a = (slice(0, nr - dr), slice(c_lo, c_hi))
        b = (slice(dr, nr), slice(c_lo + dc, c_hi + dc))
        ok = traversable[a] & traversable[b]
        if dr and dc:
            flank1 = blocked[slice(dr, nr), slice(c_lo, c_hi)]          # (r+dr, c)
            flank2 = blocked[slice(0, nr - dr), slice(c_lo + dc, c_hi + dc)]  # (r, c+dc)
            ok &= ~(flank1 & flank2)
        w = 0.5 * (vals[a] + vals[b])
        w = w * geom.cellsize
        w = w * mult
        ia, ib, ww = index[a][ok], index[b][ok], w[ok]
        rows.extend((ia, ib))
        cols.extend((ib, ia))
        data.extend((ww, ww))

    if rows:
        rows = np.concatenate(rows)
        cols = np.concatenate(cols)
        data = np.concatenate(data)
    else:
        rows = cols = np.empty(0, dtype=int)
        data = np.empty(0)
    return sparse.csr_matrix((data, (rows, cols)), shape=(nr * nc, nr * nc))


def distance_field(cost: CostSurface, source: tuple[int, int], *,
                   graph: sparse.csr_matrix | None = None) -> DistanceField:
    """Distances from ``source`` (a (row, col) cell) to every cell.

    Raises ValueError when the source is out of bounds or a nodata cell.
    """
    geom = cost.geometry
    r, c = source
    if not (0 <= r < geom.nrows and 0 <= c < geom.ncols):
        raise ValueError(f"source cell {source} outside a {geom.nrows}x{geom.ncols} grid")
    if cost.raster.is_nodata[r, c]:
        raise ValueError(f"source cell {source} is nodata")
    g = move_graph(cost) if graph is None else graph
    raw = csgraph.dijkstra(g, directed=True, indices=[r * geom.ncols + c])[0]
    return _field_from_raw(cost, (r, c), raw)


def _field_from_raw(cost: CostSurface, source: tuple[int, int],
                    raw: np.ndarray) -> DistanceField:
    geom = cost.geometry
    shape = (geom.nrows, geom.ncols)
    finite = np.isfinite(raw)
    threshold = cost.land_cost * geom.cellsize
    reachable = (finite & (raw < threshold)).reshape(shape)
    dist = np.where(finite, raw, cost.raster.nodata).reshape(shape)
    return DistanceField(source, RasterGrid(geom, dist, cost.raster.nodata), reachable)


def fields_for_cells(cost: CostSurface, cells, *, threads: int = 1,
                     graph: sparse.csr_matrix | None = None) -> list[DistanceField]:
    """One DistanceField per source cell, order-preserving.

    Duplicate cells share one computation. ``threads`` bounds worker threads;
    the result is identical for any thread count.
    """
    cells = [tuple(c) for c in cells]
    geom = cost.geometry
    for cell in cells:
        r, c = cell
        if not (0 <= r < geom.nrows and 0 <= c < geom.ncols) or cost.raster.is_nodata[r, c]:
            raise ValueError(f"source cell {cell} out of bounds or nodata")
    if not cells:
        return []
    g = move_graph(cost) if graph is None else graph
    unique = list(dict.fromkeys(cells))
    indices = np.array([r * geom.ncols + c for r, c in unique])

    threads = max(1, int(threads))
    if threads == 1 or len(unique) == 1:
        raw = csgraph.dijkstra(g, directed=True, indices=indices)
    else:
        chunks = np.array_split(indices, min(threads, len(unique)))
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(
                lambda ix: csgraph.dijkstra(g, directed=True, indices=ix), chunks))
        raw = np.vstack(parts)

    per_cell = {cell: _field_from_raw(cost, cell, raw[i]) for i, cell in enumerate(unique)}
    return [per_cell[cell] for cell in cells]


def snap_to_water(cost: CostSurface, x: float, y: float, *,
                  radius: int = DEFAULT_SNAP_RADIUS) -> tuple[int, int] | None:
    """Snap a point to a water cell, or None when no candidate exists.

    A point already on a water cell stays there. A point on a land or nodata
    cell moves to the water cell within ``radius`` cells (Chebyshev window)
    whose center is nearest the point; ties go to the first candidate in
    row-major scan order. Points outside the grid extent never snap.
    """
    geom = cost.geometry
    cell = geom.cell_of(x, y)
    if cell is None:
        return None
    water = cost.is_water
    if water[cell]:
        return cell
    r0, c0 = cell
    best = None
    best_d2 = math.inf
    for r in range(max(0, r0 - radius), min(geom.nrows, r0 + radius + 1)):
        for c in range(max(0, c0 - radius), min(geom.ncols, c0 + radius + 1)):
            if not water[r, c]:
                continue
            cx, cy = geom.center_of(r, c)
            d2 = (x - cx) ** 2 + (y - cy) ** 2
            if d2 < best_d2:
                best, best_d2 = (r, c), d2
    return best


def snap_points(cost: CostSurface, points: PointSet, *,
                radius: int = DEFAULT_SNAP_RADIUS) -> list[tuple[int, int]]:
    """Snap every point, raising one SnapError listing all failures."""
    cells, failures = [], []
    for i in range(len(points)):
        x, y = float(points.x[i]), float(points.y[i])
        cell = snap_to_water(cost, x, y, radius=radius)
        if cell is None:
            if cost.geometry.cell_of(x, y) is None:
                failures.append((i, "outside the grid extent"))
            else:
                failures.append((i, f"no water cell within {radius} cells"))
        else:
            cells.append(cell)
    if failures:
        raise SnapError(failures)
    return cells


def distances_to_points(cost: CostSurface, sources: PointSet, *,
                        snap_radius: int = DEFAULT_SNAP_RADIUS,
                        threads: int = 1) -> list[DistanceField]:
    """Distance field per measurement point, order-preserving with the input.

    Each point is snapped to a water cell first; identical points yield
    identical fields. All snap failures are reported together.
    """
    cells = snap_points(cost, sources, radius=snap_radius)
    return fields_for_cells(cost, cells, threads=threads)
