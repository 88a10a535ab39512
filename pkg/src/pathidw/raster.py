"""Grid geometry and dense raster value storage.

All coordinates are projected meters; geographic (lat/lon) input is out of
scope. Rasters are row-major with row 0 at the top, so the cell (row, col)
has its center at ``(xll + (col + 0.5) * cellsize,
yll + (nrows - row - 0.5) * cellsize)``. Cell extents are half-open: a point
on a cell's left or bottom edge belongs to that cell, and the grid extent is
``[xll, xll + ncols * cellsize) x [yll, yll + nrows * cellsize)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_NODATA = -9999.0


@dataclass(frozen=True)
class GridGeometry:
    """Placement of a regular square-celled grid in projected meters."""

    ncols: int
    nrows: int
    xll: float
    yll: float
    cellsize: float

    def __post_init__(self):
        if self.ncols < 1 or self.nrows < 1:
            raise ValueError(f"grid must have at least one cell, got {self.ncols}x{self.nrows}")
        if not (self.cellsize > 0) or not math.isfinite(self.cellsize):
            raise ValueError(f"cellsize must be a positive finite number, got {self.cellsize}")
        if not (math.isfinite(self.xll) and math.isfinite(self.yll)):
            raise ValueError("grid origin must be finite")

    @property
    def width(self) -> float:
        return self.ncols * self.cellsize

    @property
    def height(self) -> float:
        return self.nrows * self.cellsize

    @property
    def xmax(self) -> float:
        return self.xll + self.width

    @property
    def ymax(self) -> float:
        return self.yll + self.height

    @property
    def n_cells(self) -> int:
        return self.ncols * self.nrows

    def cell_of(self, x: float, y: float) -> tuple[int, int] | None:
        """Return the (row, col) of the cell owning point (x, y), or None.

        Ownership is half-open, so points on the left/bottom edge of a cell
        belong to it and points on the grid's right/top boundary are outside.
        """
        col = math.floor((x - self.xll) / self.cellsize)
        row_up = math.floor((y - self.yll) / self.cellsize)
        if col < 0 or col >= self.ncols or row_up < 0 or row_up >= self.nrows:
            return None
        return self.nrows - 1 - row_up, col

    def center_of(self, row: int, col: int) -> tuple[float, float]:
        """Return the center coordinates of cell (row, col)."""
        if not (0 <= row < self.nrows and 0 <= col < self.ncols):
            raise IndexError(f"cell ({row}, {col}) outside a {self.nrows}x{self.ncols} grid")
        x = self.xll + (col + 0.5) * self.cellsize
        y = self.yll + (self.nrows - row - 0.5) * self.cellsize
        return x, y

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        """Return (X, Y) arrays of shape (nrows, ncols) holding cell centers."""
        cols = np.arange(self.ncols)
        rows = np.arange(self.nrows)
        x = self.xll + (cols + 0.5) * self.cellsize
        y = self.yll + (self.nrows - rows - 0.5) * self.cellsize
        return np.broadcast_to(x, (self.nrows, self.ncols)).copy(), \
            np.broadcast_to(y[:, None], (self.nrows, self.ncols)).copy()


class RasterGrid:
    """Immutable float64 raster tied to a GridGeometry.

    Every stored value is finite; the ``nodata`` sentinel (itself a finite
    float, -9999 by default) marks missing cells. The value array is locked
    read-only after construction.
    """

    def __init__(self, geometry: GridGeometry, values, nodata: float = DEFAULT_NODATA):
        if not math.isfinite(nodata):
            raise ValueError("nodata sentinel must be finite")
        arr = np.array(values, dtype=np.float64)
        if arr.shape != (geometry.nrows, geometry.ncols):
            raise ValueError(
                f"values shape {arr.shape} does not match geometry "
                f"({geometry.nrows}, {geometry.ncols})")
        if not np.isfinite(arr).all():
            raise ValueError("raster values must be finite or the nodata sentinel")
        arr.setflags(write=False)
        self.geometry = geometry
        self.values = arr
        self.nodata = float(nodata)

    @classmethod
    def full(cls, geometry: GridGeometry, fill: float,
             nodata: float = DEFAULT_NODATA) -> "RasterGrid":
        return cls(geometry, np.full((geometry.nrows, geometry.ncols), fill), nodata)

    @property
    def is_nodata(self) -> np.ndarray:
        return self.values == self.nodata

    def with_values(self, values) -> "RasterGrid":
        """New raster on the same geometry and nodata sentinel."""
        return RasterGrid(self.geometry, values, self.nodata)

    def __repr__(self):
        g = self.geometry
        return (f"RasterGrid({g.nrows}x{g.ncols}, cellsize={g.cellsize}, "
                f"origin=({g.xll}, {g.yll}), nodata={self.nodata})")
