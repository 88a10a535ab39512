"""Land polygons and traversal-cost rasters.

A cost surface is a two-valued raster: traversable open water carries a low
cost and barrier land a prohibitively high one (1 and 10,000 by default).
Land is burned in from polygon rings by a center-point test: a cell is land
iff its center lies inside at least one ring under the even-odd rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PolygonError
from .raster import DEFAULT_NODATA, GridGeometry, RasterGrid

DEFAULT_WATER_COST = 1.0
DEFAULT_LAND_COST = 10000.0


@dataclass(frozen=True)
class PolygonSet:
    """Collection of closed rings, each an (n, 2) array of (x, y) vertices.

    Rings must be explicitly closed (first vertex repeated last) and carry at
    least 4 vertices including the closure. Containment is tested per ring
    with the even-odd (crossing number) rule and a point counts as inside the
    set when any ring contains it, so adding a ring never shrinks the land.
    """

    rings: tuple[np.ndarray, ...]

    def __post_init__(self):
        normalized = []
        for i, ring in enumerate(self.rings):
            arr = np.array(ring, dtype=np.float64)
            if arr.ndim != 2 or arr.shape[1] != 2:
                raise PolygonError(i, f"expected an (n, 2) vertex array, got shape {arr.shape}")
            if len(arr) < 4:
                raise PolygonError(i, f"needs at least 4 vertices including closure, got {len(arr)}")
            if not np.isfinite(arr).all():
                raise PolygonError(i, "vertices must be finite")
            if arr[0, 0] != arr[-1, 0] or arr[0, 1] != arr[-1, 1]:
                raise PolygonError(i, "ring is not closed (first vertex must equal last)")
            arr.setflags(write=False)
            normalized.append(arr)
        object.__setattr__(self, "rings", tuple(normalized))

    @classmethod
    def empty(cls) -> "PolygonSet":
        return cls(())

    def __len__(self) -> int:
        return len(self.rings)

    def contains(self, x, y) -> np.ndarray:
        """Even-odd containment of points (x, y); accepts scalars or arrays."""
        px = np.asarray(x, dtype=np.float64)
        py = np.asarray(y, dtype=np.float64)
        inside = np.zeros(np.broadcast(px, py).shape, dtype=bool)
        for ring in self.rings:
            inside |= _ring_contains(ring, px, py)
        return inside


def _ring_contains(ring: np.ndarray, px: np.ndarray, py: np.ndarray) -> np.ndarray:
    """Crossing-number parity of points against one closed ring."""
    inside = np.zeros(np.broadcast(px, py).shape, dtype=bool)
    x1, y1 = ring[:-1, 0], ring[:-1, 1]
    x2, y2 = ring[1:, 0], ring[1:, 1]
    for ex1, ey1, ex2, ey2 in zip(x1, y1, x2, y2):
        crosses = ((ey1 <= py) & (py < ey2)) | ((ey2 <= py) & (py < ey1))
        if not crosses.any():
            continue
        # x of the edge at height py; only evaluated where the edge spans py,
        # so ey2 != ey1 there
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (py - ey1) / (ey2 - ey1)
            xi = ex1 + t * (ex2 - ex1)
        inside ^= crosses & (px < xi)
    return inside


@dataclass(frozen=True)
class CostSurface:
    """Two-valued traversal cost raster with its class costs."""

    raster: RasterGrid
    water_cost: float = DEFAULT_WATER_COST
    land_cost: float = DEFAULT_LAND_COST

    def __post_init__(self):
        if not (0 < self.water_cost < self.land_cost):
            raise ValueError(
                f"need 0 < water_cost < land_cost, got {self.water_cost}, {self.land_cost}")
        vals = self.raster.values
        known = self.raster.is_nodata | (vals == self.water_cost) | (vals == self.land_cost)
        if not known.all():
            bad = vals[~known]
            raise ValueError(f"cost raster holds values outside the two classes, e.g. {bad.flat[0]}")

    @property
    def geometry(self) -> GridGeometry:
        return self.raster.geometry

    @property
    def is_water(self) -> np.ndarray:
        return (~self.raster.is_nodata) & (self.raster.values == self.water_cost)

    @property
    def is_land(self) -> np.ndarray:
        return (~self.raster.is_nodata) & (self.raster.values == self.land_cost)


def rasterize_land(polygons: PolygonSet, geometry: GridGeometry, *,
                   water_cost: float = DEFAULT_WATER_COST,
                   land_cost: float = DEFAULT_LAND_COST,
                   nodata: float = DEFAULT_NODATA) -> CostSurface:
    """Burn land polygons into a cost surface over ``geometry``.

    Each cell is classified by its center point: land when the center falls
    inside the polygon set, water otherwise. An empty polygon set yields an
    all-water surface.
    """
    cx, cy = geometry.cell_centers()
    land = polygons.contains(cx, cy)
    values = np.where(land, land_cost, water_cost)
    return CostSurface(RasterGrid(geometry, values, nodata), water_cost, land_cost)


def reclassify(classes: RasterGrid, water_class_value: float, *,
               water_cost: float = DEFAULT_WATER_COST,
               land_cost: float = DEFAULT_LAND_COST) -> CostSurface:
    """Map a class raster onto traversal costs.

    Cells equal to ``water_class_value`` become ``water_cost``, every other
    data cell becomes ``land_cost``, and nodata cells stay nodata.
    """
    vals = classes.values
    out = np.where(vals == water_class_value, water_cost, land_cost)
    out = np.where(classes.is_nodata, classes.nodata, out)
    return CostSurface(RasterGrid(classes.geometry, out, classes.nodata),
                       water_cost, land_cost)
