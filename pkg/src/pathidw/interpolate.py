"""Inverse distance weighted estimation, fed by path or Euclidean distances.

The estimator is the classic Shepard form

    V = sum(v_i * d_i**-p) / sum(d_i**-p)

and the only difference between the two interpolators is what d_i means:
``interpolate_ipdw`` uses accumulated in-water path distances, so barriers
separate neighborhoods, while ``interpolate_idw`` uses straight-line
distances that ignore barriers. Both share one ``InterpConfig``, so power
and neighborhood settings cannot diverge between methods being compared.

Measurement points are snapped to water-cell centers before estimation and
points landing on the same cell are averaged, for both methods alike; a
prediction cell that coincides with a snapped measurement returns that
measurement's (averaged) value exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .costsurface import CostSurface
from .errors import ConsistencyError
from .pathdist import DEFAULT_SNAP_RADIUS, fields_for_cells, snap_points
from .points import PointSet
from .raster import DEFAULT_NODATA, GridGeometry, RasterGrid

# tolerance slack for the post-hoc convex-combination assertion
_CONVEXITY_RTOL = 1e-9


@dataclass(frozen=True)
class InterpConfig:
    """Shared estimator settings for IDW and IPDW runs.

    Exactly one neighborhood mode is active: nearest-n (``n_nearest`` set),
    max-distance (``max_distance`` set, inclusive), or all-points (neither).
    """

    power: float = 2.0
    n_nearest: int | None = 10
    max_distance: float | None = None
    exact_at_zero: bool = True

    def __post_init__(self):
        if not self.power > 0:
            raise ValueError(f"power must be positive, got {self.power}")
        if self.n_nearest is not None and self.max_distance is not None:
            raise ValueError("choose one neighborhood mode: nearest-n or max-distance")
        if self.n_nearest is not None and self.n_nearest < 1:
            raise ValueError(f"n_nearest must be a positive integer, got {self.n_nearest}")
        if self.max_distance is not None and not self.max_distance > 0:
            raise ValueError(f"max_distance must be positive, got {self.max_distance}")

    @property
    def mode(self) -> str:
        if self.n_nearest is not None:
            return "nearest"
        if self.max_distance is not None:
            return "within"
        return "all"

    @classmethod
    def nearest(cls, n: int, *, power: float = 2.0, exact_at_zero: bool = True) -> "InterpConfig":
        return cls(power=power, n_nearest=n, max_distance=None, exact_at_zero=exact_at_zero)

    @classmethod
    def within(cls, distance: float, *, power: float = 2.0,
               exact_at_zero: bool = True) -> "InterpConfig":
        return cls(power=power, n_nearest=None, max_distance=distance,
                   exact_at_zero=exact_at_zero)

    @classmethod
    def all_points(cls, *, power: float = 2.0, exact_at_zero: bool = True) -> "InterpConfig":
        return cls(power=power, n_nearest=None, max_distance=None,
                   exact_at_zero=exact_at_zero)


@dataclass(frozen=True)
class Prediction:
    """One estimate plus bookkeeping about the neighbors that formed it."""

    value: float
    n_neighbors_used: int
    min_neighbor_distance: float


def idw_estimate(neighbors, config: InterpConfig) -> Prediction | None:
    """Estimate one value from (distance, value) neighbor pairs.

    Returns None (a NoData outcome, not an error) when no neighbor survives
    the neighborhood filter. With ``exact_at_zero`` a zero-distance neighbor
    short-circuits to the mean of all zero-distance values.
    """
    pairs = [(float(d), float(v)) for d, v in neighbors]
    if any(d < 0 for d, _ in pairs):
        raise ValueError("neighbor distances must be non-negative")

    if config.mode == "nearest":
        order = sorted(range(len(pairs)), key=lambda i: (pairs[i][0], i))
        used = [pairs[i] for i in order[:config.n_nearest]]
    elif config.mode == "within":
        used = [p for p in pairs if p[0] <= config.max_distance]
    else:
        used = pairs
    if not used:
        return None

    zero_vals = [v for d, v in used if d == 0.0]
    if zero_vals:
        if not config.exact_at_zero:
            raise ValueError("zero neighbor distance with exact_at_zero disabled")
        return Prediction(float(np.mean(zero_vals)), len(zero_vals), 0.0)

    d = np.array([p[0] for p in used])
    v = np.array([p[1] for p in used])
    # Weights are scale-invariant in the distances, so normalizing by the
    # nearest one keeps d**-p away from overflow at extreme magnitudes. A
    # ratio that still overflows means a negligible neighbor: weight 0.
    with np.errstate(over="ignore"):
        w = (d / d.min()) ** -config.power
    den = w.sum()
    if not (np.isfinite(den) and den > 0):
        raise ConsistencyError(f"degenerate weight sum {den}")
    value = float((w * v).sum() / den)
    lo, hi = float(v.min()), float(v.max())
    tol = _CONVEXITY_RTOL * (hi - lo + 1.0)
    if value < lo - tol or value > hi + tol:
        raise ConsistencyError(
            f"estimate {value} falls outside neighbor value range [{lo}, {hi}]")
    value = min(max(value, lo), hi)
    return Prediction(value, len(used), float(d.min()))


def snapped_sources(points: PointSet, *, cost: CostSurface | None = None,
                    geometry: GridGeometry | None = None,
                    snap_radius: int = DEFAULT_SNAP_RADIUS
                    ) -> tuple[list[tuple[int, int]], np.ndarray]:
    """Snap measurements to cells and average coincident ones.

    Returns unique cells in first-seen order with their averaged values.
    With a cost surface, points snap to water cells within the snap radius;
    with bare geometry every in-extent cell is eligible.
    """
    if len(points) == 0:
        raise ValueError("no measurement points supplied")
    if cost is not None:
        cells = snap_points(cost, points, radius=snap_radius)
    else:
        if geometry is None:
            raise ValueError("either a cost surface or a geometry is required")
        cells = []
        missing = []
        for i in range(len(points)):
            cell = geometry.cell_of(float(points.x[i]), float(points.y[i]))
            if cell is None:
                missing.append(i)
            else:
                cells.append(cell)
        if missing:
            from .errors import SnapError
            raise SnapError([(i, "outside the grid extent") for i in missing])

    grouped: dict[tuple[int, int], list[float]] = {}
    for cell, value in zip(cells, points.values):
        grouped.setdefault(cell, []).append(float(value))
    unique = list(grouped)
    means = np.array([np.mean(grouped[cell]) for cell in unique])
    return unique, means


def _estimate_columns(dist: np.ndarray, values: np.ndarray,
                      config: InterpConfig) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized estimator over target columns.

    ``dist`` is (n_sources, n_targets) with inf marking excluded pairs.
    Returns (estimates, has_estimate); targets with no usable neighbor get
    has_estimate False. Semantics mirror ``idw_estimate`` exactly, with
    nearest-n ties broken by source order.
    """
    k, nt = dist.shape
    if config.mode == "within":
        dist = np.where(dist <= config.max_distance, dist, np.inf)
    if config.mode == "nearest" and k > config.n_nearest:
        order = np.argsort(dist, axis=0, kind="stable")[:config.n_nearest]
        dsel = np.take_along_axis(dist, order, axis=0)
        vsel = values[order]
    else:
        dsel = dist
        vsel = np.broadcast_to(values[:, None], dist.shape)

    valid = np.isfinite(dsel)
    zero = valid & (dsel == 0.0)
    zero_cols = zero.any(axis=0)
    if zero_cols.any() and not config.exact_at_zero:
        raise ValueError("zero neighbor distance with exact_at_zero disabled")

    dw = np.where(valid & (dsel > 0.0), dsel, np.inf)
    near = dw.min(axis=0)
    near = np.where(np.isfinite(near), near, 1.0)
    with np.errstate(over="ignore"):
        w = (dw / near) ** -config.power
    den = w.sum(axis=0)
    num = (w * np.where(valid, vsel, 0.0)).sum(axis=0)
    has = zero_cols | (den > 0)

    est = np.zeros(nt)
    np.divide(num, den, out=est, where=den > 0)
    if zero_cols.any():
        zn = zero.sum(axis=0)
        zs = np.where(zero, vsel, 0.0).sum(axis=0)
        est = np.where(zero_cols, zs / np.maximum(zn, 1), est)

    if not np.isfinite(est[has]).all():
        raise ConsistencyError("non-finite estimate produced")
    lo = np.where(valid, vsel, np.inf).min(axis=0)[has]
    hi = np.where(valid, vsel, -np.inf).max(axis=0)[has]
    est_h = est[has]
    tol = _CONVEXITY_RTOL * (hi - lo + 1.0)
    if ((est_h < lo - tol) | (est_h > hi + tol)).any():
        raise ConsistencyError("estimate outside neighbor value range")
    est[has] = np.minimum(np.maximum(est_h, lo), hi)
    return est, has


def interpolate_ipdw(points: PointSet, cost: CostSurface, config: InterpConfig, *,
                     snap_radius: int = DEFAULT_SNAP_RADIUS, threads: int = 1,
                     nodata: float = DEFAULT_NODATA) -> RasterGrid:
    """Interpolate over water cells using in-water path distances.

    Source-target pairs flagged unreachable (separated by land) are excluded
    before the neighborhood filter. Land and nodata cells, and water cells
    with no reachable source, come back as nodata.
    """
    cells, values = snapped_sources(points, cost=cost, snap_radius=snap_radius)
    fields = fields_for_cells(cost, cells, threads=threads)
    geom = cost.geometry
    water_flat = np.flatnonzero(cost.is_water.ravel())

    dist = np.empty((len(fields), len(water_flat)))
    for i, field in enumerate(fields):
        d = field.distances.values.ravel()[water_flat]
        ok = field.reachable.ravel()[water_flat]
        dist[i] = np.where(ok, d, np.inf)

    est, has = _estimate_columns(dist, values, config)
    out = np.full(geom.n_cells, nodata)
    out[water_flat[has]] = est[has]
    return RasterGrid(geom, out.reshape(geom.nrows, geom.ncols), nodata)


def interpolate_idw(points: PointSet, geometry: GridGeometry, config: InterpConfig, *,
                    mask: CostSurface | None = None,
                    snap_radius: int = DEFAULT_SNAP_RADIUS,
                    nodata: float = DEFAULT_NODATA) -> RasterGrid:
    """Interpolate using straight-line distances that ignore barriers.

    A mask only limits where measurements snap and which cells receive
    output (land and nodata become nodata); it never alters distances.
    """
    if mask is not None:
        if mask.geometry != geometry:
            raise ValueError("mask geometry differs from the requested output geometry")
        cells, values = snapped_sources(points, cost=mask, snap_radius=snap_radius)
        target_flat = np.flatnonzero(mask.is_water.ravel())
    else:
        cells, values = snapped_sources(points, geometry=geometry, snap_radius=snap_radius)
        target_flat = np.arange(geometry.n_cells)

    centers = np.array([geometry.center_of(r, c) for r, c in cells])
    cx, cy = geometry.cell_centers()
    tx = cx.ravel()[target_flat]
    ty = cy.ravel()[target_flat]
    dist = np.hypot(tx[None, :] - centers[:, 0][:, None],
                    ty[None, :] - centers[:, 1][:, None])

    est, has = _estimate_columns(dist, values, config)
    out = np.full(geometry.n_cells, nodata)
    out[target_flat[has]] = est[has]
    return RasterGrid(geometry, out.reshape(geometry.nrows, geometry.ncols), nodata)
