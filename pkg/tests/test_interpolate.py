import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from pathidw import (
    CostSurface,
    GridGeometry,
    InterpConfig,
    PointSet,
    RasterGrid,
    idw_estimate,
    interpolate_idw,
    interpolate_ipdw,
    snapped_sources,
)
from pathidw.interpolate import _estimate_columns


def surface(values, cellsize=60.0):
    values = np.asarray(values, dtype=float)
    nrows, ncols = values.shape
    geom = GridGeometry(ncols=ncols, nrows=nrows, xll=0.0, yll=0.0, cellsize=cellsize)
    return CostSurface(RasterGrid(geom, values, -9999.0))


def points(xyv):
    arr = np.asarray(xyv, dtype=float)
    return PointSet(x=arr[:, 0], y=arr[:, 1], values=arr[:, 2])


def finite_floats(lo, hi):
    return st.floats(lo, hi, allow_nan=False, allow_infinity=False)


class TestInterpConfig:
    def test_defaults(self):
        config = InterpConfig()
        assert config.power == 2.0
        assert config.n_nearest == 10
        assert config.max_distance is None
        assert config.mode == "nearest"

    def test_single_mode_enforced(self):
        with pytest.raises(ValueError):
            InterpConfig(n_nearest=5, max_distance=100.0)

    def test_mode_constructors(self):
        assert InterpConfig.nearest(3).mode == "nearest"
        assert InterpConfig.within(500.0).mode == "within"
        assert InterpConfig.all_points().mode == "all"

    def test_validation(self):
        with pytest.raises(ValueError):
            InterpConfig(power=0.0)
        with pytest.raises(ValueError):
            InterpConfig(power=-1.0)
        with pytest.raises(ValueError):
            InterpConfig.nearest(0)
        with pytest.raises(ValueError):
            InterpConfig.within(0.0)

    def test_frozen(self):
        config = InterpConfig()
        with pytest.raises(dataclasses.FrozenInstanceError):
            config.power = 3.0

    def test_one_config_drives_both_interpolators(self):
        # Power and neighborhood settings live in the shared config, so the
        # two methods cannot silently diverge.
        config = InterpConfig.nearest(2, power=3.0)
        cost = surface(np.ones((3, 3)))
        pts = points([[30, 30, 1.0], [150, 150, 5.0], [150, 30, 3.0]])
        a = interpolate_ipdw(pts, cost, config)
        b = interpolate_idw(pts, cost.geometry, config, mask=cost)
        assert a.geometry == b.geometry
        assert np.isfinite(a.values).all() and np.isfinite(b.values).all()


class TestIdwEstimate:
    def test_two_point_example(self):
        pred = idw_estimate([(1.0, 0.0), (2.0, 3.0)], InterpConfig.all_points(power=2.0))
        assert pred.value == 0.6
        assert pred.n_neighbors_used == 2
        assert pred.min_neighbor_distance == 1.0

    def test_equal_distances_give_plain_mean(self):
        pred = idw_estimate([(5.0, 1.0), (5.0, 3.0)], InterpConfig.all_points())
        assert pred.value == 2.0

    def test_zero_distance_returns_that_value(self):
        pred = idw_estimate([(0.0, 7.0), (3.0, 1.0)], InterpConfig.all_points())
        assert pred.value == 7.0
        assert pred.min_neighbor_distance == 0.0

    def test_coincident_zero_neighbors_average(self):
        pred = idw_estimate([(0.0, 4.0), (0.0, 8.0), (2.0, 0.0)], InterpConfig.all_points())
        assert pred.value == 6.0
        assert pred.n_neighbors_used == 2

    def test_zero_distance_with_exactness_disabled_is_an_error(self):
        config = InterpConfig.all_points(exact_at_zero=False)
        with pytest.raises(ValueError):
            idw_estimate([(0.0, 7.0)], config)

    def test_empty_neighborhood_returns_none(self):
        assert idw_estimate([], InterpConfig.all_points()) is None
        assert idw_estimate([(10.0, 1.0)], InterpConfig.within(5.0)) is None

    def test_max_distance_is_inclusive(self):
        pred = idw_estimate([(5.0, 1.0), (6.0, 99.0)], InterpConfig.within(5.0))
        assert pred.value == 1.0
        assert pred.n_neighbors_used == 1

    def test_nearest_tie_keeps_input_order(self):
        pred = idw_estimate([(1.0, 10.0), (1.0, 20.0), (2.0, 30.0)], InterpConfig.nearest(1))
        assert pred.value == 10.0

    def test_nearest_uses_n_smallest(self):
        pred = idw_estimate(
            [(4.0, 100.0), (1.0, 1.0), (2.0, 2.0)], InterpConfig.nearest(2, power=1.0)
        )
        direct = oracles.shepard_direct(
            [(4.0, 100.0), (1.0, 1.0), (2.0, 2.0)], 1.0, n_nearest=2
        )
        assert pred.value == pytest.approx(direct, rel=1e-12)
        assert pred.n_neighbors_used == 2

    def test_negative_distance_rejected(self):
        with pytest.raises(ValueError):
            idw_estimate([(-1.0, 0.0)], InterpConfig.all_points())

    @given(
        pairs=st.lists(
            st.tuples(finite_floats(1e-3, 1e4), finite_floats(-1e6, 1e6)),
            min_size=1,
            max_size=12,
        ),
        power=finite_floats(0.25, 6.0),
    )
    def test_matches_direct_evaluation(self, pairs, power):
        pred = idw_estimate(pairs, InterpConfig.all_points(power=power))
        direct = oracles.shepard_direct(pairs, power)
        assert pred.value == pytest.approx(direct, rel=1e-12, abs=1e-9)

    @given(
        pairs=st.lists(
            st.tuples(finite_floats(0.0, 1e4), finite_floats(-1e6, 1e6)),
            min_size=1,
            max_size=12,
        ),
        power=finite_floats(0.25, 6.0),
    )
    def test_estimate_is_a_convex_combination(self, pairs, power):
        pred = idw_estimate(pairs, InterpConfig.all_points(power=power))
        values = [v for _, v in pairs]
        assert min(values) <= pred.value <= max(values)

    @given(
        pairs=st.lists(
            st.tuples(finite_floats(1e-3, 1e4), finite_floats(-1e3, 1e3)),
            min_size=1,
            max_size=10,
        ),
        scale=finite_floats(0.1, 50.0),
        shift=finite_floats(-1e3, 1e3),
    )
    def test_affine_equivariance_in_values(self, pairs, scale, shift):
        config = InterpConfig.all_points()
        base = idw_estimate(pairs, config).value
        mapped = idw_estimate([(d, scale * v + shift) for d, v in pairs], config).value
        assert mapped == pytest.approx(scale * base + shift, rel=1e-9, abs=1e-6)


class TestSnappedSources:
    def test_coincident_points_average(self):
        cost = surface(np.ones((2, 2)))
        pts = points([[30, 30, 2.0], [40, 40, 4.0], [90, 90, 9.0]])
        cells, values = snapped_sources(pts, cost=cost)
        assert cells == [(1, 0), (0, 1)]
        assert np.array_equal(values, [3.0, 9.0])

    def test_empty_points_rejected(self):
        cost = surface(np.ones((2, 2)))
        empty = PointSet(x=np.empty(0), y=np.empty(0), values=np.empty(0))
        with pytest.raises(ValueError):
            snapped_sources(empty, cost=cost)

    def test_geometry_only_mode(self):
        geom = GridGeometry(ncols=2, nrows=2, xll=0.0, yll=0.0, cellsize=60.0)
        cells, values = snapped_sources(points([[30, 30, 1.0]]), geometry=geom)
        assert cells == [(1, 0)]
        assert values[0] == 1.0


class TestInterpolateIpdw:
    def test_single_point_fills_connected_water(self):
        cost = surface(np.ones((4, 4)))
        out = interpolate_ipdw(points([[30, 30, 5.0]]), cost, InterpConfig.all_points())
        assert np.all(out.values == 5.0)

    def test_exact_at_measurement_cell(self):
        cost = surface(np.ones((4, 4)))
        out = interpolate_ipdw(
            points([[30, 30, 5.0], [210, 210, 9.0]]), cost, InterpConfig.all_points()
        )
        assert out.values[3, 0] == 5.0
        assert out.values[0, 3] == 9.0

    def test_sealed_basins_stay_separate(self):
        vals = np.ones((3, 5))
        vals[:, 2] = 10000.0
        cost = surface(vals)
        pts = points([[30, 90, 0.0], [270, 90, 10.0]])
        out = interpolate_ipdw(pts, cost, InterpConfig.all_points())
        assert np.all(out.values[:, :2] == 0.0)
        assert np.all(out.values[:, 3:] == 10.0)
        assert np.all(out.values[:, 2] == -9999.0)

    def test_land_and_nodata_cells_get_nodata(self):
        vals = np.ones((3, 3))
        vals[1, 1] = 10000.0
        vals[0, 2] = -9999.0
        cost = surface(vals)
        out = interpolate_ipdw(points([[30, 30, 1.0]]), cost, InterpConfig.all_points())
        assert out.values[1, 1] == -9999.0
        assert out.values[0, 2] == -9999.0
        assert out.values[2, 0] == 1.0

    def test_unreached_basin_gets_nodata(self):
        vals = np.ones((3, 5))
        vals[:, 2] = 10000.0
        cost = surface(vals)
        out = interpolate_ipdw(points([[30, 90, 4.0]]), cost, InterpConfig.all_points())
        assert np.all(out.values[:, :2] == 4.0)
        assert np.all(out.values[:, 3:] == -9999.0)

    def test_coincident_sources_equal_single_mean_source(self):
        cost = surface(np.ones((4, 4)))
        config = InterpConfig.all_points()
        paired = interpolate_ipdw(
            points([[30, 30, 2.0], [35, 35, 4.0], [210, 90, 7.0]]), cost, config
        )
        merged = interpolate_ipdw(
            points([[30, 30, 3.0], [210, 90, 7.0]]), cost, config
        )
        assert np.array_equal(paired.values, merged.values)

    def test_nearest_one_labels_path_voronoi(self):
        vals = np.ones((5, 5))
        vals[1:, 2] = 10000.0
        cost = surface(vals)
        pts = points([[30, 90, 1.0], [270, 90, 2.0]])
        out = interpolate_ipdw(pts, cost, InterpConfig.nearest(1))
        # Every predicted water cell carries exactly one source value, the
        # one closer by path distance according to the oracle.
        geom = cost.geometry
        matrix = oracles.relax_distance_matrix(vals, -9999.0, 1.0, geom.cellsize)
        sources = [(1, 0), (1, 4)]
        flat = [r * 5 + c for r, c in sources]
        for r in range(5):
            for c in range(5):
                if not cost.is_water[r, c]:
                    continue
                target = r * 5 + c
                dists = [matrix[f, target] for f in flat]
                best = min(range(2), key=lambda i: (dists[i], i))
                assert out.values[r, c] == pts.values[best]

    def test_threads_do_not_change_output(self):
        vals = np.ones((6, 6))
        vals[2, 1:5] = 10000.0
        cost = surface(vals)
        pts = points([[30, 30, 1.0], [330, 330, 5.0], [30, 330, 3.0]])
        a = interpolate_ipdw(pts, cost, InterpConfig.all_points(), threads=1)
        b = interpolate_ipdw(pts, cost, InterpConfig.all_points(), threads=4)
        assert np.array_equal(a.values, b.values)


class TestInterpolateIdw:
    def test_single_point_fills_grid(self):
        geom = GridGeometry(ncols=3, nrows=3, xll=0.0, yll=0.0, cellsize=60.0)
        out = interpolate_idw(points([[30, 30, 5.0]]), geom, InterpConfig.all_points())
        assert np.all(out.values == 5.0)

    def test_straight_line_ignores_barrier(self):
        vals = np.ones((3, 5))
        vals[:, 2] = 10000.0
        cost = surface(vals)
        pts = points([[30, 90, 0.0], [270, 90, 10.0]])
        config = InterpConfig.all_points()
        euclid = interpolate_idw(pts, cost.geometry, config, mask=cost)
        path = interpolate_ipdw(pts, cost, config)
        # Cell (1, 1) is 60 m from the near source and 180 m from the one
        # across the wall, so straight-line weighting pulls it to 1.0 while
        # path weighting keeps the wall sealed.
        assert euclid.values[1, 1] == pytest.approx(1.0, rel=1e-12)
        assert path.values[1, 1] == 0.0

    def test_agrees_with_hand_computation(self):
        geom = GridGeometry(ncols=3, nrows=1, xll=0.0, yll=0.0, cellsize=60.0)
        pts = points([[30, 30, 0.0], [150, 30, 9.0]])
        out = interpolate_idw(pts, geom, InterpConfig.all_points(power=2.0))
        # Middle cell: 60 m from both sources.
        assert out.values[0, 1] == 4.5
        assert out.values[0, 0] == 0.0
        assert out.values[0, 2] == 9.0

    def test_mask_restricts_output_not_distances(self):
        vals = np.ones((3, 5))
        vals[:, 2] = 10000.0
        cost = surface(vals)
        pts = points([[30, 90, 0.0], [270, 90, 10.0]])
        config = InterpConfig.all_points()
        masked = interpolate_idw(pts, cost.geometry, config, mask=cost)
        unmasked = interpolate_idw(pts, cost.geometry, config)
        water = cost.is_water
        assert np.array_equal(masked.values[water], unmasked.values[water])
        assert np.all(masked.values[~water] == -9999.0)
        assert np.isfinite(unmasked.values[~water]).all()

    def test_mask_geometry_must_match(self):
        cost = surface(np.ones((2, 2)))
        other = GridGeometry(ncols=2, nrows=2, xll=5.0, yll=0.0, cellsize=60.0)
        with pytest.raises(ValueError):
            interpolate_idw(points([[30, 30, 1.0]]), other, InterpConfig.all_points(), mask=cost)

    def test_never_undershoots_path_distance(self):
        # On open water both methods see the same snapped sources; straight
        # lines can only be shorter or equal, so with one source the two
        # methods agree exactly and the octile stretch bounds the ratio.
        cost = surface(np.ones((6, 6)))
        pts = points([[30, 30, 3.0]])
        config = InterpConfig.all_points()
        a = interpolate_ipdw(pts, cost, config)
        b = interpolate_idw(pts, cost.geometry, config, mask=cost)
        assert np.array_equal(a.values, b.values)


class TestEstimateColumns:
    @given(data=st.data())
    def test_matches_scalar_estimator(self, data):
        k = data.draw(st.integers(1, 6))
        nt = data.draw(st.integers(1, 5))
        rng = np.random.default_rng(data.draw(st.integers(0, 10**6)))
        dist = rng.uniform(0.5, 100.0, size=(k, nt))
        dist[rng.random((k, nt)) < 0.2] = np.inf
        values = rng.uniform(-50.0, 50.0, size=k)
        mode = data.draw(st.sampled_from(["all", "nearest", "within"]))
        if mode == "nearest":
            config = InterpConfig.nearest(data.draw(st.integers(1, 6)))
        elif mode == "within":
            config = InterpConfig.within(float(rng.uniform(1.0, 120.0)))
        else:
            config = InterpConfig.all_points()
        est, has = _estimate_columns(dist.copy(), values, config)
        for t in range(nt):
            pairs = [(dist[i, t], values[i]) for i in range(k) if np.isfinite(dist[i, t])]
            pred = idw_estimate(pairs, config)
            if pred is None:
                assert not has[t]
            else:
                assert has[t]
                assert est[t] == pytest.approx(pred.value, rel=1e-12, abs=1e-12)

    def test_zero_distance_column(self):
        dist = np.array([[0.0, 3.0], [1.0, 4.0]])
        values = np.array([6.0, 10.0])
        est, has = _estimate_columns(dist, values, InterpConfig.all_points())
        assert has.all()
        assert est[0] == 6.0

    def test_all_excluded_column(self):
        dist = np.array([[np.inf], [np.inf]])
        est, has = _estimate_columns(dist, np.array([1.0, 2.0]), InterpConfig.all_points())
        assert not has[0]


class TestTranslationEquivariance:
    @given(
        dx=st.integers(-50, 50),
        dy=st.integers(-50, 50),
    )
    def test_shifting_everything_shifts_nothing(self, dx, dy):
        # Whole-cell translations of grid and points leave both methods'
        # outputs bit-identical.
        cs = 60.0
        vals = np.ones((4, 4))
        vals[1, 2] = 10000.0
        base_pts = [[30.0, 30.0, 2.0], [210.0, 150.0, 8.0]]
        config = InterpConfig.all_points()

        def run(ox, oy):
            geom = GridGeometry(ncols=4, nrows=4, xll=ox, yll=oy, cellsize=cs)
            cost = CostSurface(RasterGrid(geom, vals, -9999.0))
            pts = points([[x + ox, y + oy, v] for x, y, v in base_pts])
            return (
                interpolate_ipdw(pts, cost, config).values,
                interpolate_idw(pts, geom, config, mask=cost).values,
            )

        a_path, a_euclid = run(0.0, 0.0)
        b_path, b_euclid = run(dx * cs, dy * cs)
        assert np.array_equal(a_path, b_path)
        assert np.array_equal(a_euclid, b_euclid)
