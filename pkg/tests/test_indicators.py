"""Tests for hypervolume and trace aggregation."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paretofolio.errors import DegenerateBounds, MismatchedLengths
from paretofolio.evolve import OptimizerRun
from paretofolio.indicators import (
    aggregate_traces,
    front_bounds,
    hypervolume_2d,
    normalize_front,
)

REF = np.array([1.1, 1.1])


def mc_hypervolume(front, ref, n=1_000_000, seed=0):
    """Independent Monte Carlo oracle for the dominated area."""
    rng = np.random.Generator(np.random.PCG64(seed))
    samples = rng.uniform(0.0, ref, size=(n, 2))
    pts = np.atleast_2d(front)
    dominated = np.zeros(n, dtype=bool)
    for p in pts:
        dominated |= np.all(samples >= p, axis=1)
    return ref[0] * ref[1] * dominated.mean()


class TestHypervolumeAnalytic:
    def test_empty_front(self):
        assert hypervolume_2d(np.zeros((0, 2)), REF) == 0.0

    def test_single_point_rectangle(self):
        assert hypervolume_2d(np.array([[0.1, 0.1]]), REF) == pytest.approx(1.0)

    def test_origin_against_unit_reference(self):
        assert hypervolume_2d(np.array([[0.0, 0.0]]), (1.0, 1.0)) == pytest.approx(1.0)

    def test_two_point_staircase(self):
        # rectangles [0, .5]x[.5, 1] + [.5, 1]x[0, 1] against ref (1,1)
        front = np.array([[0.0, 0.5], [0.5, 0.0]])
        assert hypervolume_2d(front, (1.0, 1.0)) == pytest.approx(0.75)

    def test_dominated_point_contributes_nothing(self):
        a = hypervolume_2d(np.array([[0.2, 0.2]]), REF)
        b = hypervolume_2d(np.array([[0.2, 0.2], [0.5, 0.5]]), REF)
        assert a == pytest.approx(b)

    def test_points_beyond_reference_are_excluded(self):
        front = np.array([[0.2, 0.2], [2.0, 0.0], [0.0, 1.1]])
        only = hypervolume_2d(np.array([[0.2, 0.2]]), REF)
        assert hypervolume_2d(front, REF) == pytest.approx(only)

    def test_matches_monte_carlo_on_random_fronts(self):
        rng = np.random.Generator(np.random.PCG64(3))
        for k in range(10):
            front = rng.uniform(0, 1, size=(int(rng.integers(1, 12)), 2))
            exact = hypervolume_2d(front, REF)
            approx = mc_hypervolume(front, REF, n=200_000, seed=k)
            assert exact == pytest.approx(approx, abs=0.005)


class TestHypervolumeProperties:
    @given(
        st.lists(
            st.tuples(st.floats(0, 1), st.floats(0, 1)),
            min_size=1,
            max_size=15,
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_permutation_invariant(self, raw):
        front = np.array(raw)
        rng = np.random.Generator(np.random.PCG64(0))
        shuffled = front[rng.permutation(len(front))]
        assert hypervolume_2d(front, REF) == pytest.approx(hypervolume_2d(shuffled, REF))

    @given(
        st.lists(
            st.tuples(st.floats(0, 1), st.floats(0, 1)),
            min_size=2,
            max_size=15,
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_monotone_in_added_points(self, raw):
        front = np.array(raw)
        assert hypervolume_2d(front, REF) >= hypervolume_2d(front[:-1], REF) - 1e-12

    @given(
        st.lists(
            st.tuples(st.floats(0, 1), st.floats(0, 1)),
            min_size=1,
            max_size=15,
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_bounded_by_reference_box(self, raw):
        hv = hypervolume_2d(np.array(raw), REF)
        assert 0.0 <= hv <= REF[0] * REF[1] + 1e-12


class TestFrontBounds:
    def test_ideal_and_nadir(self):
        ideal, nadir = front_bounds(np.array([[1.0, 4.0], [3.0, 2.0]]))
        assert np.array_equal(ideal, [1.0, 2.0])
        assert np.array_equal(nadir, [3.0, 4.0])

    def test_degenerate_axis_gets_unit_span(self):
        ideal, nadir = front_bounds(np.array([[2.0, 5.0], [4.0, 5.0]]))
        assert nadir[1] == 6.0  # 5.0 + 1.0


class TestNormalizeFront:
    def test_maps_bounds_to_unit_box(self):
        bounds = (np.array([1.0, 2.0]), np.array([3.0, 4.0]))
        norm, clipped = normalize_front(np.array([[1.0, 2.0], [3.0, 4.0]]), bounds)
        assert np.allclose(norm, [[0.0, 0.0], [1.0, 1.0]])
        assert not clipped.any()

    def test_out_of_range_points_are_clipped_and_flagged(self):
        bounds = (np.zeros(2), np.ones(2))
        norm, clipped = normalize_front(np.array([[0.5, 0.5], [2.0, -1.0]]), bounds)
        assert np.allclose(norm[1], [1.0, 0.0])
        assert clipped.tolist() == [False, True]

    def test_rejects_degenerate_bounds(self):
        with pytest.raises(DegenerateBounds):
            normalize_front(np.zeros((1, 2)), (np.zeros(2), np.zeros(2)))


class TestAggregateTraces:
    def _run(self, trace, wall=1.0):
        r = OptimizerRun(algorithm="nsga2", seed=0)
        r.hv_trace = np.asarray(trace, dtype=float)
        r.wall_time_seconds = wall
        return r

    def test_mean_and_sample_std(self):
        runs = [self._run([0.2, 0.4], 1.0), self._run([0.4, 0.8], 3.0)]
        summary = aggregate_traces(runs)
        assert np.allclose(summary.mean_hv, [0.3, 0.6])
        assert np.allclose(summary.std_hv, np.std([[0.2, 0.4], [0.4, 0.8]], axis=0, ddof=1))
        assert summary.mean_wall_time == pytest.approx(2.0)

    def test_single_run_has_zero_std(self):
        summary = aggregate_traces([self._run([0.5, 0.7])])
        assert np.array_equal(summary.std_hv, [0.0, 0.0])

    def test_mismatched_lengths_raise(self):
        with pytest.raises(MismatchedLengths):
            aggregate_traces([self._run([0.1]), self._run([0.1, 0.2])])
        with pytest.raises(MismatchedLengths):
            aggregate_traces([])
