"""Contracts for the derivative-free minimizers."""

import numpy as np
import pytest

from entrobell.optim import (
    ObjectiveSpec,
    OptimOptions,
    nelder_mead,
    restart_points,
    simulated_annealing,
    twofold_search,
)

BOWL = ObjectiveSpec(2, lambda x: float(x @ x))
ROSENBROCK = ObjectiveSpec(
    2, lambda x: float((1.0 - x[0]) ** 2 + 100.0 * (x[1] - x[0] ** 2) ** 2)
)


class TestObjectiveSpec:
    def test_dimension_must_be_positive(self):
        with pytest.raises(ValueError):
            ObjectiveSpec(0, lambda x: 0.0)

    def test_bounds_length_must_match(self):
        with pytest.raises(ValueError):
            ObjectiveSpec(2, lambda x: 0.0, bounds=((0.0, 1.0),))

    def test_bounds_must_be_ordered(self):
        with pytest.raises(ValueError):
            ObjectiveSpec(1, lambda x: 0.0, bounds=((1.0, 1.0),))

    def test_periodic_length_must_match(self):
        with pytest.raises(ValueError):
            ObjectiveSpec(2, lambda x: 0.0, periodic=(True,))

    def test_canonical_wraps_periodic_coordinates(self):
        spec = ObjectiveSpec(2, lambda x: 0.0, periodic=(True, False))
        folded = spec.canonical(np.array([2.0 * np.pi + 0.25, 9.0]))
        assert abs(folded[0] - 0.25) < 1e-12
        assert folded[1] == 9.0

    def test_canonical_clips_bounded_coordinates(self):
        spec = ObjectiveSpec(1, lambda x: 0.0, bounds=((-1.0, 2.0),))
        assert spec.canonical(np.array([5.0]))[0] == 2.0
        assert spec.canonical(np.array([-3.0]))[0] == -1.0

    def test_angle_wrap_gives_identical_values(self):
        spec = ObjectiveSpec(1, lambda x: float(np.cos(x[0])), periodic=(True,))
        for theta in (0.3, 1.7, 4.0):
            direct = spec.value(np.array([theta]))
            wrapped = spec.value(np.array([theta + 2.0 * np.pi]))
            assert abs(direct - wrapped) < 1e-12  # equal up to the fold's rounding

    def test_seed_box_prefers_bounds_then_period(self):
        spec = ObjectiveSpec(
            3, lambda x: 0.0, bounds=((0.0, 1.0), (0.0, 3.0), (-2.0, 2.0)), periodic=None
        )
        assert spec.seed_box() == ((0.0, 1.0), (0.0, 3.0), (-2.0, 2.0))
        spec = ObjectiveSpec(2, lambda x: 0.0, periodic=(True, False))
        box = spec.seed_box()
        assert box[0] == (0.0, 2.0 * np.pi)
        assert box[1] == (-1.0, 1.0)


class TestOptimOptions:
    def test_rejects_bad_cooling_factor(self):
        with pytest.raises(ValueError):
            OptimOptions(cooling_factor=1.0)
        with pytest.raises(ValueError):
            OptimOptions(cooling_factor=0.0)

    def test_rejects_nonpositive_budgets(self):
        with pytest.raises(ValueError):
            OptimOptions(restarts=0)
        with pytest.raises(ValueError):
            OptimOptions(max_evals=0)
        with pytest.raises(ValueError):
            OptimOptions(tolerance=0.0)


class TestNelderMead:
    def test_convex_bowl(self):
        result = nelder_mead(BOWL, np.array([1.0, 1.0]))
        assert result.value < 1e-8
        assert not result.exhausted

    def test_rosenbrock_valley(self):
        result = nelder_mead(ROSENBROCK, np.array([-1.2, 1.0]))
        assert result.value <= 1e-6
        assert np.max(np.abs(result.point - 1.0)) < 1e-3

    def test_periodic_cosine(self):
        spec = ObjectiveSpec(1, lambda x: float(np.cos(x[0])), periodic=(True,))
        result = nelder_mead(spec, np.array([1.0]))
        assert abs(result.point[0] - np.pi) < 1e-6

    def test_never_worse_than_start(self):
        start = np.array([0.3, -2.0])
        result = nelder_mead(ROSENBROCK, start)
        assert result.value <= ROSENBROCK.value(start)

    def test_history_is_monotone(self):
        result = nelder_mead(ROSENBROCK, np.array([-1.2, 1.0]))
        assert np.all(np.diff(result.history) <= 0.0)

    def test_budget_exhaustion_flag(self):
        result = nelder_mead(ROSENBROCK, np.array([-1.2, 1.0]), OptimOptions(max_evals=20))
        assert result.exhausted
        assert result.value <= ROSENBROCK.value(np.array([-1.2, 1.0]))
        result = nelder_mead(BOWL, np.array([1.0, 1.0]), OptimOptions(max_evals=4000))
        assert not result.exhausted

    def test_start_shape_checked(self):
        with pytest.raises(ValueError):
            nelder_mead(BOWL, np.array([1.0, 2.0, 3.0]))

    def test_deterministic(self):
        a = nelder_mead(ROSENBROCK, np.array([-1.2, 1.0]))
        b = nelder_mead(ROSENBROCK, np.array([-1.2, 1.0]))
        assert np.array_equal(a.point, b.point)
        assert a.value == b.value
        assert np.array_equal(a.history, b.history)


class TestSimulatedAnnealing:
    def test_convex_bowl(self):
        result = simulated_annealing(BOWL, np.array([1.0, 1.0]), OptimOptions(seed=42))
        assert result.value <= 1e-4

    def test_multiwell_matches_grid_scan(self):
        spec = ObjectiveSpec(
            1,
            lambda x: float(np.sin(3.0 * x[0]) + 0.1 * x[0]),
            bounds=((0.0, 2.0 * np.pi),),
        )
        result = simulated_annealing(spec, np.array([np.pi]), OptimOptions(seed=3))
        grid = np.linspace(0.0, 2.0 * np.pi, 10_001)
        grid_min = float(np.min(np.sin(3.0 * grid) + 0.1 * grid))
        assert abs(result.value - grid_min) <= 1e-3

    def test_never_worse_than_start(self):
        start = np.array([0.9, 0.4])
        result = simulated_annealing(BOWL, start, OptimOptions(seed=11))
        assert result.value <= BOWL.value(start) + 1e-12

    def test_fixed_seed_is_bit_identical(self):
        a = simulated_annealing(BOWL, np.array([1.0, 1.0]), OptimOptions(seed=5))
        b = simulated_annealing(BOWL, np.array([1.0, 1.0]), OptimOptions(seed=5))
        assert np.array_equal(a.point, b.point)
        assert a.value == b.value
        assert np.array_equal(a.history, b.history)

    def test_different_seeds_differ(self):
        a = simulated_annealing(BOWL, np.array([1.0, 1.0]), OptimOptions(seed=5))
        b = simulated_annealing(BOWL, np.array([1.0, 1.0]), OptimOptions(seed=6))
        assert not np.array_equal(a.history, b.history)

    def test_history_is_monotone(self):
        result = simulated_annealing(BOWL, np.array([1.0, 1.0]), OptimOptions(seed=9))
        assert np.all(np.diff(result.history) <= 0.0)


class TestRestartPoints:
    def test_perfect_square_gives_grid(self):
        spec = ObjectiveSpec(2, lambda x: 0.0, bounds=((0.0, np.pi), (0.0, 2.0 * np.pi)))
        points = restart_points(spec, 16)
        assert len(points) == 16
        alphas = sorted({round(p[0], 12) for p in points})
        betas = sorted({round(p[1], 12) for p in points})
        assert len(alphas) == 4 and len(betas) == 4
        assert abs(alphas[0] - np.pi / 8.0) < 1e-12
        assert abs(betas[0] - np.pi / 4.0) < 1e-12

    def test_non_power_count_is_low_discrepancy(self):
        spec = ObjectiveSpec(3, lambda x: 0.0, bounds=((0.0, 1.0),) * 3)
        points = restart_points(spec, 32)
        assert len(points) == 32
        stacked = np.array(points)
        assert np.all(stacked >= 0.0) and np.all(stacked <= 1.0)
        assert len({tuple(np.round(p, 12)) for p in points}) == 32

    def test_single_restart_is_center(self):
        spec = ObjectiveSpec(2, lambda x: 0.0, bounds=((0.0, 2.0), (0.0, 4.0)))
        (point,) = restart_points(spec, 1)
        assert np.allclose(point, [1.0, 2.0])


class TestTwofoldSearch:
    def test_convex_agreement(self):
        result = twofold_search(BOWL, OptimOptions(restarts=4, seed=2))
        assert result.agreement <= 1e-8
        assert result.value <= 1e-8
        assert result.evaluations == result.amoeba.evaluations + result.annealing.evaluations

    def test_finds_global_well_among_many(self):
        spec = ObjectiveSpec(
            1, lambda x: float(np.sin(3.0 * x[0]) + 0.1 * x[0]), periodic=(True,)
        )
        result = twofold_search(spec, OptimOptions(restarts=8, seed=4))
        grid = np.linspace(0.0, 2.0 * np.pi, 100_001)
        grid_min = float(np.min(np.sin(3.0 * grid) + 0.1 * grid))
        assert result.value <= grid_min + 1e-6
        assert result.agreement <= 1e-6

    def test_repeat_calls_identical(self):
        a = twofold_search(ROSENBROCK, OptimOptions(restarts=4, seed=8))
        b = twofold_search(ROSENBROCK, OptimOptions(restarts=4, seed=8))
        assert a.value == b.value
        assert np.array_equal(a.point, b.point)
        assert a.agreement == b.agreement
