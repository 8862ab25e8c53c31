import numpy as np
import pytest
from pydantic import ValidationError

from aniso_levy.core.errors import InputError, RegimeError
from aniso_levy.numerics.levy_models import LevyModel
from aniso_levy.numerics.sampling import RngStream, sample_increments
from aniso_levy.numerics.sde import (CoefficientSpec, SdeProblem, check_holder, couple_one_step,
                                     drift_correction, frozen_ode, one_step_ge1, one_step_lt1, simulate_endpoint,
                                     simulate_path, snap_epsilon, stochastic_integral)

from conftest import constant, identity_problem, mean_reverting_problem


class TestCoefficients:
    def test_declared_exponent_cannot_exceed_family(self):
        with pytest.raises(ValidationError):
            CoefficientSpec(family="holder_bump", declared_exponent=0.8, exponent=0.5)

    def test_affine_clamped(self):
        spec = CoefficientSpec(family="affine_clamped", declared_exponent=1.0, c0=0.5, c1=2.0, clamp=1.0, axis=1)
        x = np.array([[9.0, -2.0], [9.0, 0.0], [9.0, 3.0]])
        np.testing.assert_allclose(spec.evaluate(x), [-1.0, 0.5, 1.0])
        assert spec.bound == 1.0

    def test_holder_bump_constant(self):
        spec = CoefficientSpec(family="holder_bump", declared_exponent=0.5, exponent=0.5, cap=1.0)
        assert check_holder(spec) <= 1.0 + 1e-9
        assert check_holder(spec, exponent=1.0) > 10.0

    def test_axis_out_of_range(self):
        spec = CoefficientSpec(family="affine_clamped", declared_exponent=1.0, c1=1.0, axis=3)
        with pytest.raises(InputError):
            spec.evaluate(np.zeros((2, 2)))


class TestProblem:
    def test_general_needs_matrix(self, stable_2d):
        with pytest.raises(ValidationError):
            SdeProblem(dimension=2, model=stable_2d, x0=(0.0, 0.0), drift=(constant(0.0),) * 2,
                       diffusion=(constant(1.0, 0.5),) * 2)

    def test_gamma_delta_pair(self, stable_1d):
        with pytest.raises(ValidationError):
            identity_problem(stable_1d, gamma=1.6)

    def test_diagonal_sigma(self, stable_2d):
        problem = SdeProblem(dimension=2, model=stable_2d, x0=(0.0, 0.0), drift=(constant(0.0),) * 2,
                             diffusion=(constant(2.0, 0.5), constant(3.0, 0.5)), structure="diagonal",
                             gammas=(1.6, 1.6), deltas=(1.4, 1.4))
        out = problem.apply_diffusion(np.zeros((1, 2)), np.array([[1.0, 1.0]]))
        np.testing.assert_allclose(out, [[2.0, 3.0]])
        assert problem.chis == (0.5, 0.5)

    def test_exponent_views(self, stable_2d):
        problem = mean_reverting_problem(stable_2d)
        assert problem.beta == 1.0
        assert problem.chi == 0.9
        assert not problem.is_constant()
        assert identity_problem(stable_2d).has_zero_drift()


class TestSimulation:
    def test_endpoint_is_reproducible(self, stable_2d):
        problem = mean_reverting_problem(stable_2d)
        a = simulate_endpoint(problem, 1.0, 16, RngStream(3), replicas=10)
        b = simulate_endpoint(problem, 1.0, 16, RngStream(3), replicas=10)
        assert a.shape == (10, 2)
        np.testing.assert_array_equal(a, b)

    def test_constant_problem_is_scaled_noise(self, stable_1d):
        problem = identity_problem(stable_1d, drift=0.5, scale=2.0)
        x = simulate_endpoint(problem, 1.0, 4, RngStream(4), replicas=6)
        gen = RngStream(4).generator()
        z = sum(sample_increments(stable_1d, 0.25, 6, gen) for _ in range(4))
        np.testing.assert_allclose(x, 0.5 + 2.0 * z)

    def test_path_starts_at_x0(self, stable_2d):
        path = simulate_path(mean_reverting_problem(stable_2d), 1.0, 32, RngStream(5))
        assert path.shape == (33, 2)
        np.testing.assert_array_equal(path[0], [0.0, 0.0])

    def test_bad_steps(self, stable_1d):
        with pytest.raises(InputError):
            simulate_endpoint(identity_problem(stable_1d), 1.0, 0, RngStream(0))


class TestOneStep:
    def test_snap_epsilon_lands_on_grid(self):
        epsilon, dt, k = snap_epsilon(1.0, 0.1, 4096)
        assert dt == 1.0 / 4096
        assert abs(epsilon - 0.1) <= dt
        assert k * dt + epsilon == pytest.approx(1.0)

    def test_epsilon_range(self):
        with pytest.raises(InputError):
            snap_epsilon(0.5, 0.6, 64)

    def test_ge1_formula(self, stable_1d):
        problem = identity_problem(stable_1d, drift=0.5, scale=2.0, gamma=1.6, delta=1.4)
        result = one_step_ge1(problem, 1.0, 0.1, np.array([1.0]), np.array([0.3]))
        assert result.u_eps == pytest.approx([1.05])
        assert result.x_eps == pytest.approx([1.65])

    def test_constant_coefficients_couple_exactly(self, stable_1d):
        problem = identity_problem(stable_1d, drift=0.5, scale=2.0, gamma=1.6, delta=1.4)
        result = couple_one_step(problem, 1.0, 2.0 ** -4, RngStream(6), replicas=20, steps_per_unit=64,
                                 min_window_steps=8)
        np.testing.assert_allclose(result.x_exact_surrogate, result.x_eps, atol=1e-12)

    def test_mean_reverting_differs(self, stable_2d):
        problem = mean_reverting_problem(stable_2d)
        result = couple_one_step(problem, 1.0, 2.0 ** -4, RngStream(7), replicas=20, steps_per_unit=64,
                                 min_window_steps=8)
        assert result.x_eps.shape == (20, 2)
        assert np.any(np.abs(result.x_exact_surrogate - result.x_eps) > 0)

    def test_lt1_restores_state_without_drift(self):
        model = LevyModel.tempered_one_sided([1.0], [0.0], [0.5], [0.5])
        problem = identity_problem(model, gamma=0.8, delta=0.5, chi=0.2)
        x = np.array([[0.2], [-1.0]])
        window = np.zeros((2, 4, 1))
        result = one_step_lt1(problem, 1.0, 0.1, x, window)
        np.testing.assert_allclose(result.u_eps, x, atol=1e-12)

    def test_lt1_needs_finite_small_jump_mean(self, stable_1d):
        problem = identity_problem(stable_1d, gamma=0.8, delta=0.5)
        with pytest.raises(RegimeError):
            drift_correction(problem)
        with pytest.raises(RegimeError):
            one_step_lt1(problem, 1.0, 0.1, np.zeros(1), np.zeros((1, 2, 1)))

    def test_lt1_rejects_ge1_problem(self, stable_1d):
        problem = identity_problem(stable_1d, gamma=1.6, delta=1.4)
        with pytest.raises(RegimeError):
            one_step_lt1(problem, 1.0, 0.1, np.zeros(1), np.zeros((1, 2, 1)))

    def test_frozen_ode_linear_drift(self):
        w = frozen_ode(lambda x: np.ones_like(x), np.zeros((1, 1)), 0.3, 0.07)
        assert w[0, 0] == pytest.approx(0.3)


class TestStochasticIntegral:
    def test_unit_integrand_sums_increments(self, stable_1d):
        out = stochastic_integral(CoefficientSpec.constant(1.0), stable_1d, 0.5, 5, RngStream(8), 12)
        gen = RngStream(8).generator()
        expected = np.zeros((12, 1))
        for _ in range(5):
            expected += sample_increments(stable_1d, 0.1, 12, gen)
        np.testing.assert_allclose(out, expected)

    def test_compensation_needs_finite_mean(self, stable_1d):
        with pytest.raises(RegimeError):
            stochastic_integral(CoefficientSpec.constant(1.0), stable_1d, 0.5, 5, RngStream(8), 4,
                                compensate=True)
