import math

import numpy as np
import pytest
from scipy import stats

from aniso_levy.core.errors import InputError, UnsupportedModelError
from aniso_levy.core.plan_cache import get_plan_cache
from aniso_levy.numerics.levy_models import LevyModel, symbol_eval
from aniso_levy.numerics.sampling import (RngStream, batch_stream, build_increment_plan, sample_increment,
                                          sample_increments, sample_increments_with_jumps,
                                          sample_one_sided_stable, sample_path_increments, sample_sym_stable,
                                          small_jump_compensation)

N = 20_000


def empirical_cos(samples, xi):
    return float(np.mean(np.cos(xi * samples)))


class TestStreams:
    def test_same_stream_same_draws(self):
        a = batch_stream(7, 2, 3).generator().standard_normal(5)
        b = batch_stream(7, 2, 3).generator().standard_normal(5)
        np.testing.assert_array_equal(a, b)

    def test_distinct_batches_differ(self):
        a = batch_stream(7, 0, 0).generator().standard_normal(5)
        b = batch_stream(7, 0, 1).generator().standard_normal(5)
        c = batch_stream(7, 1, 0).generator().standard_normal(5)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_stream_id_packs_grid_and_batch(self):
        assert batch_stream(0, 3, 5).stream_id == (3 << 32) | 5


class TestStableSamplers:
    def test_cauchy_median(self):
        x = sample_sym_stable(1.0, 1.0, N, RngStream(1))
        assert float(np.median(np.abs(x))) == pytest.approx(1.0, abs=0.05)

    def test_cauchy_distribution(self):
        x = sample_sym_stable(1.0, 1.0, N, RngStream(11))
        assert stats.kstest(x, "cauchy").pvalue > 1e-3

    def test_stable_distribution(self):
        x = sample_sym_stable(1.5, 1.0, 2000, RngStream(12))
        assert stats.kstest(x, stats.levy_stable(1.5, 0.0).cdf).pvalue > 1e-3

    @pytest.mark.parametrize("alpha", [0.7, 1.5])
    def test_characteristic_function(self, alpha):
        x = sample_sym_stable(alpha, 1.0, N, RngStream(2))
        assert empirical_cos(x, 1.0) == pytest.approx(math.exp(-1.0), abs=0.02)

    def test_scale_parameter(self):
        x = sample_sym_stable(1.5, 0.25, N, RngStream(3))
        assert empirical_cos(x, 2.0) == pytest.approx(math.exp(-0.25 * 2.0 ** 1.5), abs=0.02)

    def test_one_sided_laplace_transform(self):
        x = sample_one_sided_stable(0.5, N, RngStream(4))
        assert np.all(x > 0)
        assert float(np.mean(np.exp(-x))) == pytest.approx(math.exp(-1.0), abs=0.02)

    def test_rejects_bad_alpha(self):
        with pytest.raises(InputError):
            sample_sym_stable(2.0, 1.0, 10, RngStream(0))
        with pytest.raises(InputError):
            sample_one_sided_stable(1.0, 10, RngStream(0))


class TestIncrements:
    def test_shapes(self, stable_2d):
        assert sample_increments(stable_2d, 0.5, 7, RngStream(0)).shape == (7, 2)
        assert sample_increment(stable_2d, 0.5, RngStream(0)).shape == (2,)
        grid = [0.0, 0.1, 0.3, 0.6]
        assert sample_path_increments(stable_2d, grid, RngStream(0)).shape == (3, 2)
        assert sample_path_increments(stable_2d, grid, RngStream(0), replicas=4).shape == (4, 3, 2)

    def test_component_stable_marginals(self):
        model = LevyModel.component_stable([1.0, 1.5])
        z = sample_increments(model, 0.5, N, RngStream(5))
        assert empirical_cos(z[:, 0], 1.0) == pytest.approx(math.exp(-0.5), abs=0.02)
        assert empirical_cos(z[:, 1], 1.0) == pytest.approx(math.exp(-0.5), abs=0.02)

    def test_isotropic_block_is_rotation_invariant(self):
        model = LevyModel.isotropic_stable(1.5, 2)
        z = sample_increments(model, 1.0, N, RngStream(6))
        rotated = (z[:, 0] + z[:, 1]) / math.sqrt(2.0)
        assert empirical_cos(z[:, 0], 1.0) == pytest.approx(math.exp(-1.0), abs=0.02)
        assert empirical_cos(rotated, 1.0) == pytest.approx(math.exp(-1.0), abs=0.02)

    def test_tempered_matches_symbol(self, tempered_symmetric):
        dt, xi = 0.01, 10.0
        z = sample_increments(tempered_symmetric, dt, N, RngStream(7))[:, 0]
        expected = math.exp(-dt * symbol_eval(tempered_symmetric, [xi]).real)
        assert empirical_cos(z, xi) == pytest.approx(expected, abs=0.02)

    def test_discrete_measure_matches_symbol(self):
        model = LevyModel.discrete_measure([0.5])
        dt, xi = 0.1, 5.0
        z = sample_increments(model, dt, N, RngStream(8))[:, 0]
        psi = symbol_eval(model, [xi])
        expected = math.exp(-dt * psi.real) * math.cos(dt * psi.imag)
        assert empirical_cos(z, xi) == pytest.approx(expected, abs=0.02)

    def test_subordinate_cannot_be_sampled(self):
        model = LevyModel.subordinate_bm([1.5], [0.1])
        with pytest.raises(UnsupportedModelError):
            sample_increments(model, 0.1, 3, RngStream(0))

    def test_bad_time_grid(self, stable_1d):
        with pytest.raises(InputError):
            sample_path_increments(stable_1d, [0.0, 0.2, 0.1], RngStream(0))

    def test_jump_variation_dominates_increment(self):
        model = LevyModel.tempered_one_sided([1.0], [0.0], [0.5], [0.5])
        increments, variation = sample_increments_with_jumps(model, 0.05, 500, RngStream(9))
        plan = build_increment_plan(model)
        raw = increments[:, 0] + 0.05 * plan.compensator_drift[0]
        assert np.all(variation >= np.abs(raw) - 1e-9)

    def test_stable_models_have_no_jump_bookkeeping(self, stable_1d):
        with pytest.raises(UnsupportedModelError):
            sample_increments_with_jumps(stable_1d, 0.1, 3, RngStream(0))


class TestPlans:
    def test_compensation_excludes_extra_measure(self):
        base = LevyModel.tempered_one_sided([1.0], [0.5], [0.5], [0.5])
        extra = LevyModel.tempered_one_sided([1.0], [0.5], [0.5], [0.5], extra_rate=[2.0], extra_scale=[3.0])
        np.testing.assert_allclose(small_jump_compensation(base, 1e-3)[0], small_jump_compensation(extra, 1e-3)[0])

    def test_plan_is_cached(self, tempered_symmetric):
        first = build_increment_plan(tempered_symmetric)
        second = build_increment_plan(tempered_symmetric)
        assert first is second
        assert len(get_plan_cache().get_cached_plans()) == 1

    def test_stable_plan_is_exact(self, stable_2d):
        plan = build_increment_plan(stable_2d)
        assert plan.is_exact
        assert plan.jump_cutoff is None
