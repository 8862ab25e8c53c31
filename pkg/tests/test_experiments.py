import json
import math
import os

import numpy as np
import pytest

from aniso_levy.core.base_experiment import BaseExperiment, BatchSummary
from aniso_levy.core.errors import InputError, RegimeError, UnsupportedModelError
from aniso_levy.core.utils import read_samples
from aniso_levy.experiments import (A1ScalingExperiment, BesovGrowthExperiment, Check, ExperimentReport,
                                    MomentBoundExperiment, OneStepRateExperiment, SimulationRun, a1_scaling_experiment,
                                    fit_loglog)
from aniso_levy.experiments.a1_scaling import plateau_constant
from aniso_levy.experiments.one_step_rate import problem_kappa
from aniso_levy.experiments.report import FLAG_DEGENERATE, FLAG_JUMP_SUM_UNAVAILABLE
from aniso_levy.numerics.levy_models import LevyModel

from conftest import diagonal_problem, identity_problem, mean_reverting_problem

SMALL_RATE = dict(eps_grid=[2.0 ** -6, 2.0 ** -5, 2.0 ** -4], replicas=64, steps_per_unit=64,
                  min_window_steps=4, batch_size=16)


class TestReportPieces:
    def test_fit_exact_power_law(self):
        xs = [1.0, 2.0, 4.0, 8.0]
        fit = fit_loglog(xs, [3.0 * x ** -0.5 for x in xs])
        assert fit.slope == pytest.approx(-0.5)
        assert math.exp(fit.intercept) == pytest.approx(3.0)
        assert fit.r_squared == pytest.approx(1.0)

    def test_fit_constant_values(self):
        fit = fit_loglog([1.0, 2.0, 3.0], [5.0, 5.0, 5.0])
        assert fit.slope == pytest.approx(0.0)
        assert fit.r_squared == 1.0

    def test_fit_rejects_bad_input(self):
        with pytest.raises(InputError):
            fit_loglog([1.0, 2.0], [1.0, 2.0])
        with pytest.raises(InputError):
            fit_loglog([1.0, 2.0, 3.0], [1.0, 0.0, 2.0])

    def test_check_directions(self):
        assert Check("a", 0.95, 1.0, 0.1, "ge").passed
        assert not Check("a", 0.85, 1.0, 0.1, "ge").passed
        assert Check("a", 1.05, 1.0, 0.1, "le").passed
        assert not Check("a", 1.2, 1.0, 0.1, "abs").passed
        assert not Check("a", math.nan, 1.0, 10.0, "abs").passed
        with pytest.raises(InputError):
            Check("a", 1.0, 1.0, 0.1, "gt")

    def test_report_verdict(self):
        report = ExperimentReport("demo", ["x"])
        assert report.verdict == "pass"
        report.checks.append(Check("c", 2.0, 1.0, 0.5, "le"))
        assert report.verdict == "fail"
        report.flag("advisory")
        report.flag("advisory")
        assert report.flags == ["advisory"]

    def test_write_artifacts_with_plot(self, tmp_path):
        xs = [1.0, 2.0, 4.0]
        report = ExperimentReport("demo", ["x", "y"], table=[{"x": x, "y": x ** 0.5} for x in xs],
                                  fit=fit_loglog(xs, [x ** 0.5 for x in xs]), theoretical_exponent=0.5,
                                  x_column="x", y_column="y")
        paths = report.write_artifacts(str(tmp_path), plot=True)
        assert [os.path.basename(p) for p in paths] == ["demo.csv", "demo.json", "demo.svg"]
        with open(paths[1], encoding="utf-8") as handle:
            payload = json.load(handle)
        assert payload["verdict"] == "pass"
        assert payload["fit"]["slope"] == pytest.approx(0.5)


class TestBatching:
    def test_summary_merge(self):
        values = np.arange(10.0)
        merged = BatchSummary.of(values[:4]).merge(BatchSummary.of(values[4:]))
        assert merged.count == 10
        assert merged.mean[0] == pytest.approx(4.5)
        assert merged.stderr[0] == pytest.approx(np.std(values, ddof=1) / math.sqrt(10))

    def test_single_value_has_no_stderr(self):
        assert math.isnan(BatchSummary.of(np.array([1.0])).stderr[0])

    def test_results_do_not_depend_on_workers(self):
        def draw(count, stream):
            return stream.generator().standard_normal(count)

        one = BaseExperiment(seed=3, workers=1, batch_size=7).run_batches(draw, 50)
        four = BaseExperiment(seed=3, workers=4, batch_size=7).run_batches(draw, 50)
        assert one.shape == (50,)
        np.testing.assert_array_equal(one, four)

    def test_doubling_replicas_shrinks_stderr(self):
        def draw(count, stream):
            return stream.generator().standard_normal(count)

        experiment = BaseExperiment(seed=5, workers=2, batch_size=1000)
        single = experiment.summarize(experiment.run_batches(draw, 20_000, grid_index=0))
        double = experiment.summarize(experiment.run_batches(draw, 40_000, grid_index=1))
        ratio = single.stderr[0] / double.stderr[0]
        assert 1.2 <= ratio <= 1.63
        assert ratio == pytest.approx(math.sqrt(2.0), rel=0.05)

    def test_base_run_is_abstract(self):
        with pytest.raises(NotImplementedError):
            BaseExperiment().run()

    def test_invalid_settings(self):
        with pytest.raises(InputError):
            BaseExperiment(seed=-1)
        with pytest.raises(InputError):
            BaseExperiment(workers=0)


class TestA1Scaling:
    def test_cauchy_plateau(self, tmp_path):
        model = LevyModel.component_stable([1.0])
        report = a1_scaling_experiment(model, h_grid=[1e-2, 5e-2], t_grid=[0.5, 0.2, 0.1], half_width=100.0,
                                       output_dir=str(tmp_path))
        assert sorted(os.listdir(tmp_path)) == ["a1_scaling.csv", "a1_scaling.json"]
        assert plateau_constant(1.0) == pytest.approx(2.0 / math.pi)
        assert len(report.table) == 6
        assert report.passed
        assert report.fit is not None
        assert abs(report.fit.slope) < 0.01
        for row in report.table:
            assert row["scaled_gradient_l1"] == pytest.approx(2.0 / math.pi, rel=0.02)

    def test_component_axis(self):
        experiment = A1ScalingExperiment(LevyModel.component_stable([1.0, 1.5]), axis=1)
        assert experiment.alpha == 1.5

    def test_tempered_model_rejected(self, tempered_symmetric):
        with pytest.raises(UnsupportedModelError):
            A1ScalingExperiment(tempered_symmetric)


class TestOneStepRate:
    def test_constant_problem_is_degenerate(self, stable_1d):
        problem = identity_problem(stable_1d, gamma=1.6, delta=1.4)
        report = OneStepRateExperiment(problem, **SMALL_RATE).run()
        assert FLAG_DEGENERATE in report.flags
        assert report.fit is None
        assert report.checks == []

    def test_workers_do_not_change_results(self, stable_1d):
        problem = mean_reverting_problem(stable_1d)
        one = OneStepRateExperiment(problem, workers=1, seed=11, **SMALL_RATE).run()
        four = OneStepRateExperiment(problem, workers=4, seed=11, **SMALL_RATE).run()
        assert one.table == four.table
        assert one.columns == ["epsilon", "requested_epsilon", "moment", "stderr"]

    def test_general_slope_meets_bound(self, stable_2d):
        problem = mean_reverting_problem(stable_2d)
        report = OneStepRateExperiment(problem, eta=0.5, eps_grid=[2.0 ** -k for k in range(8, 3, -1)],
                                       replicas=4000, steps_per_unit=256, min_window_steps=16, batch_size=1000,
                                       seed=7).run()
        assert report.theoretical_exponent == pytest.approx(0.5 * 1.171875)
        assert [check.name for check in report.checks] == ["slope"]
        assert report.checks[0].measured >= report.theoretical_exponent - 0.1
        assert report.passed

    def test_small_gamma_slope_meets_bound(self):
        model = LevyModel.tempered_one_sided(c_plus=[1.0], c_minus=[0.0], alpha_plus=[0.4], alpha_minus=[0.4])
        problem = mean_reverting_problem(model, gamma=0.5, delta=0.5, beta=0.5, chi=0.5)
        assert problem_kappa(problem)[0] == pytest.approx(2.0)
        report = OneStepRateExperiment(problem, t=0.5, eta=0.5, eps_grid=[2.0 ** -k for k in range(7, 3, -1)],
                                       replicas=2000, steps_per_unit=256, min_window_steps=16, batch_size=500,
                                       seed=3).run()
        assert report.theoretical_exponent == pytest.approx(1.0)
        assert [check.name for check in report.checks] == ["slope"]
        assert report.passed

    def test_mixed_diagonal_component_slopes(self):
        model = LevyModel.tempered_one_sided(c_plus=[1.0, 1.0], c_minus=[0.0, 1.0], alpha_plus=[0.4, 0.8],
                                             alpha_minus=[0.4, 0.8])
        problem = diagonal_problem(model, gammas=(0.5, 1.5), deltas=(0.5, 0.5))
        kappa = problem_kappa(problem)
        assert kappa[0] == pytest.approx(4.0 / 3.0)
        assert kappa[1] == pytest.approx(1.0 / 1.5 + (0.5 / 1.5) / 1.5)
        report = OneStepRateExperiment(problem, t=0.5, eta=0.5, eps_grid=[2.0 ** -k for k in range(7, 3, -1)],
                                       replicas=2000, steps_per_unit=256, min_window_steps=16, batch_size=500,
                                       seed=5).run()
        assert report.columns[4:] == ["moment_0", "stderr_0", "moment_1", "stderr_1"]
        checks = {check.name: check for check in report.checks}
        assert sorted(checks) == ["slope_0", "slope_1"]
        assert checks["slope_0"].theoretical == pytest.approx(0.5 * kappa[0])
        assert checks["slope_1"].theoretical == pytest.approx(0.5 * kappa[1])
        assert report.passed

    def test_eta_range(self, stable_1d):
        with pytest.raises(InputError):
            OneStepRateExperiment(mean_reverting_problem(stable_1d), eta=1.5)

    def test_general_problem_needs_gamma(self, stable_1d):
        with pytest.raises(InputError):
            OneStepRateExperiment(identity_problem(stable_1d))


class TestBesovGrowth:
    def test_small_run_has_oracle(self, stable_1d):
        problem = identity_problem(stable_1d)
        report = BesovGrowthExperiment(problem, lam=0.5, t_grid=[0.25, 0.5, 1.0], replicas=2000,
                                       max_nodes_per_axis=256, batch_size=500).run()
        assert "exact_norm" in report.columns and "ratio" in report.columns
        assert len(report.table) == 3
        assert np.all(report.column("norm") > 0)
        assert np.all(report.column("exact_norm") > 0)
        assert report.fit is not None
        assert report.theoretical_exponent == pytest.approx(1.0 / 1.5)

    def test_oracle_and_large_t_verdicts(self, stable_1d):
        problem = identity_problem(stable_1d)
        report = BesovGrowthExperiment(problem, lam=0.5, t_grid=[0.25, 0.5, 1.0, 2.0], replicas=200_000,
                                       batch_size=20_000, seed=4).run()
        checks = {check.name: check for check in report.checks}
        assert sorted(checks) == ["growth", "large_t_cap", "oracle"]
        assert checks["oracle"].measured <= 0.1
        assert np.all(np.abs(report.column("ratio") - 1.0) <= 0.1)
        assert checks["large_t_cap"].measured <= 1.1
        assert checks["growth"].measured <= 1.0 / 1.5 + 0.1
        assert report.passed

    def test_stderr_column(self, stable_1d):
        problem = identity_problem(stable_1d)
        small = BesovGrowthExperiment(problem, lam=0.5, t_grid=[0.5], replicas=5000, batch_size=5000).run()
        large = BesovGrowthExperiment(problem, lam=0.5, t_grid=[0.5], replicas=80_000, batch_size=5000).run()
        assert small.columns[:5] == ["t", "inv_t", "r", "norm", "stderr"]
        err_small, err_large = small.table[0]["stderr"], large.table[0]["stderr"]
        assert 0.0 < err_large < err_small
        assert err_small < 0.25 * small.table[0]["norm"]

    def test_jackknife_groups_validated(self, stable_1d):
        with pytest.raises(InputError):
            BesovGrowthExperiment(identity_problem(stable_1d), lam=0.5, jackknife_groups=1)

    def test_lambda_range(self, stable_1d):
        with pytest.raises(InputError):
            BesovGrowthExperiment(identity_problem(stable_1d), lam=1.0)


class TestMomentBound:
    def test_stable_self_similarity(self, stable_1d):
        report = MomentBoundExperiment(stable_1d, eta=0.5, gamma=1.6, delta=1.4, replicas=20000,
                                       seed=5).run()
        assert report.fit.slope == pytest.approx(1.0 / 3.0, abs=0.05)
        assert [check.name for check in report.checks] == ["slope", "self_similarity"]
        assert report.passed

    def test_small_gamma_needs_finite_mean(self, stable_1d):
        with pytest.raises(RegimeError):
            MomentBoundExperiment(stable_1d, eta=0.3, gamma=0.8, delta=0.5)

    def test_stable_jump_sum_unavailable(self):
        model = LevyModel.component_stable([0.5])
        report = MomentBoundExperiment(model, eta=0.3, gamma=0.8, delta=0.6, window_grid=[0.01, 0.02, 0.04],
                                       replicas=500, substeps=4).run()
        assert FLAG_JUMP_SUM_UNAVAILABLE in report.flags
        assert "jump_sum_moment" not in report.columns

    def test_tempered_jump_sum_columns(self):
        model = LevyModel.tempered_one_sided(c_plus=[1.0], c_minus=[0.0], alpha_plus=[0.5], alpha_minus=[0.5])
        report = MomentBoundExperiment(model, eta=0.3, gamma=0.8, delta=0.6, window_grid=[0.01, 0.02, 0.04],
                                       replicas=500, substeps=4, batch_size=250).run()
        assert report.columns[-2:] == ["jump_sum_moment", "jump_sum_stderr"]
        assert np.all(report.column("jump_sum_moment") > 0)

    def test_parameter_order(self, stable_1d):
        with pytest.raises(InputError):
            MomentBoundExperiment(stable_1d, eta=1.5, gamma=1.6, delta=1.4)


class TestSimulationRun:
    def test_endpoints_written(self, stable_2d, tmp_path):
        run = SimulationRun(model=stable_2d, replicas=100, batch_size=32, output_dir=str(tmp_path))
        samples = run.run()
        paths = run.write_outputs()
        assert samples.shape == (100, 2)
        np.testing.assert_array_equal(read_samples(paths[0]), samples)
        with open(paths[1], encoding="utf-8") as handle:
            assert json.load(handle)["shape"] == [100, 2]

    def test_problem_path(self, stable_1d):
        run = SimulationRun(problem=mean_reverting_problem(stable_1d), t=1.0, steps=16, path=True)
        assert run.run().shape == (17, 1)

    def test_needs_a_source(self):
        with pytest.raises(InputError):
            SimulationRun()
