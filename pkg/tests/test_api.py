import json
import os

import pytest

import aniso_levy
from aniso_levy import AnisoLevy, quick_check, quick_density, quick_rate
from aniso_levy.api import EXIT_FAIL, EXIT_PASS, evaluate_check
from aniso_levy.core.config import CheckParams, validate_run_config
from aniso_levy.core.errors import ConfigError, InputError

from conftest import mean_reverting_problem


class TestPackage:
    def test_info(self):
        info = aniso_levy.get_info()
        assert info["name"] == "aniso-levy"
        assert info["version"] == aniso_levy.get_version()


class TestChecks:
    def test_quick_check(self):
        assert quick_check("z2", alphas=[1.2, 1.5], beta=1.0, chi=0.8).overall

    def test_general_needs_moments(self):
        with pytest.raises(InputError):
            evaluate_check(CheckParams(alphas=[1.5]))

    def test_z1_takes_one_alpha(self):
        with pytest.raises(InputError):
            evaluate_check(CheckParams(preset="z1", alphas=[1.5, 1.5]))

    def test_elliptic_diagonal_uses_per_component_chis(self):
        report = evaluate_check(CheckParams(preset="elliptic-diagonal", alphas=[1.5, 1.5], chis=[0.5, 0.6]))
        assert report.to_dict()["overall"] == report.overall


class TestRun:
    def test_density_outcome(self, tmp_path):
        density = quick_density(1.0)
        assert density.value_at_nearest([0.0]) == pytest.approx(0.3183099, abs=1e-6)
        config = validate_run_config({"experiment": {"id": "density", "params": {"alpha": 2.0, "count": 1001,
                                                                                  "half_width": 20.0}},
                                      "output_dir": str(tmp_path)})
        outcome = AnisoLevy.from_config(config).run(config)
        assert outcome.exit_code == EXIT_PASS
        assert sorted(os.path.basename(p) for p in outcome.artifacts) == ["density.csv", "density.json"]
        assert abs(outcome.summary["mass_deficit"]) < 1e-6
        with open(os.path.join(str(tmp_path), "density.json"), encoding="utf-8") as handle:
            assert json.load(handle)["mass_deficit"] == pytest.approx(outcome.summary["mass_deficit"])

    def test_check_outcome_exit_code(self, tmp_path):
        config = validate_run_config({"experiment": {"id": "check", "params": {
            "preset": "z1", "alphas": [0.5], "beta": 0.0, "chi": 0.1}}, "output_dir": str(tmp_path)})
        outcome = AnisoLevy.from_config(config).run(config)
        assert outcome.exit_code == EXIT_FAIL
        assert outcome.artifacts == [os.path.join(str(tmp_path), "check.json")]

    def test_moments_need_model(self):
        config = validate_run_config({"experiment": {"id": "moments", "params": {
            "eta": 0.5, "gamma": 1.6, "delta": 1.4}}})
        with pytest.raises(ConfigError):
            AnisoLevy().run(config)

    def test_quick_rate_without_output(self, stable_1d):
        report = quick_rate(mean_reverting_problem(stable_1d), seed=2, eps_grid=[2.0 ** -6, 2.0 ** -5, 2.0 ** -4],
                            replicas=32, steps_per_unit=64, min_window_steps=4, batch_size=16)
        assert len(report.table) == 3
        assert report.to_dict()["experiment"] == "one_step_rate"
