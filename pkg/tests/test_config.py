import json

import pytest

from aniso_levy.core.config import (CheckParams, DensityParams, load_run_config, merge_overrides,
                                    validate_run_config, default_workers)
from aniso_levy.core.errors import ConfigError


def minimal(**extra):
    data = {"experiment": {"id": "check", "params": {"alphas": [1.5]}}}
    data.update(extra)
    return data


class TestRunConfig:
    def test_minimal_document(self):
        config = validate_run_config(minimal())
        assert config.output_dir == "./output"
        assert config.seed == 0
        assert isinstance(config.params, CheckParams)
        assert config.params.preset == "general"
        assert config.levy_model is None

    def test_unknown_key_reports_path(self):
        with pytest.raises(ConfigError) as info:
            validate_run_config(minimal(bogus=1))
        assert info.value.path == ("bogus",)
        assert str(info.value).startswith("bogus:")

    def test_params_are_validated_up_front(self):
        data = {"experiment": {"id": "density", "params": {"alpha": 3.0}}}
        with pytest.raises(ConfigError) as info:
            validate_run_config(data)
        assert "params.alpha" in str(info.value)

    def test_unknown_experiment(self):
        with pytest.raises(ConfigError):
            validate_run_config({"experiment": {"id": "nope"}})

    def test_model_and_problem_must_agree(self):
        problem = {
            "dimension": 1,
            "model": {"kind": "component_stable", "dimension": 1, "alphas": [1.5]},
            "x0": [0.0],
            "drift": [{"family": "constant", "value": 0.0, "declared_exponent": 1.0}],
            "diffusion_matrix": [[{"family": "constant", "value": 1.0, "declared_exponent": 0.9}]],
        }
        config = validate_run_config(minimal(problem=problem))
        assert config.levy_model.alphas == (1.5,)
        other = {"kind": "component_stable", "dimension": 1, "alphas": [1.2]}
        with pytest.raises(ConfigError) as info:
            validate_run_config(minimal(problem=problem, model=other))
        assert "disagree" in str(info.value)

    def test_negative_seed(self):
        with pytest.raises(ConfigError) as info:
            validate_run_config(minimal(seed=-1))
        assert info.value.path == ("seed",)


class TestWorkers:
    def test_default(self, monkeypatch):
        monkeypatch.delenv("ANISO_LEVY_WORKERS", raising=False)
        assert default_workers() == 4

    def test_environment(self, monkeypatch):
        monkeypatch.setenv("ANISO_LEVY_WORKERS", "2")
        assert default_workers() == 2
        assert validate_run_config(minimal()).workers == 2

    def test_bad_environment(self, monkeypatch):
        monkeypatch.setenv("ANISO_LEVY_WORKERS", "many")
        with pytest.raises(ConfigError):
            default_workers()


class TestMerge:
    def test_none_values_do_not_override(self):
        base = {"seed": 3, "experiment": {"id": "check", "params": {"alphas": [1.5], "beta": 0.5}}}
        merged = merge_overrides(base, {"seed": None, "experiment": {"params": {"beta": None, "chi": 0.2}}})
        assert merged["seed"] == 3
        assert merged["experiment"]["params"] == {"alphas": [1.5], "beta": 0.5, "chi": 0.2}
        assert base["experiment"]["params"] == {"alphas": [1.5], "beta": 0.5}

    def test_none_values_dropped_from_new_blocks(self):
        merged = merge_overrides({}, {"experiment": {"id": "check", "params": {"alphas": [1.5], "beta": None}}})
        assert merged == {"experiment": {"id": "check", "params": {"alphas": [1.5]}}}

    def test_load_with_comments_and_overrides(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"_comment": "demo", **minimal(seed=4)}), encoding="utf-8")
        config = load_run_config(str(path), {"output_dir": str(tmp_path)})
        assert config.seed == 4
        assert config.output_dir == str(tmp_path)

    def test_density_params_bounds(self):
        assert DensityParams(alpha=2.0).count == 4097
        with pytest.raises(ValueError):
            DensityParams(alpha=0.0)
