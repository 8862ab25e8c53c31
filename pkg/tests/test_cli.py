import csv
import glob
import json
import os

import pytest

from aniso_levy.cli import build_overrides, build_parser, build_run_document, float_list, main
from aniso_levy.core.config import load_run_config, validate_run_config
from aniso_levy.core.utils import load_json_config

CONFIG_DIR = os.path.join(os.path.dirname(__file__), "..", "configs")


class TestCheckCommand:
    def test_passing_preset(self, tmp_path):
        code = main(["check", "--preset", "z2", "--alphas", "1.2,1.5", "--beta", "1", "--chi", "0.8",
                     "--out", str(tmp_path)])
        assert code == 0
        with open(tmp_path / "check.json", encoding="utf-8") as handle:
            payload = json.load(handle)
        assert payload["overall"] is True

    def test_failing_preset(self, tmp_path):
        code = main(["check", "--preset", "z1", "--alphas", "0.5", "--beta", "0", "--chi", "0.1",
                     "--out", str(tmp_path)])
        assert code == 1

    def test_z1_boundary_is_reported(self, tmp_path, capsys):
        code = main(["check", "--preset", "z1", "--alphas", "1", "--beta", "0", "--chi", "0.5",
                     "--out", str(tmp_path)])
        assert code == 1
        assert "참고: alpha=1 with beta=0" in capsys.readouterr().out
        with open(tmp_path / "check.json", encoding="utf-8") as handle:
            assert len(json.load(handle)["notes"]) == 1

    def test_unknown_preset(self):
        with pytest.raises(SystemExit):
            main(["check", "--preset", "nope", "--alphas", "1.5"])

    def test_float_list(self):
        assert float_list("1.2, 1.5") == [1.2, 1.5]
        with pytest.raises(ValueError):
            float_list(" , ")


class TestErrors:
    def test_malformed_config(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        assert main(["check", "--config", str(path)]) == 2
        assert "Error" in capsys.readouterr().err

    def test_missing_config(self, tmp_path, capsys):
        assert main(["check", "--config", str(tmp_path / "missing.json")]) == 2
        assert "Config file not found" in capsys.readouterr().err

    def test_rate_needs_problem(self, tmp_path, capsys):
        assert main(["rate", "--out", str(tmp_path)]) == 2
        assert "problem" in capsys.readouterr().err

    def test_invalid_parameter(self, tmp_path):
        assert main(["density", "--alpha", "2.5", "--out", str(tmp_path)]) == 2


class TestDensityCommand:
    def test_cauchy_csv(self, tmp_path):
        assert main(["density", "--alpha", "1", "--out", str(tmp_path)]) == 0
        with open(tmp_path / "density.csv", newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 4097
        center = rows[2048]
        assert float(center["x0"]) == pytest.approx(0.0, abs=1e-12)
        assert float(center["value"]) == pytest.approx(0.31831, abs=1e-5)
        assert os.path.exists(tmp_path / "density.json")


class TestOverrides:
    def test_besov_alphas_build_a_problem(self):
        args = build_parser().parse_args(["besov", "--alphas", "1.5,1.5", "--lam", "0.5"])
        assert "problem" not in build_overrides(args)
        config = validate_run_config(build_run_document(args, {}))
        assert config.model is None
        assert config.problem.dimension == 2
        assert config.problem.has_zero_drift()
        assert config.params.lam == 0.5

    def test_flags_override_config(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"experiment": {"id": "density", "params": {"alpha": 1.5, "t": 2.0}},
                                    "seed": 9}), encoding="utf-8")
        args = build_parser().parse_args(["density", "--t", "0.5"])
        base = load_json_config(str(path))
        config = validate_run_config(build_run_document(args, base))
        assert config.seed == 9
        assert config.params.alpha == 1.5
        assert config.params.t == 0.5

    def test_alphas_replace_config_model(self):
        base = load_json_config(os.path.join(CONFIG_DIR, "a1_cauchy.json"))
        args = build_parser().parse_args(["a1-scan", "--alphas", "1.5"])
        config = validate_run_config(build_run_document(args, base))
        assert config.levy_model.alphas == (1.5,)
        assert config.params.axis == 0

    def test_alphas_replace_problem_model(self):
        base = load_json_config(os.path.join(CONFIG_DIR, "besov_component.json"))
        dimension = base["problem"]["dimension"]
        args = build_parser().parse_args(["besov", "--alphas", ",".join(["1.3"] * dimension)])
        config = validate_run_config(build_run_document(args, base))
        assert config.model is None
        assert config.problem.model.alphas == (1.3,) * dimension
        assert config.problem.x0 == tuple(base["problem"]["x0"])

    def test_alphas_on_a1_cauchy_run(self, tmp_path):
        code = main(["a1-scan", "--config", os.path.join(CONFIG_DIR, "a1_cauchy.json"), "--alphas", "1.5",
                     "--t-grid", "0.5,0.2", "--h-grid", "0.05", "--half-width", "60", "--out", str(tmp_path)])
        assert code in (0, 1)
        with open(tmp_path / "a1_scaling.json", encoding="utf-8") as handle:
            payload = json.load(handle)
        assert payload["provenance"]["alpha"] == 1.5

    def test_base_document_not_modified(self):
        base = {"model": {"kind": "component_stable", "dimension": 1, "alphas": [1.0]},
                "experiment": {"id": "density", "params": {"alpha": 1.5}}}
        snapshot = json.loads(json.dumps(base))
        args = build_parser().parse_args(["moments", "--alphas", "1.2", "--eta", "1", "--gamma", "1.5",
                                          "--delta", "1.5"])
        config = validate_run_config(build_run_document(args, base))
        assert base == snapshot
        assert config.experiment.id == "moments"
        assert config.levy_model.alphas == (1.2,)

    def test_other_experiment_params_not_inherited(self):
        base = {"experiment": {"id": "density", "params": {"alpha": 1.5}}}
        args = build_parser().parse_args(["check", "--alphas", "1.5"])
        config = validate_run_config(build_run_document(args, base))
        assert config.experiment.id == "check"
        assert "alpha" not in config.experiment.params


@pytest.mark.parametrize("path", sorted(glob.glob(os.path.join(CONFIG_DIR, "*.json"))))
def test_shipped_configs_validate(path):
    config = load_run_config(path)
    assert config.output_dir.startswith("./output/")
