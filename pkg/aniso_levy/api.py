#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
api.py

aniso-levy 프로그래밍 API - 가정 검사, 시뮬레이션, 측정 실험을 한 곳에서 실행
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from .core.config import (A1ScanParams, BesovParams, CheckParams, DensityParams, MomentParams, RateParams,
                          RunConfig, SimulateParams, default_workers)
from .core.errors import ConfigError, InputError
from .core.plan_cache import preload_plans
from .core.utils import ensure_directory, save_json_result
from .experiments import (A1ScalingExperiment, BesovGrowthExperiment, ExperimentReport, MomentBoundExperiment,
                          OneStepRateExperiment, SimulationRun)
from .numerics.density import Axis, GridDensity, export_grid_csv, stable_density_1d
from .numerics.hypotheses import (ConditionReport, check_corollary_no_delta, check_corollary_presets,
                                  check_diagonal, check_general, check_z1_preset, check_z2_diagonal_preset,
                                  check_z2_preset)
from .numerics.levy_models import LevyModel
from .numerics.sampling import build_increment_plan
from .numerics.sde import SdeProblem

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


@dataclass
class RunOutcome:
    """실행 결과 요약, 저장된 산출물, 종료 코드"""

    command: str
    summary: Dict[str, Any]
    artifacts: List[str] = field(default_factory=list)
    exit_code: int = EXIT_PASS


def _per_component(values: Optional[List[float]], scalar: float, d: int) -> List[float]:
    return list(values) if values is not None else [scalar] * d


def evaluate_check(params: CheckParams) -> ConditionReport:
    """check 프리셋을 해당 조건 검사기로 연결"""
    alphas, d = params.alphas, len(params.alphas)
    betas = _per_component(params.betas, params.beta, d)
    chis = _per_component(params.chis, params.chi, d)
    preset = params.preset

    if preset == "general":
        if params.gamma is None or params.delta is None:
            raise InputError("preset 'general' needs gamma and delta")
        return check_general(alphas, params.gamma, params.delta, params.beta, params.chi, params.zero_drift)
    if preset == "diagonal":
        if params.gammas is None or params.deltas is None:
            raise InputError("preset 'diagonal' needs gammas and deltas")
        return check_diagonal(alphas, params.gammas, params.deltas, betas, chis, params.zero_drift)
    if preset == "z1":
        if d != 1:
            raise InputError("preset 'z1' takes a single alpha")
        return check_z1_preset(alphas[0], params.beta, params.chi, params.zero_drift)
    if preset == "z2":
        return check_z2_preset(alphas, params.beta, params.chi, params.zero_drift)
    if preset == "z2-diagonal":
        return check_z2_diagonal_preset(alphas, betas, chis, params.zero_drift)
    if preset == "no-delta":
        if params.gammas is not None:
            return check_diagonal(alphas, params.gammas, None, betas, chis, params.zero_drift)
        if params.gamma is None:
            raise InputError("preset 'no-delta' needs gamma (or gammas for the diagonal form)")
        return check_corollary_no_delta(alphas, params.gamma, params.beta, params.chi, params.zero_drift)
    if preset == "elliptic":
        return check_corollary_presets("elliptic", alphas, params.chi)
    return check_corollary_presets("elliptic-diagonal", alphas, chis)


class AnisoLevy:
    """aniso-levy 메인 API 클래스"""

    def __init__(self, seed: int = 0, workers: Optional[int] = None, output_dir: Optional[str] = None,
                 plot: bool = False):
        """
        Args:
            seed: 루트 시드
            workers: 배치 워커 수 (기본 ANISO_LEVY_WORKERS 또는 4)
            output_dir: 산출물 디렉토리 (None 이면 저장하지 않음)
            plot: SVG 그림 저장 여부
        """
        self.seed = seed
        self.workers = default_workers() if workers is None else workers
        self.output_dir = output_dir
        self.plot = plot
        self._last_artifacts: List[str] = []

    def _common(self, batch_size: Optional[int] = None) -> Dict[str, Any]:
        common = {"seed": self.seed, "workers": self.workers, "output_dir": self.output_dir, "plot": self.plot}
        if batch_size is not None:
            common["batch_size"] = batch_size
        return common

    # --- 가정 검사 ---

    def check(self, **params) -> ConditionReport:
        """정리 조건 평가 (params 는 CheckParams 필드)"""
        report = evaluate_check(CheckParams(**params))
        if self.output_dir is not None:
            ensure_directory(self.output_dir)
            save_json_result(report.to_dict(), os.path.join(self.output_dir, "check.json"))
        return report

    # --- 시뮬레이션 / 밀도 ---

    def simulate(self, model: Optional[LevyModel] = None, problem: Optional[SdeProblem] = None,
                 **params) -> np.ndarray:
        """끝점 또는 경로 샘플 생성 (params 는 SimulateParams 필드)"""
        options = SimulateParams(**params)
        run = SimulationRun(model=model, problem=problem, **options.model_dump(), **self._common())
        samples = run.run()
        self._last_artifacts = run.write_outputs()
        return samples

    def density(self, alpha: float, t: float = 1.0, half_width: float = 50.0, count: int = 4097,
                output_name: str = "density.csv") -> GridDensity:
        """exp(−t|ξ|^α) 의 FFT 역변환 밀도 (중앙 대칭 그리드)"""
        options = DensityParams(alpha=alpha, t=t, half_width=half_width, count=count, output_name=output_name)
        axis = Axis.centered(options.half_width, options.count)
        density = stable_density_1d(options.alpha, options.t, axis, check_mass=False)
        logger.info("density alpha=%g t=%g: grid mass %.6f (deficit %.3g)", options.alpha, options.t, density.mass,
                    density.mass_deficit)
        self._last_artifacts = []
        if self.output_dir is not None:
            ensure_directory(self.output_dir)
            csv_path = os.path.join(self.output_dir, options.output_name)
            json_path = os.path.join(self.output_dir, "density.json")
            export_grid_csv(density, csv_path)
            save_json_result({"experiment": "density", "alpha": options.alpha, "t": options.t,
                              "half_width": options.half_width, "count": options.count,
                              "mass": density.mass, "mass_deficit": density.mass_deficit,
                              "value_at_zero": density.value_at_nearest([0.0])},
                             json_path)
            self._last_artifacts = [csv_path, json_path]
        return density

    # --- 측정 실험 ---

    def a1_scan(self, model: LevyModel, **params) -> ExperimentReport:
        options = A1ScanParams(**params)
        return A1ScalingExperiment(model, **options.model_dump(), **self._common()).execute()

    def rate(self, problem: SdeProblem, **params) -> ExperimentReport:
        options = RateParams(**params).model_dump()
        batch_size = options.pop("batch_size")
        return OneStepRateExperiment(problem, **options, **self._common(batch_size)).execute()

    def besov(self, problem: SdeProblem, **params) -> ExperimentReport:
        options = BesovParams(**params).model_dump()
        batch_size = options.pop("batch_size")
        return BesovGrowthExperiment(problem, **options, **self._common(batch_size)).execute()

    def moments(self, model: LevyModel, **params) -> ExperimentReport:
        options = MomentParams(**params)
        kwargs = options.model_dump(exclude={"integrand", "batch_size"})
        return MomentBoundExperiment(model, integrand=options.integrand, **kwargs,
                                     **self._common(options.batch_size)).execute()

    # --- 설정 실행 ---

    @classmethod
    def from_config(cls, config: RunConfig) -> "AnisoLevy":
        return cls(seed=config.seed, workers=config.workers, output_dir=config.output_dir, plot=config.plot)

    def run(self, config: RunConfig) -> RunOutcome:
        """
        RunConfig 의 실험 실행

        Returns:
            RunOutcome (판정 통과 0, 실패 1)
        """
        command = config.experiment.id
        params = config.params.model_dump()
        model = config.levy_model
        if model is not None and command not in ("check", "density", "a1-scan"):
            # 워커 스레드 시작 전에 증분 계획 생성
            preload_plans([model], build_increment_plan)

        if command == "check":
            report = self.check(**params)
            artifacts = [os.path.join(self.output_dir, "check.json")] if self.output_dir else []
            return RunOutcome(command, report.to_dict(), artifacts,
                              EXIT_PASS if report.overall else EXIT_FAIL)
        if command == "simulate":
            samples = self.simulate(model=model, problem=config.problem, **params)
            return RunOutcome(command, {"shape": list(samples.shape)}, self._last_artifacts)
        if command == "density":
            density = self.density(**params)
            return RunOutcome(command, {"mass": density.mass, "mass_deficit": density.mass_deficit,
                                        "value_at_zero": density.value_at_nearest([0.0])},
                              self._last_artifacts)

        if command in ("rate", "besov") and config.problem is None:
            raise ConfigError(f"'{command}' needs a problem", path=("problem",))
        if command in ("a1-scan", "moments") and model is None:
            raise ConfigError(f"'{command}' needs a model", path=("model",))

        if command == "a1-scan":
            report = self.a1_scan(model, **params)
        elif command == "rate":
            report = self.rate(config.problem, **params)
        elif command == "besov":
            report = self.besov(config.problem, **params)
        else:
            report = self.moments(model, **params)

        artifacts = []
        if self.output_dir is not None:
            base = os.path.join(self.output_dir, report.experiment_id)
            artifacts = [p for p in (base + ".csv", base + ".json", base + ".svg") if os.path.exists(p)]
        return RunOutcome(command, report.to_dict(), artifacts, EXIT_PASS if report.passed else EXIT_FAIL)


def quick_check(preset: str, **params) -> ConditionReport:
    """
    빠른 가정 검사 함수

    Args:
        preset: general, diagonal, z1, z2, z2-diagonal, no-delta, elliptic, elliptic-diagonal
        **params: CheckParams 필드
    """
    return AnisoLevy().check(preset=preset, **params)


def quick_density(alpha: float, t: float = 1.0, half_width: float = 50.0, count: int = 4097) -> GridDensity:
    """빠른 1 차원 안정 밀도 계산"""
    return AnisoLevy().density(alpha, t, half_width, count)


def quick_rate(problem: SdeProblem, seed: int = 0, **params) -> ExperimentReport:
    """빠른 수렴률 측정 (산출물 저장 없음)"""
    return AnisoLevy(seed=seed).rate(problem, **params)
