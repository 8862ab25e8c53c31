#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
config.py

실행 설정 - RunConfig 와 실험별 파라미터 블록 (pydantic, 알 수 없는 필드 거부)
"""

import copy
import logging
import os
from typing import Any, Dict, List, Literal, Mapping, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..numerics.levy_models import LevyModel
from ..numerics.sde import CoefficientSpec, SdeProblem
from .errors import ConfigError
from .utils import load_json_config

logger = logging.getLogger(__name__)

WORKERS_ENV = "ANISO_LEVY_WORKERS"
DEFAULT_WORKERS = 4

CHECK_PRESETS = ("general", "diagonal", "z1", "z2", "z2-diagonal", "no-delta", "elliptic", "elliptic-diagonal")


def default_workers() -> int:
    """환경 변수 ANISO_LEVY_WORKERS, 없으면 4"""
    raw = os.environ.get(WORKERS_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_WORKERS
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV}={raw!r} is not an integer", path=("workers",))
    if value < 1:
        raise ConfigError(f"{WORKERS_ENV} must be positive, got {value}", path=("workers",))
    return value


class _Params(BaseModel):
    model_config = ConfigDict(extra="forbid")


# --- 실험별 파라미터 ---

class CheckParams(_Params):
    preset: Literal[CHECK_PRESETS] = "general"
    alphas: List[float]
    gamma: Optional[float] = None
    delta: Optional[float] = None
    gammas: Optional[List[float]] = None
    deltas: Optional[List[float]] = None
    beta: float = 1.0
    chi: float = 0.5
    betas: Optional[List[float]] = None
    chis: Optional[List[float]] = None
    zero_drift: bool = False


class SimulateParams(_Params):
    t: float = Field(default=1.0, gt=0.0)
    steps: int = Field(default=256, ge=1)
    replicas: int = Field(default=10_000, ge=1)
    path: bool = False
    output_name: str = "samples.bin"


class A1ScanParams(_Params):
    axis: int = Field(default=0, ge=0)
    h_grid: List[float] = [1e-3]
    t_grid: List[float] = [0.5, 0.2, 0.1, 0.05]
    half_width: float = Field(default=200.0, gt=0.0)
    expected_constant: Optional[float] = None
    tolerance: float = Field(default=0.05, gt=0.0)


class RateParams(_Params):
    t: float = Field(default=1.0, gt=0.0)
    eta: Optional[float] = None
    eps_grid: List[float] = [2.0 ** -k for k in range(10, 3, -1)]
    replicas: int = Field(default=100_000, ge=1)
    steps_per_unit: int = Field(default=4096, ge=1)
    min_window_steps: int = Field(default=64, ge=1)
    tolerance: float = Field(default=0.1, gt=0.0)
    batch_size: int = Field(default=2048, ge=1)


class BesovParams(_Params):
    lam: Optional[float] = None
    t_grid: List[float] = [2.0 ** -k for k in range(8, -1, -1)]
    replicas: int = Field(default=100_000, ge=1)
    radius_factor: float = Field(default=0.1, gt=0.0)
    steps_per_unit: int = Field(default=256, ge=1)
    max_nodes_per_axis: int = Field(default=1024, ge=4)
    tolerance: float = Field(default=0.1, gt=0.0)
    oracle_tolerance: float = Field(default=0.1, gt=0.0)
    jackknife_groups: int = Field(default=8, ge=2)
    batch_size: int = Field(default=2048, ge=1)


class MomentParams(_Params):
    eta: float
    gamma: float
    delta: float
    integrand: CoefficientSpec = Field(default_factory=lambda: CoefficientSpec.constant(1.0))
    window_grid: List[float] = [2.0 ** -k for k in range(10, 3, -1)]
    replicas: int = Field(default=100_000, ge=1)
    substeps: int = Field(default=16, ge=1)
    tolerance: float = Field(default=0.1, gt=0.0)
    closed_form_tolerance: float = Field(default=0.05, gt=0.0)
    batch_size: int = Field(default=2048, ge=1)


class DensityParams(_Params):
    alpha: float = Field(gt=0.0, le=2.0)
    t: float = Field(default=1.0, gt=0.0)
    half_width: float = Field(default=50.0, gt=0.0)
    count: int = Field(default=4097, ge=3)
    output_name: str = "density.csv"


PARAMS_BY_ID = {
    "check": CheckParams,
    "simulate": SimulateParams,
    "a1-scan": A1ScanParams,
    "rate": RateParams,
    "besov": BesovParams,
    "moments": MomentParams,
    "density": DensityParams,
}

ParamsType = Union[CheckParams, SimulateParams, A1ScanParams, RateParams, BesovParams, MomentParams, DensityParams]


class ExperimentSpec(BaseModel):
    """실험 id 와 파라미터 블록"""

    model_config = ConfigDict(extra="forbid")

    id: Literal[tuple(PARAMS_BY_ID)]
    params: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _validate_params(self) -> "ExperimentSpec":
        # 파라미터 블록을 계산 전에 검증
        try:
            self.typed_params()
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(p) for p in ("params",) + tuple(first.get("loc", ())))
            raise ValueError(f"{location}: {first.get('msg')}") from None
        return self

    def typed_params(self) -> ParamsType:
        return PARAMS_BY_ID[self.id].model_validate(self.params)


class RunConfig(BaseModel):
    """실행 설정 문서"""

    model_config = ConfigDict(extra="forbid")

    model: Optional[LevyModel] = None
    problem: Optional[SdeProblem] = None
    experiment: ExperimentSpec
    output_dir: str = "./output"
    seed: int = Field(default=0, ge=0)
    workers: int = Field(default_factory=default_workers, ge=1)
    plot: bool = False

    @model_validator(mode="after")
    def _validate_models(self) -> "RunConfig":
        if self.model is not None and self.problem is not None and self.model != self.problem.model:
            raise ValueError("'model' and 'problem.model' disagree; give one of them")
        return self

    @property
    def params(self) -> ParamsType:
        return self.experiment.typed_params()

    @property
    def levy_model(self) -> Optional[LevyModel]:
        if self.model is not None:
            return self.model
        return None if self.problem is None else self.problem.model


def merge_overrides(base: Mapping[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
    """중첩 딕셔너리 병합 - None 값은 덮어쓰지 않는다"""
    merged = copy.deepcopy(dict(base))
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, Mapping):
            current = merged.get(key)
            merged[key] = merge_overrides(current if isinstance(current, Mapping) else {}, value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _first_error(error: ValidationError) -> ConfigError:
    first = error.errors()[0]
    return ConfigError(first.get("msg", str(error)), path=first.get("loc", ()))


def validate_run_config(data: Mapping[str, Any]) -> RunConfig:
    """
    딕셔너리를 RunConfig 로 검증

    Raises:
        ConfigError: 첫 번째 위반 위치를 경로로 포함
    """
    try:
        return RunConfig.model_validate(dict(data))
    except ValidationError as e:
        raise _first_error(e) from e


def load_run_config(config_path: Optional[str] = None,
                    overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """
    JSON 설정 로드 후 플래그 값을 병합해 한 번에 검증

    Args:
        config_path: RunConfig JSON 경로 (없으면 플래그만 사용)
        overrides: CLI 플래그에서 만든 부분 문서
    """
    data: Dict[str, Any] = {}
    if config_path:
        data = load_json_config(config_path)
        logger.info("Config loaded from: %s", config_path)
    if overrides:
        data = merge_overrides(data, overrides)
    return validate_run_config(data)
