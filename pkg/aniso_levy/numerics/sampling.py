#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
sampling.py

Lévy 증분 샘플러 - 안정 과정은 정확 샘플링, 절단/이산 측도는 보정된 복합 Poisson 근사
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import special

from ..core.errors import InputError, UnsupportedModelError
from ..core.plan_cache import get_plan_cache
from .levy_models import STABLE_KINDS, LevyModel, ModelKind, levy_density_constant, sphere_area

logger = logging.getLogger(__name__)

DEFAULT_JUMP_CUTOFF = 1e-4
SURROGATE_VARIANCE_FLOOR = 1e-8

# 한 번에 생성할 최대 점프 수 (메모리 상한)
_MAX_JUMPS_PER_CHUNK = 2_000_000
# 이 기대 점프 수를 넘으면 원자별 Poisson 행렬로 샘플링
_DISCRETE_DENSE_THRESHOLD = 64.0


@dataclass(frozen=True)
class RngStream:
    """(seed, stream_id) 로 식별되는 재현 가능한 난수 스트림"""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(sequence))


RngLike = Union[RngStream, np.random.Generator]


def as_generator(rng: RngLike) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    raise InputError(f"expected RngStream or numpy Generator, got {type(rng).__name__}")


def batch_stream(seed: int, grid_index: int, batch_index: int) -> RngStream:
    """그리드 점 g 의 배치 b 가 소유하는 스트림"""
    return RngStream(seed=seed, stream_id=(grid_index << 32) | batch_index)


@dataclass
class _SideTable:
    # (ε, 1] 위 c z^{−1−α} 한쪽 꼬리
    component: int
    sign: float
    c: float
    alpha: float
    rate: float


@dataclass
class _AtomTable:
    component: int
    sizes: np.ndarray
    weights: np.ndarray
    cdf: np.ndarray
    rate: float


@dataclass
class IncrementPlan:
    """
    증분 생성 계획

    정확 샘플링 성분은 근사 데이터를 갖지 않는다. 근사 성분은 cutoff 위 점프를
    복합 Poisson 으로, 그 아래는 보정 drift 와 (선택적) Gaussian 대체로 처리한다.
    """

    model: LevyModel
    exact: Tuple[bool, ...]
    jump_cutoff: Optional[float] = None
    compensator_drift: Optional[np.ndarray] = None
    gaussian_variance: Optional[np.ndarray] = None
    small_jump_abs_mean: Optional[np.ndarray] = None
    sides: List[_SideTable] = field(default_factory=list)
    atoms: List[_AtomTable] = field(default_factory=list)

    def __post_init__(self):
        if all(self.exact):
            if self.jump_cutoff is not None or self.compensator_drift is not None:
                raise InputError("exact plans carry no approximation data")
        elif self.jump_cutoff is not None and not self.jump_cutoff > 0:
            raise InputError(f"jump_cutoff must be positive, got {self.jump_cutoff}")

    @property
    def is_exact(self) -> bool:
        return all(self.exact)


def _validate_alpha(alpha: float, upper: float = 2.0) -> None:
    if not (0.0 < alpha < upper):
        raise InputError(f"alpha={alpha} must lie in (0, {upper:g})")


def sample_sym_stable(alpha: float, scale: float, n: int, rng: RngLike) -> np.ndarray:
    """
    대칭 α-안정 분포 샘플 (Chambers–Mallows–Stuck)

    Args:
        alpha: 안정 지수 (0,2)
        scale: 특성함수 exp(−scale·|ξ|^α) 의 scale
        n: 샘플 수
        rng: 난수 스트림

    Returns:
        n 개의 독립 샘플
    """
    _validate_alpha(alpha)
    if not scale > 0:
        raise InputError(f"scale must be positive, got {scale}")
    gen = as_generator(rng)
    v = gen.uniform(-math.pi / 2.0, math.pi / 2.0, size=n)
    w = gen.standard_exponential(size=n)
    if alpha == 1.0:
        x = np.tan(v)
    else:
        x = (np.sin(alpha * v) / np.cos(v) ** (1.0 / alpha)
             * (np.cos((1.0 - alpha) * v) / w) ** ((1.0 - alpha) / alpha))
    return scale ** (1.0 / alpha) * x


def sample_one_sided_stable(alpha: float, n: int, rng: RngLike) -> np.ndarray:
    """양의 α-안정 샘플 (Laplace 변환 exp(−λ^α), Kanter 표현)"""
    _validate_alpha(alpha, upper=1.0)
    gen = as_generator(rng)
    # (0, π] 에서 뽑아 sin(U) = 0 을 피한다
    u = math.pi * (1.0 - gen.random(size=n))
    w = gen.standard_exponential(size=n)
    return (np.sin(alpha * u) / np.sin(u) ** (1.0 / alpha)
            * (np.sin((1.0 - alpha) * u) / w) ** ((1.0 - alpha) / alpha))


def small_jump_compensation(model: LevyModel, cutoff: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    cutoff 아래 작은 점프의 보정량

    Returns:
        (∫_{cutoff<|z|≤1} z ν(dz), ∫_{|z|≤cutoff} |z|² ν(dz)) 성분별.
        TemperedOneSided 의 추가 유한 측도는 전부 직접 샘플링하므로 포함하지 않는다.
    """
    if not (0.0 < cutoff <= 1.0):
        raise InputError(f"cutoff must lie in (0, 1], got {cutoff}")
    d = model.dimension
    drift = np.zeros(d)
    variance = np.zeros(d)
    kind = model.kind

    if kind in STABLE_KINDS:
        for indices, alpha in model.stable_groups():
            m = len(indices)
            per_axis = (levy_density_constant(m, alpha) * sphere_area(m) / m
                        * cutoff ** (2.0 - alpha) / (2.0 - alpha))
            variance[list(indices)] = per_axis
        return drift, variance

    if kind == ModelKind.TEMPERED_ONE_SIDED:
        for k in range(d):
            for sign, c, alpha in ((1.0, model.c_plus[k], model.alpha_plus[k]),
                                   (-1.0, model.c_minus[k], model.alpha_minus[k])):
                if c == 0.0:
                    continue
                if abs(alpha - 1.0) < 1e-14:
                    drift[k] += sign * c * -math.log(cutoff)
                else:
                    drift[k] += sign * c * (1.0 - cutoff ** (1.0 - alpha)) / (1.0 - alpha)
                variance[k] += c * cutoff ** (2.0 - alpha) / (2.0 - alpha)
        return drift, variance

    if kind == ModelKind.DISCRETE_MEASURE:
        n_max = int(math.floor(1.0 / cutoff + 1e-9))
        n = np.arange(1, n_max + 1, dtype=float)
        for k, alpha in enumerate(model.alphas):
            drift[k] = math.fsum(n ** (alpha - 2.0))
            variance[k] = float(special.zeta(3.0 - alpha, n_max + 1.0))
        return drift, variance

    raise UnsupportedModelError(f"{kind.value} has no jump compensation")


def _small_jump_abs_mean(model: LevyModel, cutoff: float) -> np.ndarray:
    # ∫_{|z|≤cutoff} |z| ν(dz), 발산하면 inf
    out = np.zeros(model.dimension)
    if model.kind == ModelKind.TEMPERED_ONE_SIDED:
        for k in range(model.dimension):
            for c, alpha in ((model.c_plus[k], model.alpha_plus[k]), (model.c_minus[k], model.alpha_minus[k])):
                if c > 0:
                    out[k] += c * cutoff ** (1.0 - alpha) / (1.0 - alpha) if alpha < 1.0 else math.inf
    elif model.kind == ModelKind.DISCRETE_MEASURE:
        n_max = int(math.floor(1.0 / cutoff + 1e-9))
        for k, alpha in enumerate(model.alphas):
            out[k] = float(special.zeta(2.0 - alpha, n_max + 1.0)) if alpha < 1.0 else math.inf
    return out


def compute_increment_plan(model: LevyModel, cutoff: Optional[float] = None) -> IncrementPlan:
    """캐시를 거치지 않는 계획 생성"""
    if not model.is_samplable:
        raise UnsupportedModelError(f"{model.kind.value} has no sampler")
    d = model.dimension
    if model.kind in STABLE_KINDS:
        return IncrementPlan(model=model, exact=(True,) * d)

    if model.kind == ModelKind.DISCRETE_MEASURE and cutoff is None:
        cutoff = 1.0 / model.truncation
    cutoff = DEFAULT_JUMP_CUTOFF if cutoff is None else float(cutoff)

    drift, variance = small_jump_compensation(model, cutoff)
    surrogate = np.where(variance > SURROGATE_VARIANCE_FLOOR, variance, 0.0)
    plan = IncrementPlan(
        model=model,
        exact=(False,) * d,
        jump_cutoff=cutoff,
        compensator_drift=drift,
        gaussian_variance=surrogate if np.any(surrogate > 0) else None,
        small_jump_abs_mean=_small_jump_abs_mean(model, cutoff),
    )

    if model.kind == ModelKind.TEMPERED_ONE_SIDED:
        for k in range(d):
            for sign, c, alpha in ((1.0, model.c_plus[k], model.alpha_plus[k]),
                                   (-1.0, model.c_minus[k], model.alpha_minus[k])):
                if c > 0:
                    rate = c * (cutoff ** (-alpha) - 1.0) / alpha
                    plan.sides.append(_SideTable(component=k, sign=sign, c=c, alpha=alpha, rate=rate))
    else:
        n_max = int(math.floor(1.0 / cutoff + 1e-9))
        n = np.arange(1, n_max + 1, dtype=float)
        for k, alpha in enumerate(model.alphas):
            weights = n ** (alpha - 1.0)
            rate = math.fsum(weights)
            plan.atoms.append(_AtomTable(component=k, sizes=1.0 / n, weights=weights,
                                         cdf=np.cumsum(weights) / rate, rate=rate))

    logger.debug("built increment plan for %s (cutoff=%g, surrogate=%s)",
                 model.kind.value, cutoff, plan.gaussian_variance is not None)
    return plan


def build_increment_plan(model: LevyModel, cutoff: Optional[float] = None) -> IncrementPlan:
    """프로세스 공용 캐시를 통한 계획 조회"""
    return get_plan_cache().load_plan(model, cutoff, compute_increment_plan)


def _compound_poisson(rate: float, dt: float, size: int, draw, gen: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """
    샘플별 점프 합과 절대값 합

    draw(count, gen) 가 점프 크기를 돌려준다.
    """
    totals = np.zeros(size)
    abs_totals = np.zeros(size)
    lam = rate * dt
    counts = gen.poisson(lam, size=size)
    chunk = max(1, int(_MAX_JUMPS_PER_CHUNK / max(lam, 1.0)))
    for start in range(0, size, chunk):
        stop = min(size, start + chunk)
        local = counts[start:stop]
        total = int(local.sum())
        if total == 0:
            continue
        owners = np.repeat(np.arange(stop - start), local)
        jumps = draw(total, gen)
        totals[start:stop] = np.bincount(owners, weights=jumps, minlength=stop - start)
        abs_totals[start:stop] = np.bincount(owners, weights=np.abs(jumps), minlength=stop - start)
    return totals, abs_totals


def _sample_side(side: _SideTable, cutoff: float, dt: float, size: int,
                 gen: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    top = cutoff ** (-side.alpha)

    def draw(count, g):
        # (ε,1] 위 z^{−1−α} 에 비례하는 분포의 역 CDF
        u = g.random(size=count)
        return side.sign * (top - u * (top - 1.0)) ** (-1.0 / side.alpha)

    return _compound_poisson(side.rate, dt, size, draw, gen)


def _sample_atoms(table: _AtomTable, dt: float, size: int,
                  gen: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    lam = table.rate * dt
    if lam <= _DISCRETE_DENSE_THRESHOLD:
        def draw(count, g):
            idx = np.searchsorted(table.cdf, g.random(size=count), side="right")
            return table.sizes[np.minimum(idx, len(table.sizes) - 1)]

        return _compound_poisson(table.rate, dt, size, draw, gen)

    # 원자마다 독립 Poisson 개수
    totals = np.empty(size)
    rows = max(1, _MAX_JUMPS_PER_CHUNK // len(table.sizes))
    for start in range(0, size, rows):
        stop = min(size, start + rows)
        counts = gen.poisson(table.weights * dt, size=(stop - start, len(table.sizes)))
        totals[start:stop] = counts @ table.sizes
    return totals, totals.copy()


def _sample_approximate(plan: IncrementPlan, dt: float, size: int,
                        gen: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    model = plan.model
    d = model.dimension
    out = np.zeros((size, d))
    jump_variation = np.zeros(size)

    for side in plan.sides:
        jumps, abs_jumps = _sample_side(side, plan.jump_cutoff, dt, size, gen)
        out[:, side.component] += jumps
        jump_variation += abs_jumps
    for table in plan.atoms:
        jumps, abs_jumps = _sample_atoms(table, dt, size, gen)
        out[:, table.component] += jumps
        jump_variation += abs_jumps

    if model.kind == ModelKind.TEMPERED_ONE_SIDED and model.extra_rate:
        # 추가 유한 측도: Gaussian 크기 점프를 개별 생성 (대칭이므로 보정 0)
        for k in range(d):
            rate, scale = model.extra_rate[k], model.extra_scale[k]
            if rate == 0.0:
                continue
            jumps, abs_jumps = _compound_poisson(rate, dt, size,
                                                 lambda count, g, s=scale: g.normal(0.0, s, size=count), gen)
            out[:, k] += jumps
            jump_variation += abs_jumps

    out -= dt * plan.compensator_drift
    if plan.gaussian_variance is not None:
        out += gen.standard_normal((size, d)) * np.sqrt(dt * plan.gaussian_variance)
    return out, jump_variation


def _sample_exact(model: LevyModel, dt: float, size: int, gen: np.random.Generator) -> np.ndarray:
    out = np.empty((size, model.dimension))
    for indices, alpha in model.stable_groups():
        idx = list(indices)
        if len(idx) == 1:
            out[:, idx[0]] = sample_sym_stable(alpha, dt, size, gen)
        else:
            # 회전 대칭 블록: Brownian motion 을 (α/2)-안정 시간에 종속
            subordinator = sample_one_sided_stable(alpha / 2.0, size, gen)
            radius = np.sqrt(2.0 * dt ** (2.0 / alpha) * subordinator)
            out[:, idx] = radius[:, None] * gen.standard_normal((size, len(idx)))
    return out


def _validate_dt(dt: float) -> None:
    if not (dt > 0 and math.isfinite(dt)):
        raise InputError(f"time step must be positive and finite, got {dt}")


def sample_increments(model: LevyModel, dt: float, size: int, rng: RngLike,
                      plan: Optional[IncrementPlan] = None) -> np.ndarray:
    """
    길이 dt 구간 증분을 size 개 생성

    Returns:
        (size, d) 행렬
    """
    _validate_dt(dt)
    if size < 0:
        raise InputError(f"size must be nonnegative, got {size}")
    if not model.is_samplable:
        raise UnsupportedModelError(f"{model.kind.value} is analysis-only and cannot be sampled")
    gen = as_generator(rng)
    if model.kind in STABLE_KINDS:
        return _sample_exact(model, dt, size, gen)
    plan = plan or build_increment_plan(model)
    increments, _ = _sample_approximate(plan, dt, size, gen)
    return increments


def sample_increment(model: LevyModel, dt: float, rng: RngLike) -> np.ndarray:
    """단일 증분 (d 벡터)"""
    return sample_increments(model, dt, 1, rng)[0]


def sample_increments_with_jumps(model: LevyModel, dt: float, size: int, rng: RngLike,
                                 plan: Optional[IncrementPlan] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    증분과 점프 변동량 Σ|ΔZ| 를 함께 생성 (복합 Poisson 근사 모델 전용)

    점프 변동량 = cutoff 위 점프 절대값 합 + dt·∫_{|z|≤cutoff}|z|ν(dz)
    """
    _validate_dt(dt)
    if model.kind in STABLE_KINDS or not model.is_samplable:
        raise UnsupportedModelError(f"jump bookkeeping is not available for {model.kind.value}")
    gen = as_generator(rng)
    plan = plan or build_increment_plan(model)
    increments, variation = _sample_approximate(plan, dt, size, gen)
    variation = variation + dt * float(np.sum(plan.small_jump_abs_mean))
    return increments, variation


def sample_path_increments(model: LevyModel, time_grid: Sequence[float], rng: RngLike,
                           replicas: Optional[int] = None) -> np.ndarray:
    """
    시간 그리드 각 구간의 독립 증분

    Returns:
        replicas 가 None 이면 (steps, d), 아니면 (replicas, steps, d)
    """
    grid = np.asarray(time_grid, dtype=float).reshape(-1)
    d = model.dimension
    if grid.size < 2:
        shape = (0, d) if replicas is None else (replicas, 0, d)
        return np.zeros(shape)
    steps = np.diff(grid)
    if np.any(steps <= 0) or not np.all(np.isfinite(grid)):
        raise InputError("time grid must be finite and strictly increasing")

    gen = as_generator(rng)
    count = 1 if replicas is None else replicas
    out = np.empty((count, steps.size, d))
    for j, dt in enumerate(steps):
        out[:, j, :] = sample_increments(model, float(dt), count, gen)
    return out[0] if replicas is None else out
