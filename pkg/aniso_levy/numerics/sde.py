#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
sde.py

Lévy 구동 SDE dX = b(X)dt + σ(X−)dZ 시뮬레이션과 한 단계 근사 X^ε
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.errors import InputError, RegimeError
from .levy_models import LevyModel, small_jump_mean
from .sampling import RngLike, as_generator, sample_increments

logger = logging.getLogger(__name__)

DEFAULT_STEPS_PER_UNIT = 4096
DEFAULT_MIN_WINDOW_STEPS = 64
MAX_FROZEN_STEPS = 1_000_000


class CoefficientFamily(str, Enum):
    CONSTANT = "constant"
    AFFINE_CLAMPED = "affine_clamped"
    HOLDER_BUMP = "holder_bump"
    SMOOTH_BOUNDED = "smooth_bounded"


class CoefficientSpec(BaseModel):
    """
    해석적으로 알려진 (Hölder 지수, 상한) 을 갖는 스칼라 계수 족

    - constant: value
    - affine_clamped: clip(c0 + c1·x[axis], −clamp, clamp)
    - holder_bump: offset + amplitude·min(|x[axis] − center|^exponent, cap)
    - smooth_bounded: c0 + c1/(1 + |x − center|²)
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    family: CoefficientFamily
    declared_exponent: float = Field(ge=0.0, le=1.0)
    value: float = 0.0
    c0: float = 0.0
    c1: float = 0.0
    clamp: float = Field(default=1.0, gt=0.0)
    axis: int = Field(default=0, ge=0)
    center: float = 0.0
    amplitude: float = 1.0
    exponent: float = Field(default=0.5, gt=0.0, le=1.0)
    cap: float = Field(default=1.0, gt=0.0)
    offset: float = 0.0

    @model_validator(mode="after")
    def _validate_exponent(self) -> "CoefficientSpec":
        if self.declared_exponent > self.analytic_exponent + 1e-12:
            raise ValueError(f"declared_exponent={self.declared_exponent} exceeds the "
                             f"{self.family.value} family's exponent {self.analytic_exponent}")
        return self

    @classmethod
    def constant(cls, value: float, declared_exponent: float = 1.0) -> "CoefficientSpec":
        return cls(family=CoefficientFamily.CONSTANT, value=value, declared_exponent=declared_exponent)

    @property
    def analytic_exponent(self) -> float:
        if self.family == CoefficientFamily.HOLDER_BUMP:
            return self.exponent
        return 1.0

    @property
    def bound(self) -> float:
        if self.family == CoefficientFamily.CONSTANT:
            return abs(self.value)
        if self.family == CoefficientFamily.AFFINE_CLAMPED:
            return self.clamp
        if self.family == CoefficientFamily.HOLDER_BUMP:
            return abs(self.offset) + abs(self.amplitude) * self.cap
        return abs(self.c0) + abs(self.c1)

    @property
    def is_constant(self) -> bool:
        return self.family == CoefficientFamily.CONSTANT

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """x: (n, d) -> (n,)"""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        n, d = x.shape
        if self.family == CoefficientFamily.CONSTANT:
            return np.full(n, self.value)
        if self.axis >= d:
            raise InputError(f"coefficient axis {self.axis} out of range for dimension {d}")
        if self.family == CoefficientFamily.AFFINE_CLAMPED:
            return np.clip(self.c0 + self.c1 * x[:, self.axis], -self.clamp, self.clamp)
        if self.family == CoefficientFamily.HOLDER_BUMP:
            bump = np.minimum(np.abs(x[:, self.axis] - self.center) ** self.exponent, self.cap)
            return self.offset + self.amplitude * bump
        return self.c0 + self.c1 / (1.0 + np.sum((x - self.center) ** 2, axis=1))


class Structure(str, Enum):
    GENERAL = "general"
    DIAGONAL = "diagonal"


class SdeProblem(BaseModel):
    """SDE 문제 명세 (계수, 구동 잡음, 초기값, 모멘트 지수)"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    dimension: int = Field(gt=0)
    model: LevyModel
    x0: Tuple[float, ...]
    drift: Tuple[CoefficientSpec, ...]
    diffusion: Tuple[CoefficientSpec, ...] = ()
    diffusion_matrix: Tuple[Tuple[CoefficientSpec, ...], ...] = ()
    structure: Structure = Structure.GENERAL
    gamma: Optional[float] = None
    delta: Optional[float] = None
    gammas: Tuple[float, ...] = ()
    deltas: Tuple[float, ...] = ()

    @model_validator(mode="after")
    def _validate_shapes(self) -> "SdeProblem":
        d = self.dimension
        if self.model.dimension != d:
            raise ValueError(f"model dimension {self.model.dimension} != problem dimension {d}")
        if len(self.x0) != d or len(self.drift) != d:
            raise ValueError(f"x0 and drift need {d} entries")
        if self.structure == Structure.DIAGONAL:
            if len(self.diffusion) != d or self.diffusion_matrix:
                raise ValueError("diagonal structure stores the diffusion as d scalars in 'diffusion'")
            if self.gammas or self.deltas:
                if len(self.gammas) != d or len(self.deltas) != d:
                    raise ValueError(f"gammas and deltas need {d} entries")
                for g, dl in zip(self.gammas, self.deltas):
                    if not (0.0 < dl <= g <= 2.0):
                        raise ValueError(f"need 0 < delta_k <= gamma_k <= 2, got ({g}, {dl})")
        else:
            if self.diffusion or len(self.diffusion_matrix) != d or any(len(r) != d for r in self.diffusion_matrix):
                raise ValueError("general structure needs a d x d 'diffusion_matrix'")
            if (self.gamma is None) != (self.delta is None):
                raise ValueError("gamma and delta must be given together")
            if self.gamma is not None and not (0.0 < self.delta <= self.gamma <= 2.0):
                raise ValueError(f"need 0 < delta <= gamma <= 2, got ({self.gamma}, {self.delta})")
        for spec in self.diffusion_specs():
            if not (0.0 < spec.declared_exponent < 1.0):
                raise ValueError("diffusion declared exponents must lie in (0, 1)")
        return self

    # --- 구조 ---

    def diffusion_specs(self) -> Tuple[CoefficientSpec, ...]:
        if self.structure == Structure.DIAGONAL:
            return self.diffusion
        return tuple(spec for row in self.diffusion_matrix for spec in row)

    @property
    def beta(self) -> float:
        return min(spec.declared_exponent for spec in self.drift)

    @property
    def chi(self) -> float:
        return min(spec.declared_exponent for spec in self.diffusion_specs())

    @property
    def betas(self) -> Tuple[float, ...]:
        return tuple(spec.declared_exponent for spec in self.drift)

    @property
    def chis(self) -> Tuple[float, ...]:
        if self.structure != Structure.DIAGONAL:
            return (self.chi,) * self.dimension
        return tuple(spec.declared_exponent for spec in self.diffusion)

    def is_constant(self) -> bool:
        return all(spec.is_constant for spec in self.drift + self.diffusion_specs())

    def has_zero_drift(self) -> bool:
        return all(spec.is_constant and spec.value == 0.0 for spec in self.drift)

    # --- 계수 평가 ---

    def drift_values(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        return np.stack([spec.evaluate(x) for spec in self.drift], axis=1)

    def sigma_matrices(self, x: np.ndarray) -> np.ndarray:
        """(n, d, d) σ(x)"""
        x = np.atleast_2d(x)
        n, d = x.shape
        if self.structure == Structure.DIAGONAL:
            out = np.zeros((n, d, d))
            idx = np.arange(d)
            out[:, idx, idx] = np.stack([spec.evaluate(x) for spec in self.diffusion], axis=1)
            return out
        return np.stack([np.stack([spec.evaluate(x) for spec in row], axis=1)
                         for row in self.diffusion_matrix], axis=1)

    def apply_diffusion(self, x: np.ndarray, dz: np.ndarray) -> np.ndarray:
        """σ(x)·dz, 행 단위"""
        x = np.atleast_2d(x)
        dz = np.atleast_2d(dz)
        if self.structure == Structure.DIAGONAL:
            return np.stack([spec.evaluate(x) for spec in self.diffusion], axis=1) * dz
        return np.einsum("nij,nj->ni", self.sigma_matrices(x), dz)


@dataclass
class OneStepResult:
    """한 단계 근사 결과 - 행마다 하나의 replica"""

    x_exact_surrogate: Optional[np.ndarray]
    x_eps: np.ndarray
    u_eps: np.ndarray
    epsilon: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise InputError(f"epsilon must be positive, got {self.epsilon}")


def check_holder(spec: CoefficientSpec, exponent: Optional[float] = None, dimension: int = 1,
                 rng: RngLike = None, pairs: int = 2000) -> float:
    """
    무작위 점 쌍에서 Hölder 상수 추정

    max |f(x)−f(y)|/|x−y|^e 를 돌려준다. 선언한 지수가 족의 지수를 넘으면
    짧은 거리 쌍에서 값이 커진다.
    """
    exponent = spec.declared_exponent if exponent is None else exponent
    dimension = max(dimension, spec.axis + 1)
    gen = as_generator(rng) if rng is not None else np.random.default_rng(0)

    x = spec.center + gen.uniform(-2.0, 2.0, size=(pairs, dimension))
    # 절반은 특이점(center) 바로 옆에 배치
    half = pairs // 2
    radii = 10.0 ** gen.uniform(-6.0, 0.0, size=pairs)
    x[:half, spec.axis] = spec.center + radii[:half] * gen.uniform(-1.0, 1.0, size=half)
    direction = gen.standard_normal((pairs, dimension))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    y = x + radii[:, None] * direction

    diff = np.abs(spec.evaluate(x) - spec.evaluate(y))
    dist = np.linalg.norm(x - y, axis=1)
    if exponent == 0.0:
        return float(diff.max())
    return float(np.max(diff / dist ** exponent))


def drift_correction(problem: SdeProblem) -> Callable[[np.ndarray], np.ndarray]:
    """
    보정 drift b̃(x) = b(x) − σ(x)∫_{|z|≤1} z ν(dz)

    대각 구조에서는 γ_j < 1 인 성분만 보정한다.
    """
    mean = small_jump_mean(problem.model)
    if problem.structure == Structure.DIAGONAL:
        if not problem.gammas:
            raise InputError("diagonal drift correction needs per-component gammas")
        mask = np.array([g < 1.0 for g in problem.gammas])
    else:
        mask = np.ones(problem.dimension, dtype=bool)

    if np.any(~np.isfinite(mean[mask])):
        bad = [int(k) for k in np.flatnonzero(mask & ~np.isfinite(mean))]
        raise RegimeError(f"small-jump first moment diverges for components {bad}; "
                          "drift correction is undefined")
    correction = np.where(mask, mean, 0.0)

    if not np.any(correction):
        return problem.drift_values

    def corrected(x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        return problem.drift_values(x) - problem.apply_diffusion(x, np.broadcast_to(correction, x.shape))

    return corrected


def _euler(problem: SdeProblem, state: np.ndarray, increments: np.ndarray, dt: float) -> np.ndarray:
    # increments: (n, steps, d)
    x = state.copy()
    for j in range(increments.shape[1]):
        x = x + problem.drift_values(x) * dt + problem.apply_diffusion(x, increments[:, j, :])
    return x


def simulate_endpoint(problem: SdeProblem, t: float, steps: int, rng: RngLike,
                      replicas: Optional[int] = None) -> np.ndarray:
    """
    균일 그리드 Euler 로 X(t) 계산

    Returns:
        replicas 가 None 이면 (d,), 아니면 (replicas, d)
    """
    if steps < 1:
        raise InputError(f"steps must be >= 1, got {steps}")
    if not t > 0:
        raise InputError(f"t must be positive, got {t}")
    gen = as_generator(rng)
    n = 1 if replicas is None else replicas
    dt = t / steps
    x = np.tile(np.asarray(problem.x0, dtype=float), (n, 1))
    for _ in range(steps):
        dz = sample_increments(problem.model, dt, n, gen)
        x = x + problem.drift_values(x) * dt + problem.apply_diffusion(x, dz)
    return x[0] if replicas is None else x


def simulate_path(problem: SdeProblem, t: float, steps: int, rng: RngLike) -> np.ndarray:
    """균일 그리드 Euler 경로 (steps + 1, d), 첫 행은 x0"""
    if steps < 1:
        raise InputError(f"steps must be >= 1, got {steps}")
    if not t > 0:
        raise InputError(f"t must be positive, got {t}")
    gen = as_generator(rng)
    dt = t / steps
    path = np.empty((steps + 1, problem.dimension))
    path[0] = problem.x0
    for j in range(steps):
        x = path[j:j + 1]
        dz = sample_increments(problem.model, dt, 1, gen)
        path[j + 1] = (x + problem.drift_values(x) * dt + problem.apply_diffusion(x, dz))[0]
    return path


def _check_epsilon(t: float, epsilon: float) -> None:
    if not (0.0 < epsilon < min(1.0, t)):
        raise InputError(f"epsilon={epsilon} must lie in (0, min(1, t={t}))")


def _as_rows(state: np.ndarray) -> Tuple[np.ndarray, bool]:
    state = np.asarray(state, dtype=float)
    return np.atleast_2d(state), state.ndim == 1


def _window_total(window_increments: np.ndarray, rows: int) -> np.ndarray:
    w = np.asarray(window_increments, dtype=float)
    if w.ndim == 2:
        w = w[None, :, :]
    if w.shape[0] != rows:
        raise InputError(f"window increments hold {w.shape[0]} replicas, state holds {rows}")
    return w.sum(axis=1)


def frozen_ode(drift: Callable[[np.ndarray], np.ndarray], state: np.ndarray, epsilon: float, tau: float) -> np.ndarray:
    """
    b̃(W(s_τ)) 를 고정한 조각별 ODE 의 정확한 적분

    τ 간격 K = ⌊ε/τ⌋ 단계 후 나머지 구간 한 단계.
    """
    steps = int(math.floor(epsilon / tau + 1e-12))
    if steps > MAX_FROZEN_STEPS:
        raise InputError(f"frozen ODE needs {steps} steps (epsilon={epsilon}, tau={tau})")
    w = np.array(state, dtype=float, copy=True)
    for _ in range(steps):
        w = w + tau * drift(w)
    remainder = epsilon - steps * tau
    if remainder > 1e-15 * epsilon:
        w = w + remainder * drift(w)
    return w


def one_step_ge1(problem: SdeProblem, t: float, epsilon: float, state: np.ndarray,
                 increment: np.ndarray) -> OneStepResult:
    """γ ∈ [1,2]: U^ε = X + b(X)ε, X^ε = U^ε + σ(X)ΔZ"""
    _check_epsilon(t, epsilon)
    x, single = _as_rows(state)
    dz = np.atleast_2d(np.asarray(increment, dtype=float))
    u = x + problem.drift_values(x) * epsilon
    x_eps = u + problem.apply_diffusion(x, dz)
    if single:
        return OneStepResult(None, x_eps[0], u[0], epsilon)
    return OneStepResult(None, x_eps, u, epsilon)


def _lt1_rho(problem: SdeProblem) -> float:
    if problem.structure == Structure.DIAGONAL:
        return min(min(b, c) for b, c in zip(problem.betas, problem.chis))
    return min(problem.beta, problem.chi)


def one_step_lt1(problem: SdeProblem, t: float, epsilon: float, state: np.ndarray,
                 window_increments: np.ndarray) -> OneStepResult:
    """
    γ ∈ (0,1): 보정 drift 의 고정 ODE 해 W^ε 를 사용

    τ = ε^{1/(1−β∧χ)}, U^ε = W^ε + εσ(X)∫_{|z|≤1}zν(dz), X^ε = U^ε + σ(X)ΔZ
    """
    _check_epsilon(t, epsilon)
    if problem.gamma is None or problem.gamma >= 1.0:
        raise RegimeError(f"one_step_lt1 needs gamma in (0, 1), got {problem.gamma}")
    rho = _lt1_rho(problem)
    if rho >= 1.0:
        raise RegimeError("beta ∧ chi = 1 leaves the ODE step tau undefined")

    x, single = _as_rows(state)
    corrected = drift_correction(problem)
    tau = epsilon ** (1.0 / (1.0 - rho))
    w = frozen_ode(corrected, x, epsilon, tau)
    mean = np.broadcast_to(small_jump_mean(problem.model), x.shape)
    u = w + epsilon * problem.apply_diffusion(x, mean)
    x_eps = u + problem.apply_diffusion(x, _window_total(window_increments, x.shape[0]))
    if single:
        return OneStepResult(None, x_eps[0], u[0], epsilon)
    return OneStepResult(None, x_eps, u, epsilon)


def one_step_diagonal(problem: SdeProblem, t: float, epsilon: float, state: np.ndarray,
                      window_increments: np.ndarray) -> OneStepResult:
    """
    대각 구조: γ_k ≥ 1 성분은 Euler 고정, γ_k < 1 성분은 공유 W^ε 기반 갱신
    """
    _check_epsilon(t, epsilon)
    if problem.structure != Structure.DIAGONAL:
        raise InputError("one_step_diagonal needs a diagonal problem")
    if not problem.gammas:
        raise InputError("one_step_diagonal needs per-component gammas")

    x, single = _as_rows(state)
    low = np.array([g < 1.0 for g in problem.gammas])
    u = x + problem.drift_values(x) * epsilon

    if np.any(low):
        rho = _lt1_rho(problem)
        if rho >= 1.0:
            raise RegimeError("min_j(beta_j ∧ chi_j) = 1 leaves the ODE step tau undefined")
        corrected = drift_correction(problem)
        tau = epsilon ** (1.0 / (1.0 - rho))
        w = frozen_ode(corrected, x, epsilon, tau)
        mean = np.where(low, small_jump_mean(problem.model), 0.0)
        u_low = w + epsilon * problem.apply_diffusion(x, np.broadcast_to(mean, x.shape))
        u = np.where(low, u_low, u)

    x_eps = u + problem.apply_diffusion(x, _window_total(window_increments, x.shape[0]))
    if single:
        return OneStepResult(None, x_eps[0], u[0], epsilon)
    return OneStepResult(None, x_eps, u, epsilon)


def snap_epsilon(t: float, epsilon: float, steps_per_unit: int) -> Tuple[float, float, int]:
    """
    t − ε 를 미세 그리드에 맞춘다

    Returns:
        (조정된 ε, 그리드 간격, t − ε 까지 단계 수)
    """
    _check_epsilon(t, epsilon)
    dt_ref = 1.0 / steps_per_unit
    for _ in range(60):
        k = int(round((t - epsilon) / dt_ref))
        snapped = t - k * dt_ref
        if k >= 1 and 0.0 < snapped < min(1.0, t) and epsilon >= dt_ref:
            if abs(snapped - epsilon) > 1e-15:
                logger.debug("snapped epsilon %g -> %g (grid %g)", epsilon, snapped, dt_ref)
            return snapped, dt_ref, k
        dt_ref /= 2.0
    raise InputError(f"cannot place t - epsilon on a grid for t={t}, epsilon={epsilon}")


def couple_one_step(problem: SdeProblem, t: float, epsilon: float, rng: RngLike, replicas: int = 1,
                    steps_per_unit: int = DEFAULT_STEPS_PER_UNIT,
                    min_window_steps: int = DEFAULT_MIN_WINDOW_STEPS) -> OneStepResult:
    """
    정확 대체 해와 X^ε 를 같은 잡음으로 결합해 계산

    (t−ε, t] 구간 증분은 미세 Euler 와 한 단계 근사가 공유한다.
    """
    epsilon, dt_ref, pre_steps = snap_epsilon(t, epsilon, steps_per_unit)
    gen = as_generator(rng)
    d = problem.dimension

    x = np.tile(np.asarray(problem.x0, dtype=float), (replicas, 1))
    for _ in range(pre_steps):
        dz = sample_increments(problem.model, dt_ref, replicas, gen)
        x = x + problem.drift_values(x) * dt_ref + problem.apply_diffusion(x, dz)

    window_steps = max(min_window_steps, int(math.ceil(epsilon / dt_ref - 1e-9)))
    h = epsilon / window_steps
    window = np.empty((replicas, window_steps, d))
    for j in range(window_steps):
        window[:, j, :] = sample_increments(problem.model, h, replicas, gen)
    exact = _euler(problem, x, window, h)

    if problem.structure == Structure.DIAGONAL:
        result = one_step_diagonal(problem, t, epsilon, x, window)
    elif problem.gamma is None:
        raise InputError("general problems need gamma/delta to choose the approximation regime")
    elif problem.gamma >= 1.0:
        result = one_step_ge1(problem, t, epsilon, x, window.sum(axis=1))
    else:
        result = one_step_lt1(problem, t, epsilon, x, window)
    result.x_exact_surrogate = exact
    return result


def stochastic_integral(integrand: CoefficientSpec, model: LevyModel, delta: float, substeps: int,
                        rng: RngLike, replicas: int, compensate: bool = False) -> np.ndarray:
    """
    좌측점 Itô 합으로 ∫_0^Δ H(Z_{u−}) dZ_u 추정

    compensate=True 이면 Y = Z + t∫_{|z|≤1}zν(dz) 에 대해 적분한다.

    Returns:
        (replicas, d)
    """
    if not delta > 0 or substeps < 1:
        raise InputError("need delta > 0 and substeps >= 1")
    gen = as_generator(rng)
    d = model.dimension
    h = delta / substeps
    shift = small_jump_mean(model) * h if compensate else np.zeros(d)
    if not np.all(np.isfinite(shift)):
        raise RegimeError("compensated integral needs a finite small-jump first moment")

    z = np.zeros((replicas, d))
    total = np.zeros((replicas, d))
    for _ in range(substeps):
        dz = sample_increments(model, h, replicas, gen)
        total += integrand.evaluate(z)[:, None] * (dz + shift)
        z += dz
    return total
