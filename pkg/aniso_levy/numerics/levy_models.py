#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
levy_models.py

구동 Lévy 과정 카탈로그 - 심볼 계산, Lévy 측도 적분, 비등방성, 평활 스케일

심볼 규약: Ψ(ξ) = ∫ (1 + iξ·z 1_{|z|≤1} − e^{iξ·z}) ν(dz), E[e^{iξ·Z(t)}] = e^{−tΨ(ξ)}.
안정 과정은 성분(블록)마다 exp(−t|ξ|^α) 로 정규화한다.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import integrate, optimize, special

from ..core.errors import InputError, NumericError, UnboundedSearchError, UnsupportedModelError

logger = logging.getLogger(__name__)

QUAD_EPSABS = 1e-10
QUAD_EPSREL = 1e-8
DEFAULT_TRUNCATION = 10_000

# 직접 적분과 진동 적분(QAWF)의 경계
_DIRECT_LIMIT = 50.0
_DISCRETE_MIN_HEAD = 1000
_DISCRETE_MAX_HEAD = 10_000_000
_SEARCH_LIMIT = 1e15


class ModelKind(str, Enum):
    ISOTROPIC_STABLE = "isotropic_stable"
    COMPONENT_STABLE = "component_stable"
    BLOCK_STABLE = "block_stable"
    TEMPERED_ONE_SIDED = "tempered_one_sided"
    DISCRETE_MEASURE = "discrete_measure"
    SUBORDINATE_BM = "subordinate_bm"


STABLE_KINDS = (ModelKind.ISOTROPIC_STABLE, ModelKind.COMPONENT_STABLE, ModelKind.BLOCK_STABLE)


def _check_index(value: float, label: str) -> None:
    if not (0.0 < value < 2.0) or not math.isfinite(value):
        raise ValueError(f"{label}={value} must lie in (0, 2)")


class LevyModel(BaseModel):
    """
    구동 잡음 명세

    kind 태그와 평평한 수치 필드로 JSON 직렬화된다. 해당 kind 에서 쓰지 않는
    필드는 비어 있어야 한다.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: ModelKind
    dimension: int = Field(gt=0)
    alphas: Tuple[float, ...] = ()
    blocks: Tuple[Tuple[int, ...], ...] = ()
    c_plus: Tuple[float, ...] = ()
    c_minus: Tuple[float, ...] = ()
    alpha_plus: Tuple[float, ...] = ()
    alpha_minus: Tuple[float, ...] = ()
    extra_rate: Tuple[float, ...] = ()
    extra_scale: Tuple[float, ...] = ()
    truncation: int = Field(default=DEFAULT_TRUNCATION, ge=1)
    betas: Tuple[float, ...] = ()

    @model_validator(mode="after")
    def _validate_kind(self) -> "LevyModel":
        d = self.dimension
        kind = self.kind
        used = {
            ModelKind.ISOTROPIC_STABLE: {"alphas"},
            ModelKind.COMPONENT_STABLE: {"alphas"},
            ModelKind.BLOCK_STABLE: {"alphas", "blocks"},
            ModelKind.TEMPERED_ONE_SIDED: {"c_plus", "c_minus", "alpha_plus", "alpha_minus",
                                           "extra_rate", "extra_scale"},
            ModelKind.DISCRETE_MEASURE: {"alphas"},
            ModelKind.SUBORDINATE_BM: {"alphas", "betas"},
        }[kind]
        for name in ("alphas", "blocks", "c_plus", "c_minus", "alpha_plus", "alpha_minus",
                     "extra_rate", "extra_scale", "betas"):
            if name not in used and getattr(self, name):
                raise ValueError(f"field '{name}' is not used by kind {kind.value}")

        if kind == ModelKind.ISOTROPIC_STABLE:
            if len(self.alphas) != 1:
                raise ValueError("isotropic_stable takes exactly one alpha")
        elif kind == ModelKind.BLOCK_STABLE:
            if not self.blocks or len(self.blocks) != len(self.alphas):
                raise ValueError("block_stable needs one alpha per block")
            flat = sorted(i for block in self.blocks for i in block)
            if flat != list(range(d)) or any(len(b) == 0 for b in self.blocks):
                raise ValueError(f"blocks must partition {{0, ..., {d - 1}}}")
        elif kind == ModelKind.TEMPERED_ONE_SIDED:
            for name in ("c_plus", "c_minus", "alpha_plus", "alpha_minus"):
                if len(getattr(self, name)) != d:
                    raise ValueError(f"{name} needs {d} entries")
            if any(c < 0 for c in self.c_plus + self.c_minus):
                raise ValueError("c_plus/c_minus must be nonnegative")
            for k, (ap, am) in enumerate(zip(self.alpha_plus, self.alpha_minus)):
                _check_index(ap, f"alpha_plus[{k}]")
                _check_index(am, f"alpha_minus[{k}]")
            if self.extra_rate or self.extra_scale:
                if len(self.extra_rate) != d or len(self.extra_scale) != d:
                    raise ValueError("extra_rate/extra_scale need one entry per component")
                if any(r < 0 for r in self.extra_rate) or any(s <= 0 for s in self.extra_scale):
                    raise ValueError("extra_rate must be >= 0 and extra_scale > 0")
        else:
            if len(self.alphas) != d:
                raise ValueError(f"{kind.value} needs {d} alphas")

        for k, alpha in enumerate(self.alphas):
            _check_index(alpha, f"alphas[{k}]")

        if kind == ModelKind.SUBORDINATE_BM:
            if len(self.betas) != d:
                raise ValueError(f"subordinate_bm needs {d} betas")
            for k, (alpha, beta) in enumerate(zip(self.alphas, self.betas)):
                if not (-alpha < beta < 2.0 - alpha):
                    raise ValueError(f"betas[{k}]={beta} must lie in (-alpha, 2 - alpha)")
        return self

    # --- 생성자 ---

    @classmethod
    def isotropic_stable(cls, alpha: float, dimension: int) -> "LevyModel":
        return cls(kind=ModelKind.ISOTROPIC_STABLE, dimension=dimension, alphas=(alpha,))

    @classmethod
    def component_stable(cls, alphas: Sequence[float]) -> "LevyModel":
        return cls(kind=ModelKind.COMPONENT_STABLE, dimension=len(alphas), alphas=tuple(alphas))

    @classmethod
    def block_stable(cls, blocks: Sequence[Sequence[int]], alphas: Sequence[float]) -> "LevyModel":
        dimension = sum(len(b) for b in blocks)
        return cls(kind=ModelKind.BLOCK_STABLE, dimension=dimension,
                   blocks=tuple(tuple(b) for b in blocks), alphas=tuple(alphas))

    @classmethod
    def tempered_one_sided(cls, c_plus: Sequence[float], c_minus: Sequence[float],
                           alpha_plus: Sequence[float], alpha_minus: Sequence[float],
                           extra_rate: Sequence[float] = (), extra_scale: Sequence[float] = ()) -> "LevyModel":
        return cls(kind=ModelKind.TEMPERED_ONE_SIDED, dimension=len(c_plus),
                   c_plus=tuple(c_plus), c_minus=tuple(c_minus),
                   alpha_plus=tuple(alpha_plus), alpha_minus=tuple(alpha_minus),
                   extra_rate=tuple(extra_rate), extra_scale=tuple(extra_scale))

    @classmethod
    def discrete_measure(cls, alphas: Sequence[float], truncation: int = DEFAULT_TRUNCATION) -> "LevyModel":
        return cls(kind=ModelKind.DISCRETE_MEASURE, dimension=len(alphas),
                   alphas=tuple(alphas), truncation=truncation)

    @classmethod
    def subordinate_bm(cls, alphas: Sequence[float], betas: Sequence[float]) -> "LevyModel":
        return cls(kind=ModelKind.SUBORDINATE_BM, dimension=len(alphas),
                   alphas=tuple(alphas), betas=tuple(betas))

    # --- 구조 ---

    @property
    def is_samplable(self) -> bool:
        return self.kind != ModelKind.SUBORDINATE_BM

    @property
    def is_symmetric(self) -> bool:
        if self.kind == ModelKind.DISCRETE_MEASURE:
            return False
        if self.kind == ModelKind.TEMPERED_ONE_SIDED:
            return self.c_plus == self.c_minus and self.alpha_plus == self.alpha_minus
        return True

    def stable_groups(self) -> List[Tuple[Tuple[int, ...], float]]:
        """안정 모델의 (성분 인덱스, α) 블록 목록"""
        if self.kind == ModelKind.ISOTROPIC_STABLE:
            return [(tuple(range(self.dimension)), self.alphas[0])]
        if self.kind == ModelKind.COMPONENT_STABLE:
            return [((k,), alpha) for k, alpha in enumerate(self.alphas)]
        if self.kind == ModelKind.BLOCK_STABLE:
            return list(zip(self.blocks, self.alphas))
        raise UnsupportedModelError(f"{self.kind.value} has no stable block structure")

    def require_jump_support(self) -> None:
        """TemperedOneSided 에서 모든 성분이 c⁺ + c⁻ > 0 인지 확인"""
        if self.kind != ModelKind.TEMPERED_ONE_SIDED:
            return
        for k, (cp, cm) in enumerate(zip(self.c_plus, self.c_minus)):
            if cp + cm <= 0.0:
                raise InputError(f"component {k} has c_plus + c_minus = 0; (A1) cannot hold")


@dataclass(frozen=True)
class Anisotropy:
    """비등방성 (ᾱ, a₁…a_d), Σa_i = d"""

    mean_alpha: float
    weights: Tuple[float, ...]

    def __post_init__(self):
        if not self.weights:
            raise InputError("anisotropy needs at least one weight")
        if not (self.mean_alpha > 0 and math.isfinite(self.mean_alpha)):
            raise InputError(f"mean_alpha must be positive, got {self.mean_alpha}")
        if any(not (w > 0 and math.isfinite(w)) for w in self.weights):
            raise InputError(f"anisotropy weights must be positive and finite: {self.weights}")
        if abs(math.fsum(self.weights) - len(self.weights)) > 1e-12:
            raise InputError(f"anisotropy weights must sum to {len(self.weights)}: {self.weights}")

    @property
    def dimension(self) -> int:
        return len(self.weights)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)

    def alphas(self) -> Tuple[float, ...]:
        """a_i = ᾱ/α_i 에서 복원한 안정 지수"""
        return tuple(self.mean_alpha / w for w in self.weights)


@dataclass(frozen=True)
class MomentReport:
    """∫(1_{|z|≤1}|z|^γ + 1_{|z|>1}|z|^δ)ν(dz) 결과"""

    gamma: float
    delta: float
    finite: bool
    value: float
    small_jump_part: float
    big_jump_part: float
    component: Optional[int] = None


def compute_anisotropy(alphas: Sequence[float]) -> Anisotropy:
    """
    안정 지수로부터 비등방성 계산

    Args:
        alphas: α₁…α_d, 각각 (0,2)

    Returns:
        1/ᾱ = (1/d)Σ1/α_i, a_i = ᾱ/α_i 인 Anisotropy
    """
    alphas = [float(a) for a in alphas]
    if not alphas:
        raise InputError("need at least one stability index")
    for k, alpha in enumerate(alphas):
        if not (0.0 < alpha < 2.0):
            raise InputError(f"alpha[{k}]={alpha} must lie in (0, 2)")
    d = len(alphas)
    mean_alpha = d / math.fsum(1.0 / a for a in alphas)
    return Anisotropy(mean_alpha=mean_alpha, weights=tuple(mean_alpha / a for a in alphas))


def levy_density_constant(dimension: int, alpha: float) -> float:
    """C_{d,α}: 밀도 C|z|^{−d−α} 의 심볼이 |ξ|^α 가 되는 상수"""
    return (alpha * 2.0 ** (alpha - 1.0) * special.gamma((dimension + alpha) / 2.0)
            / (math.pi ** (dimension / 2.0) * special.gamma(1.0 - alpha / 2.0)))


def sphere_area(dimension: int) -> float:
    return 2.0 * math.pi ** (dimension / 2.0) / special.gamma(dimension / 2.0)


def spherical_abs_moment(dimension: int, power: float) -> float:
    """∫_{S^{m−1}} |θ₁|^p dθ"""
    return (2.0 * math.pi ** ((dimension - 1) / 2.0) * special.gamma((power + 1.0) / 2.0)
            / special.gamma((dimension + power) / 2.0))


def _quad(func: Callable[[float], float], a: float, b: float, **kwargs) -> float:
    value, abserr = integrate.quad(func, a, b, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL,
                                   limit=500, **kwargs)
    if abserr > max(1e-8, 1e-6 * abs(value)):
        raise NumericError(f"quadrature on [{a}, {b}] did not converge (err={abserr:.2e})",
                           partial_sum=value)
    return value


def _series_re(v0: float, alpha: float) -> float:
    # ∫_0^{v0} (1 − cos v) v^{−1−α} dv, v0 ≤ 1
    total = 0.0
    for k in range(1, 40):
        term = (-1) ** (k + 1) * v0 ** (2 * k - alpha) / (math.factorial(2 * k) * (2 * k - alpha))
        total += term
        if abs(term) <= 1e-17 * abs(total):
            break
    return total


def _series_im(v0: float, alpha: float) -> float:
    # ∫_0^{v0} (v − sin v) v^{−1−α} dv, v0 ≤ 1
    total = 0.0
    for k in range(1, 40):
        p = 2 * k + 1
        term = (-1) ** (k + 1) * v0 ** (p - alpha) / (math.factorial(p) * (p - alpha))
        total += term
        if abs(term) <= 1e-17 * abs(total):
            break
    return total


def _oscillatory_tail(a: float, b: float, alpha: float, weight: str) -> float:
    # ∫_a^b w(v) v^{−1−α} dv, w = cos/sin, a ≥ 1, 진동 적분 두 개의 차
    f = lambda v: v ** (-1.0 - alpha)
    head = _quad(f, a, np.inf, weight=weight, wvar=1.0)
    tail = _quad(f, b, np.inf, weight=weight, wvar=1.0)
    return head - tail


def _re_tail(a: float, b: float, alpha: float) -> float:
    mid = min(b, _DIRECT_LIMIT)
    total = 0.0
    if mid > a:
        total += _quad(lambda v: 2.0 * math.sin(v / 2.0) ** 2 * v ** (-1.0 - alpha), a, mid)
    if b > mid:
        lo = max(a, mid)
        power = (lo ** (-alpha) - b ** (-alpha)) / alpha
        total += power - _oscillatory_tail(lo, b, alpha, "cos")
    return total


def _im_tail(a: float, b: float, alpha: float) -> float:
    if abs(alpha - 1.0) < 1e-14:
        linear = math.log(b / a)
    else:
        linear = (b ** (1.0 - alpha) - a ** (1.0 - alpha)) / (1.0 - alpha)
    mid = min(b, _DIRECT_LIMIT)
    sine = 0.0
    if mid > a:
        sine += _quad(lambda v: math.sin(v) * v ** (-1.0 - alpha), a, mid)
    if b > mid:
        sine += _oscillatory_tail(max(a, mid), b, alpha, "sin")
    return linear - sine


def power_symbol_parts(x: float, alpha: float, upper: float = 1.0) -> Tuple[float, float]:
    """
    (0, upper] 위 z^{−1−α}dz 에 대한 심볼 실수부/허수부 (x ≥ 0)

    Returns:
        (∫(1 − cos xz) z^{−1−α}dz, ∫(xz − sin xz) z^{−1−α}dz)
    """
    if x == 0.0:
        return 0.0, 0.0
    big = x * upper
    v0 = min(big, 1.0)
    re = _series_re(v0, alpha)
    im = _series_im(v0, alpha)
    if big > v0:
        re += _re_tail(v0, big, alpha)
        im += _im_tail(v0, big, alpha)
    scale = x ** alpha
    return scale * re, scale * im


def _discrete_symbol(xi: float, alpha: float) -> complex:
    """Σ n^{α−1}(1 + iξ/n − e^{iξ/n}): 앞부분 직접 합 + Hurwitz zeta 꼬리 급수"""
    x = abs(xi)
    if x == 0.0:
        return 0j
    head_len = max(_DISCRETE_MIN_HEAD, int(math.ceil(50.0 * x)))
    if head_len > _DISCRETE_MAX_HEAD:
        n = np.arange(1, _DISCRETE_MAX_HEAD + 1, dtype=float)
        partial = float(np.sum(n ** (alpha - 1.0) * 2.0 * np.sin(x / (2.0 * n)) ** 2))
        raise NumericError(f"discrete series for |xi|={x:g} needs more than "
                           f"{_DISCRETE_MAX_HEAD} direct terms", partial_sum=partial)

    n = np.arange(1, head_len + 1, dtype=float)
    weights = n ** (alpha - 1.0)
    y = x / n
    re = math.fsum(weights * 2.0 * np.sin(y / 2.0) ** 2)
    im = math.fsum(weights * (y - np.sin(y)))

    q = head_len + 1.0
    re_tail = 0.0
    im_tail = 0.0
    converged = False
    for k in range(1, 40):
        re_term = (-1) ** (k + 1) * x ** (2 * k) / math.factorial(2 * k) * special.zeta(2 * k + 1 - alpha, q)
        im_term = (-1) ** (k + 1) * x ** (2 * k + 1) / math.factorial(2 * k + 1) * special.zeta(2 * k + 2 - alpha, q)
        re_tail += re_term
        im_tail += im_term
        if abs(re_term) <= 1e-17 * (re + abs(re_tail)) and abs(im_term) <= 1e-17 * (abs(im) + abs(im_tail) + 1e-300):
            converged = True
            break
    if not converged:
        raise NumericError(f"discrete tail series did not converge at |xi|={x:g}", partial_sum=re + re_tail)
    return complex(re + re_tail, math.copysign(im + im_tail, xi))


def _subordinate_exponent(lam: float, alpha: float, beta: float) -> float:
    # ψ(λ) = λ^{α/2} log(1+λ)^{β/2}
    if lam <= 0.0:
        return 0.0
    return lam ** (alpha / 2.0) * math.log1p(lam) ** (beta / 2.0)


def component_symbol(model: LevyModel, k: int, xi_k: float) -> complex:
    """성분별로 분리되는 모델에서 k 번째 1차원 심볼"""
    kind = model.kind
    if kind == ModelKind.COMPONENT_STABLE:
        return complex(abs(xi_k) ** model.alphas[k], 0.0)
    if kind == ModelKind.DISCRETE_MEASURE:
        return _discrete_symbol(xi_k, model.alphas[k])
    if kind == ModelKind.SUBORDINATE_BM:
        return complex(_subordinate_exponent(xi_k * xi_k / 2.0, model.alphas[k], model.betas[k]), 0.0)
    if kind == ModelKind.TEMPERED_ONE_SIDED:
        x = abs(xi_k)
        re = 0.0
        im = 0.0
        cp, cm = model.c_plus[k], model.c_minus[k]
        if cp > 0:
            r, i = power_symbol_parts(x, model.alpha_plus[k])
            re += cp * r
            im += cp * i
        if cm > 0:
            r, i = power_symbol_parts(x, model.alpha_minus[k])
            re += cm * r
            im -= cm * i
        if model.extra_rate:
            s = model.extra_scale[k]
            re += model.extra_rate[k] * -math.expm1(-0.5 * (s * x) ** 2)
        return complex(re, math.copysign(1.0, xi_k) * im if xi_k != 0 else 0.0)
    raise UnsupportedModelError(f"{kind.value} is not separable by component")


def symbol_eval(model: LevyModel, xi: Sequence[float]) -> complex:
    """
    심볼 Ψ_ν(ξ) 계산

    Args:
        model: 구동 과정
        xi: d 차원 주파수

    Returns:
        Ψ_ν(ξ) (Re ≥ 0, Ψ(0) = 0, 대칭 모델은 허수부 0)
    """
    xi = np.asarray(xi, dtype=float).reshape(-1)
    if xi.shape[0] != model.dimension:
        raise InputError(f"xi has {xi.shape[0]} entries, model dimension is {model.dimension}")
    if not np.all(np.isfinite(xi)):
        raise InputError(f"xi must be finite, got {xi}")

    if model.kind in STABLE_KINDS:
        total = 0.0
        for indices, alpha in model.stable_groups():
            total += float(np.linalg.norm(xi[list(indices)])) ** alpha
        return complex(total, 0.0)

    return sum((component_symbol(model, k, float(xi[k])) for k in range(model.dimension)), 0j)


def _radial_parts(model: LevyModel) -> List[Callable[[float], float]]:
    """Re Ψ 를 블록별 반경 함수 g_j(r) 의 합으로 분해"""
    if model.kind in STABLE_KINDS:
        return [(lambda r, a=alpha: r ** a) for _, alpha in model.stable_groups()]
    return [(lambda r, k=k: component_symbol(model, k, r).real) for k in range(model.dimension)]


def _sphere_sup(parts: List[Callable[[float], float]], eta: float) -> float:
    """sup_{|ξ|=η} Σ_j g_j(r_j),  Σ r_j² = η²"""
    m = len(parts)
    if m == 1:
        return parts[0](eta)

    if m == 2:
        objective = lambda theta: -(parts[0](eta * math.cos(theta)) + parts[1](eta * math.sin(theta)))
        grid = np.linspace(0.0, math.pi / 2.0, 65)
        values = [objective(th) for th in grid]
        best = int(np.argmin(values))
        lo = grid[max(best - 1, 0)]
        hi = grid[min(best + 1, len(grid) - 1)]
        refined = optimize.minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                                           options={"xatol": 1e-10})
        return max(-values[best], -float(refined.fun))

    def total(u: np.ndarray) -> float:
        u = np.abs(u)
        norm = float(np.linalg.norm(u))
        if norm == 0.0:
            return 0.0
        radii = eta * u / norm
        return sum(g(float(r)) for g, r in zip(parts, radii))

    # 결정적 후보: 좌표축, 대각선, 고정 시드 준난수
    candidates = list(np.eye(m)) + [np.ones(m)]
    candidates += list(np.random.default_rng(0).random((32, m)))
    scored = [(total(u), u) for u in candidates]
    best_value, best_u = max(scored, key=lambda item: item[0])
    refined = optimize.minimize(lambda u: -total(u), best_u, method="Nelder-Mead",
                                options={"xatol": 1e-9, "fatol": 1e-12, "maxiter": 4000})
    return max(best_value, -float(refined.fun))


def sup_real_symbol(model: LevyModel, eta: float) -> float:
    """δ(η) = sup_{|ξ|≤η} Re Ψ_ν(ξ) (반경 방향 단조성 가정)"""
    if eta <= 0.0:
        return 0.0
    return _sphere_sup(_radial_parts(model), eta)


def smoothing_scale(model: LevyModel, t: float) -> float:
    """
    평활 스케일 Ξ(t) = δ^{−1}(1/t)

    Args:
        model: 구동 과정
        t: 양의 시간

    Returns:
        δ(Ξ) = 1/t 를 만족하는 Ξ (상대 오차 1e-6 이내)
    """
    if not (t > 0 and math.isfinite(t)):
        raise InputError(f"t must be positive, got {t}")
    model.require_jump_support()
    target = 1.0 / t

    if model.kind == ModelKind.ISOTROPIC_STABLE:
        return t ** (-1.0 / model.alphas[0])

    parts = _radial_parts(model)
    delta = lambda eta: _sphere_sup(parts, eta)

    lo = hi = 1.0
    value = delta(hi)
    if value < target:
        while value < target:
            lo = hi
            hi *= 2.0
            if hi > _SEARCH_LIMIT:
                raise UnboundedSearchError(
                    f"sup Re(Psi) stays below 1/t={target:g} up to eta={_SEARCH_LIMIT:g}",
                    partial_sum=value)
            value = delta(hi)
    else:
        while value >= target:
            hi = lo
            lo /= 2.0
            if lo < 1.0 / _SEARCH_LIMIT:
                raise UnboundedSearchError(f"sup Re(Psi) exceeds 1/t={target:g} near eta=0",
                                           partial_sum=value)
            value = delta(lo)

    root = optimize.brentq(lambda s: delta(math.exp(s)) - target, math.log(lo), math.log(hi),
                           xtol=1e-10, rtol=1e-10)
    xi_t = math.exp(root)
    logger.debug("smoothing scale %s t=%g -> %g", model.kind.value, t, xi_t)
    return xi_t


def _check_moment_exponents(gamma: float, delta: float) -> None:
    if not (0.0 < delta <= gamma <= 2.0):
        raise InputError(f"need 0 < delta <= gamma <= 2, got gamma={gamma}, delta={delta}")


def _power_moment(coeff: float, exponent_gap: float) -> float:
    # coeff · ∫_0^1 r^{gap−1} dr (gap > 0) 또는 ∫_1^∞ r^{−gap−1} dr
    return coeff / exponent_gap if exponent_gap > 0 else math.inf


def _gaussian_partial_moment(rate: float, scale: float, power: float, inside: bool) -> float:
    # rate · E[|N|^p; |N| ≤ 1] 또는 E[|N|^p; |N| > 1], N ~ N(0, scale²)
    if rate == 0.0:
        return 0.0
    shape = (power + 1.0) / 2.0
    cut = 1.0 / (2.0 * scale * scale)
    fraction = special.gammainc(shape, cut) if inside else special.gammaincc(shape, cut)
    full = 2.0 ** (power / 2.0) * scale ** power * special.gamma(shape) / math.sqrt(math.pi)
    return rate * full * fraction


def _tempered_component_moment(model: LevyModel, k: int, gamma: float, delta: float) -> Tuple[float, float]:
    small = 0.0
    for c, alpha in ((model.c_plus[k], model.alpha_plus[k]), (model.c_minus[k], model.alpha_minus[k])):
        if c > 0:
            small += _power_moment(c, gamma - alpha)
    big = 0.0
    if model.extra_rate:
        rate, scale = model.extra_rate[k], model.extra_scale[k]
        small += _gaussian_partial_moment(rate, scale, gamma, inside=True)
        big += _gaussian_partial_moment(rate, scale, delta, inside=False)
    return small, big


def _report(gamma: float, delta: float, small: float, big: float, component: Optional[int] = None) -> MomentReport:
    value = small + big
    return MomentReport(gamma=gamma, delta=delta, finite=math.isfinite(value), value=value,
                        small_jump_part=small, big_jump_part=big, component=component)


def moment_integrals(model: LevyModel, gamma: float, delta: float) -> MomentReport:
    """
    ∫(1_{|z|≤1}|z|^γ + 1_{|z|>1}|z|^δ)ν(dz) 계산

    유한성은 종류별 멱법칙 비교로 해석적으로 결정한다.
    """
    _check_moment_exponents(gamma, delta)
    kind = model.kind

    if kind in STABLE_KINDS:
        small = big = 0.0
        for indices, alpha in model.stable_groups():
            m = len(indices)
            coeff = levy_density_constant(m, alpha) * sphere_area(m)
            small += _power_moment(coeff, gamma - alpha)
            big += _power_moment(coeff, alpha - delta)
        return _report(gamma, delta, small, big)

    if kind == ModelKind.TEMPERED_ONE_SIDED:
        small = big = 0.0
        for k in range(model.dimension):
            s, b = _tempered_component_moment(model, k, gamma, delta)
            small += s
            big += b
        return _report(gamma, delta, small, big)

    if kind == ModelKind.DISCRETE_MEASURE:
        # 지지집합이 (0,1] 이므로 큰 점프 부분은 0
        small = sum(float(special.zeta(1.0 + gamma - a)) if gamma > a else math.inf for a in model.alphas)
        return _report(gamma, delta, small, 0.0)

    raise UnsupportedModelError(f"moment integrals are not available for {kind.value}")


def moment_integrals_diagonal(model: LevyModel, gammas: Sequence[float],
                              deltas: Sequence[float]) -> Tuple[MomentReport, ...]:
    """성분별 ∫(1_{|z|≤1}|z_k|^{γ_k} + 1_{|z|>1}|z_k|^{δ_k})ν(dz)"""
    d = model.dimension
    if len(gammas) != d or len(deltas) != d:
        raise InputError(f"need {d} gammas and deltas")
    for gamma, delta in zip(gammas, deltas):
        _check_moment_exponents(gamma, delta)

    reports = []
    kind = model.kind
    for k in range(d):
        gamma, delta = float(gammas[k]), float(deltas[k])
        if kind in STABLE_KINDS:
            indices, alpha = next((idx, a) for idx, a in model.stable_groups() if k in idx)
            m = len(indices)
            c = levy_density_constant(m, alpha)
            small = _power_moment(c * spherical_abs_moment(m, gamma), gamma - alpha)
            big = _power_moment(c * spherical_abs_moment(m, delta), alpha - delta)
        elif kind == ModelKind.TEMPERED_ONE_SIDED:
            small, big = _tempered_component_moment(model, k, gamma, delta)
        elif kind == ModelKind.DISCRETE_MEASURE:
            alpha = model.alphas[k]
            small = float(special.zeta(1.0 + gamma - alpha)) if gamma > alpha else math.inf
            big = 0.0
        else:
            raise UnsupportedModelError(f"moment integrals are not available for {kind.value}")
        reports.append(_report(gamma, delta, small, big, component=k))
    return tuple(reports)


def small_jump_mean(model: LevyModel) -> np.ndarray:
    """∫_{|z|≤1} z ν(dz) 성분별 값 (발산하면 inf)"""
    d = model.dimension
    out = np.zeros(d)
    kind = model.kind
    if kind == ModelKind.TEMPERED_ONE_SIDED:
        for k in range(d):
            total = 0.0
            for sign, c, alpha in ((1.0, model.c_plus[k], model.alpha_plus[k]),
                                   (-1.0, model.c_minus[k], model.alpha_minus[k])):
                if c > 0:
                    if alpha >= 1.0:
                        total = math.inf
                        break
                    total += sign * c / (1.0 - alpha)
            out[k] = total
    elif kind == ModelKind.DISCRETE_MEASURE:
        for k, alpha in enumerate(model.alphas):
            out[k] = float(special.zeta(2.0 - alpha)) if alpha < 1.0 else math.inf
    else:
        # 대칭 측도: ∫|z|ν 가 유한할 때만 0
        for k, alpha in enumerate(a1_indices(model)):
            out[k] = 0.0 if alpha < 1.0 else math.inf
    return out


def a1_indices(model: LevyModel, subordinate_margin: Optional[Sequence[float]] = None) -> Tuple[float, ...]:
    """
    성분별 (A1) 지수

    Args:
        model: 구동 과정
        subordinate_margin: SubordinateBM 에서 β_k < 0 인 성분에 쓰는 ε_k (기본 0.01·α_k)
    """
    kind = model.kind
    d = model.dimension
    if kind in STABLE_KINDS:
        out = [0.0] * d
        for indices, alpha in model.stable_groups():
            for i in indices:
                out[i] = alpha
        return tuple(out)

    if kind == ModelKind.TEMPERED_ONE_SIDED:
        out = []
        for k in range(d):
            active = [a for c, a in ((model.c_plus[k], model.alpha_plus[k]),
                                     (model.c_minus[k], model.alpha_minus[k])) if c > 0]
            if not active:
                raise InputError(f"component {k} has c_plus + c_minus = 0; (A1) index undefined")
            out.append(max(active))
        return tuple(out)

    if kind == ModelKind.SUBORDINATE_BM:
        margins = subordinate_margin or [0.01 * a for a in model.alphas]
        return tuple(a - eps if b < 0 else a for a, b, eps in zip(model.alphas, model.betas, margins))

    return tuple(model.alphas)
