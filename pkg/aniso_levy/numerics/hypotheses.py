#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
hypotheses.py

정리 가정 검사기 - 부등식 조건, 수렴률 지수 κ, 정칙성 지수 λ 구성
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.errors import InfeasibleError, InputError
from .levy_models import Anisotropy

logger = logging.getLogger(__name__)

# 엄격 부등식: 여유가 이 값 이하이면 실패로 본다
STRICT_MARGIN = 1e-12


class TheoremKind(str, Enum):
    GENERAL_GE1 = "general_ge1"
    GENERAL_LT1 = "general_lt1"
    DIAGONAL_GE1 = "diagonal_ge1"
    DIAGONAL_LT1 = "diagonal_lt1"
    DIAGONAL_MIXED = "diagonal_mixed"
    COROLLARY_NO_DELTA = "corollary_no_delta"
    Z2_LIMIT_GENERAL = "z2_limit_general"
    Z2_LIMIT_DIAGONAL = "z2_limit_diagonal"
    ELLIPTIC_COROLLARY = "elliptic_corollary"
    ELLIPTIC_DIAGONAL_COROLLARY = "elliptic_diagonal_corollary"


class CorollaryPreset(str, Enum):
    ELLIPTIC_NON_DIAGONAL = "elliptic"
    ELLIPTIC_DIAGONAL = "elliptic-diagonal"


@dataclass(frozen=True)
class Inequality:
    name: str
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    @property
    def satisfied(self) -> bool:
        return self.margin > STRICT_MARGIN


@dataclass
class ConditionReport:
    """조건 평가 결과 - overall 은 모든 부등식의 논리곱"""

    theorem: TheoremKind
    inequalities: List[Inequality] = field(default_factory=list)
    zero_drift: bool = False
    notes: List[str] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(item.satisfied for item in self.inequalities)

    def add(self, name: str, lhs: float, rhs: float = 1.0) -> None:
        self.inequalities.append(Inequality(name=name, lhs=float(lhs), rhs=float(rhs)))

    def to_records(self) -> List[Dict[str, Any]]:
        return [{"name": item.name, "lhs": item.lhs, "rhs": item.rhs,
                 "margin": item.margin, "satisfied": item.satisfied} for item in self.inequalities]

    def to_dict(self) -> Dict[str, Any]:
        return {"theorem": self.theorem.value, "zero_drift": self.zero_drift,
                "overall": self.overall, "inequalities": self.to_records(), "notes": list(self.notes)}


@dataclass(frozen=True)
class RegularityPlan:
    """λ 구성: η, c_i, λ 와 사용한 비등방성/κ"""

    eta: float
    c: Tuple[float, ...]
    lam: float
    anisotropy: Anisotropy
    kappa: Union[float, Tuple[float, ...]]


# --- 도메인 검증 ---

def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InputError(message)


def _check_alphas(alphas: Sequence[float]) -> List[float]:
    alphas = [float(a) for a in alphas]
    _require(len(alphas) > 0, "need at least one stability index")
    for k, a in enumerate(alphas):
        _require(0.0 < a < 2.0, f"alpha[{k}]={a} must lie in (0, 2)")
    return alphas


def _check_beta(beta: float, label: str = "beta") -> None:
    _require(0.0 <= beta <= 1.0, f"{label}={beta} must lie in [0, 1]")


def _check_chi(chi: float, label: str = "chi") -> None:
    _require(0.0 < chi < 1.0, f"{label}={chi} must lie in (0, 1)")


def _check_gamma_delta(gamma: float, delta: float) -> None:
    _require(0.0 < gamma <= 2.0, f"gamma={gamma} must lie in (0, 2]")
    _require(0.0 < delta <= gamma, f"delta={delta} must lie in (0, gamma]")


# --- κ ---

def kappa_ge1(gamma: float, delta: float, beta: float, chi: float) -> float:
    """γ ∈ [1,2] 에서 한 단계 근사의 수렴률 지수"""
    _require(1.0 <= gamma <= 2.0, f"gamma={gamma} must lie in [1, 2]")
    _check_gamma_delta(gamma, delta)
    _check_beta(beta)
    _check_chi(chi)
    return min(1.0 + min(beta, delta) / gamma,
               1.0 / gamma + min(chi, delta / gamma) / gamma)


def kappa_lt1(gamma: float, beta: float, chi: float) -> float:
    """γ ∈ (0,1) 에서 한 단계 근사의 수렴률 지수"""
    _require(0.0 < gamma < 1.0, f"gamma={gamma} must lie in (0, 1)")
    _check_beta(beta)
    _check_chi(chi)
    rho = min(beta, chi)
    return min(1.0 + rho / gamma, 1.0 / gamma + chi, 1.0 / (1.0 - rho))


def kappa_diag(k: int, gammas: Sequence[float], delta: float, gamma: Optional[float],
               beta_k: float, chi_k: float, rho: float) -> float:
    """
    대각 구조에서 성분 k 의 수렴률 지수 κ_k

    Args:
        k: 성분 인덱스
        gammas: γ₁…γ_d
        delta: δ = min δ_j
        gamma: γ = max γ_j (None 이면 gammas 에서 계산)
        beta_k, chi_k: 성분 k 의 Hölder 지수
        rho: min_j(β_j ∧ χ_j)
    """
    _require(0 <= k < len(gammas), f"component index {k} out of range")
    gamma = max(gammas) if gamma is None else gamma
    gamma_k = float(gammas[k])
    _check_gamma_delta(gamma, delta)
    _require(0.0 < gamma_k <= gamma, f"gammas[{k}]={gamma_k} must lie in (0, gamma]")
    _check_beta(beta_k, "beta_k")
    _check_chi(chi_k, "chi_k")
    _require(0.0 <= rho < 1.0, f"rho={rho} must lie in [0, 1)")

    if gamma_k >= 1.0:
        return min(1.0 + min(beta_k, delta) / gamma,
                   1.0 / gamma_k + min(chi_k, delta / gamma_k) / gamma)
    return min(1.0 + min(beta_k, chi_k) / gamma,
               1.0 / gamma_k + chi_k / max(1.0, gamma),
               1.0 / (1.0 - rho))


# --- 조건 검사 ---

def check_general(alphas: Sequence[float], gamma: float, delta: float, beta: float, chi: float,
                  zero_drift: bool = False, theorem: Optional[TheoremKind] = None) -> ConditionReport:
    """
    일반 σ 에 대한 정리 조건

    zero_drift=True 이면 b=0 완화 목록(drift 관련 부등식 제거)을 적용한다.
    """
    alphas = _check_alphas(alphas)
    _check_gamma_delta(gamma, delta)
    _check_beta(beta)
    _check_chi(chi)
    a_min = min(alphas)

    if gamma >= 1.0:
        report = ConditionReport(theorem or TheoremKind.GENERAL_GE1, zero_drift=zero_drift)
        if not zero_drift:
            report.add("a.1", a_min * (1.0 + min(beta, delta) / gamma))
        report.add("a.2", a_min / gamma * (1.0 + min(chi, delta / gamma)))
        return report

    report = ConditionReport(theorem or TheoremKind.GENERAL_LT1, zero_drift=zero_drift)
    if zero_drift:
        report.add("b.2", a_min * (1.0 / gamma + chi))
        report.add("b.3", a_min + chi)
    else:
        rho = min(beta, chi)
        report.add("b.1", a_min * (1.0 + rho / gamma))
        report.add("b.2", a_min * (1.0 / gamma + chi))
        report.add("b.3", a_min + rho)
    return report


def check_diagonal(alphas: Sequence[float], gammas: Sequence[float], deltas: Optional[Sequence[float]],
                   betas: Sequence[float], chis: Sequence[float], zero_drift: bool = False,
                   theorem: Optional[TheoremKind] = None) -> ConditionReport:
    """
    대각 σ 에 대한 성분별 정리 조건

    deltas=None 이면 큰 점프 모멘트 없는 따름정리 형태 (γ_* = min γ_k) 를 평가한다.
    """
    alphas = _check_alphas(alphas)
    d = len(alphas)
    _require(len(gammas) == d and len(betas) == d and len(chis) == d,
             f"gammas, betas and chis need {d} entries")
    no_delta = deltas is None
    if no_delta:
        deltas = list(gammas)
    _require(len(deltas) == d, f"deltas need {d} entries")
    for k in range(d):
        _check_gamma_delta(gammas[k], deltas[k])
        _check_beta(betas[k], f"betas[{k}]")
        _check_chi(chis[k], f"chis[{k}]")

    gamma = max(gammas)
    delta = min(deltas)
    gamma_star = min(gammas)
    a_min = min(alphas)

    if theorem is None:
        if no_delta:
            theorem = TheoremKind.COROLLARY_NO_DELTA
        elif all(g >= 1.0 for g in gammas):
            theorem = TheoremKind.DIAGONAL_GE1
        elif all(g < 1.0 for g in gammas):
            theorem = TheoremKind.DIAGONAL_LT1
        else:
            theorem = TheoremKind.DIAGONAL_MIXED
    report = ConditionReport(theorem, zero_drift=zero_drift)

    if any(g < 1.0 for g in gammas):
        if zero_drift:
            report.add("b.0", a_min + min(chis))
        else:
            report.add("b.0", a_min + min(min(b, c) for b, c in zip(betas, chis)))

    for k in range(d):
        alpha_k, gamma_k, beta_k, chi_k = alphas[k], gammas[k], betas[k], chis[k]
        if gamma_k >= 1.0:
            if not zero_drift:
                first = beta_k if no_delta else min(beta_k, delta)
                report.add(f"k{k}.a.1", alpha_k * (1.0 + first / gamma))
            cap = gamma_star / gamma_k if no_delta else delta / gamma_k
            report.add(f"k{k}.a.2", alpha_k * (1.0 / gamma_k + min(chi_k, cap) / gamma))
        else:
            if not zero_drift:
                report.add(f"k{k}.b.1", alpha_k * (1.0 + min(beta_k, chi_k) / gamma))
            report.add(f"k{k}.b.2", alpha_k * (1.0 / gamma_k + chi_k / max(1.0, gamma)))
    return report


def check_corollary_no_delta(alphas: Sequence[float], gamma: float, beta: float, chi: float,
                             zero_drift: bool = False) -> ConditionReport:
    """큰 점프 모멘트 없이 밀도 존재만 주는 따름정리: δ = γ 로 평가"""
    return check_general(alphas, gamma, gamma, beta, chi, zero_drift=zero_drift,
                         theorem=TheoremKind.COROLLARY_NO_DELTA)


def check_z1_preset(alpha: float, beta: float, chi: float, zero_drift: bool = False) -> ConditionReport:
    """
    회전 대칭 α-안정 잡음: γ→α⁺, δ→α⁻ 극한값에서 일반 조건 평가

    α ∈ [1,2) 는 β ∈ (0,1] 에서 항상 통과한다. α = 1, β = 0 은 경계로, a.1 좌변이
    모든 γ 에 대해 정확히 1 이므로 실패로 판정하고 notes 에 남긴다.
    """
    report = check_general([alpha], alpha, alpha, beta, chi, zero_drift=zero_drift)
    if alpha == 1.0 and beta == 0.0 and not zero_drift:
        note = "alpha=1 with beta=0 sits on the boundary: a.1 equals 1 for every admissible gamma"
        logger.warning("z1 preset: %s", note)
        report.notes.append(note)
    return report


def check_z2_preset(alphas: Sequence[float], beta: float, chi: float,
                    zero_drift: bool = False) -> ConditionReport:
    """독립 성분 안정 잡음: γ→(α^max)⁺, δ→(α^min)⁻"""
    alphas = _check_alphas(alphas)
    return check_general(alphas, max(alphas), min(alphas), beta, chi, zero_drift=zero_drift,
                         theorem=TheoremKind.Z2_LIMIT_GENERAL)


def check_z2_diagonal_preset(alphas: Sequence[float], betas: Sequence[float], chis: Sequence[float],
                             zero_drift: bool = False) -> ConditionReport:
    """독립 성분 안정 잡음 + 대각 σ: γ_k→α_k⁺, δ_k→α_k⁻"""
    alphas = _check_alphas(alphas)
    return check_diagonal(alphas, alphas, alphas, betas, chis, zero_drift=zero_drift,
                          theorem=TheoremKind.Z2_LIMIT_DIAGONAL)


def check_corollary_presets(preset: Union[CorollaryPreset, str], alphas: Sequence[float],
                            chi: Union[float, Sequence[float]]) -> ConditionReport:
    """
    균등 타원형 σ, b=0 인 따름정리 조건

    Args:
        preset: elliptic (비대각) 또는 elliptic-diagonal
        alphas: 성분 안정 지수
        chi: σ 의 Hölder 지수 (대각이면 성분별 목록 허용)
    """
    preset = CorollaryPreset(preset)
    alphas = _check_alphas(alphas)
    chis = [float(chi)] * len(alphas) if np.isscalar(chi) else [float(c) for c in chi]
    _require(len(chis) == len(alphas), f"chi needs {len(alphas)} entries")
    for k, c in enumerate(chis):
        _check_chi(c, f"chi[{k}]")
    a_min, a_max = min(alphas), max(alphas)

    if preset == CorollaryPreset.ELLIPTIC_NON_DIAGONAL:
        report = ConditionReport(TheoremKind.ELLIPTIC_COROLLARY, zero_drift=True)
        chi_min = min(chis)
        if a_max >= 1.0:
            ratio = a_min / a_max
            report.add("ratio", ratio, 1.0 / (1.0 + min(chi_min, ratio)))
        else:
            report.add("alpha_min", a_min, 1.0 / (1.0 + chi_min))
        return report

    report = ConditionReport(TheoremKind.ELLIPTIC_DIAGONAL_COROLLARY, zero_drift=True)
    if a_max < 1.0:
        report.add("alpha_min_plus_chi", a_min + min(chis))
    return report


# --- λ 구성 ---

def derive_lambda(anisotropy: Anisotropy, alphas: Sequence[float], kappa: Union[float, Sequence[float]],
                  chi: float, delta: float, gamma: float, eta: Optional[float] = None,
                  c: Optional[Sequence[float]] = None) -> RegularityPlan:
    """
    Besov 정칙성 지수 λ 구성

    η 는 허용 최대값의 절반, c_i 는 열린 구간 ((a_j/κ)(1/a_i) 의 j 최대, α_i(1 − η/a_i)) 의
    중점으로 고른다. eta/c 를 주면 그 값을 검증해 사용한다.
    """
    a = anisotropy.array
    alpha = np.asarray(_check_alphas(alphas), dtype=float)
    d = a.size
    _require(alpha.size == d, f"need {d} alphas to match the anisotropy")
    kappa_vec = np.full(d, float(kappa)) if np.isscalar(kappa) else np.asarray(kappa, dtype=float)
    _require(kappa_vec.size == d and np.all(kappa_vec > 0), "kappa must be positive (scalar or one per component)")
    _require(chi > 0 and delta > 0 and gamma > 0, "chi, delta and gamma must be positive")

    for j in range(d):
        if kappa_vec[j] * alpha[j] <= 1.0:
            raise InfeasibleError(f"kappa*alpha_{j} = {kappa_vec[j] * alpha[j]:.6g} <= 1; "
                                  "no admissible c_i exists", index=j)

    lower = np.array([np.max(a / (kappa_vec * a[i])) for i in range(d)])
    eta_max = min(1.0,
                  float(np.min(a * min(1.0, delta))),
                  float(np.min(a * (1.0 - lower / alpha))))
    if eta is None:
        eta = eta_max / 2.0
    _require(0.0 < eta < 1.0 and np.all(eta / a < min(1.0, delta)),
             f"eta={eta} must satisfy 0 < eta/a_i < 1 ∧ delta")

    upper = alpha * (1.0 - eta / a)
    if c is None:
        c_vec = (lower + upper) / 2.0
    else:
        c_vec = np.asarray(c, dtype=float)
        if c_vec.size == 1:
            c_vec = np.full(d, float(c_vec[0]))
    _require(c_vec.size == d, f"c needs {d} entries")
    if not np.all((lower < c_vec) & (c_vec < upper)):
        raise InputError(f"c={c_vec.tolist()} must lie strictly inside ({lower.tolist()}, {upper.tolist()})")

    cap = min(chi, delta) / max(1.0, gamma)
    first = c_vec * cap * a
    second = a - eta - a * c_vec / alpha
    third = eta * (np.outer(c_vec * a, kappa_vec / a) - 1.0)
    lam = float(min(first.min(), second.min(), third.min()))
    if not lam > 0:
        raise InputError(f"lambda evaluated to {lam}; choices of eta and c are not admissible")

    logger.debug("derived lambda=%g (eta=%g, c=%s)", lam, eta, c_vec.tolist())
    kappa_out = float(kappa) if np.isscalar(kappa) else tuple(float(k) for k in kappa_vec)
    return RegularityPlan(eta=float(eta), c=tuple(float(v) for v in c_vec), lam=lam,
                          anisotropy=anisotropy, kappa=kappa_out)
