#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
one_step_rate.py

한 단계 근사 수렴률 실험 - E|X(t) − X^ε(t)|^η 의 ε 감소 기울기
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from ..core.base_experiment import BaseExperiment
from ..core.errors import InputError
from ..numerics.hypotheses import (ConditionReport, check_diagonal, check_general, kappa_diag, kappa_ge1,
                                   kappa_lt1)
from ..numerics.levy_models import a1_indices
from ..numerics.sampling import RngStream
from ..numerics.sde import (DEFAULT_MIN_WINDOW_STEPS, DEFAULT_STEPS_PER_UNIT, SdeProblem, Structure,
                            couple_one_step, snap_epsilon)
from .report import FLAG_ADVISORY, FLAG_DEGENERATE, Check, ExperimentReport, fit_loglog

logger = logging.getLogger(__name__)

DEFAULT_EPS_GRID = tuple(2.0 ** -k for k in range(10, 3, -1))


def problem_kappa(problem: SdeProblem) -> Tuple[float, ...]:
    """문제의 γ 구간에 맞는 κ (일반 구조면 길이 1, 대각이면 성분별)"""
    if problem.structure == Structure.DIAGONAL:
        if not problem.gammas:
            raise InputError("diagonal problems need per-component gammas and deltas")
        gammas = problem.gammas
        delta, gamma = min(problem.deltas), max(gammas)
        rho = min(min(b, c) for b, c in zip(problem.betas, problem.chis))
        return tuple(kappa_diag(k, gammas, delta, gamma, problem.betas[k], problem.chis[k], rho)
                     for k in range(problem.dimension))
    if problem.gamma is None:
        raise InputError("general problems need gamma and delta to choose the approximation regime")
    if problem.gamma >= 1.0:
        return (kappa_ge1(problem.gamma, problem.delta, problem.beta, problem.chi),)
    return (kappa_lt1(problem.gamma, problem.beta, problem.chi),)


def problem_conditions(problem: SdeProblem) -> ConditionReport:
    """문제에 해당하는 정리 조건 평가"""
    alphas = a1_indices(problem.model)
    zero_drift = problem.has_zero_drift()
    if problem.structure == Structure.DIAGONAL:
        return check_diagonal(alphas, problem.gammas, problem.deltas, problem.betas, problem.chis,
                              zero_drift=zero_drift)
    return check_general(alphas, problem.gamma, problem.delta, problem.beta, problem.chi, zero_drift=zero_drift)


def max_eta(problem: SdeProblem) -> float:
    if problem.structure == Structure.DIAGONAL:
        return min(1.0, min(problem.deltas))
    if problem.gamma >= 1.0:
        return min(1.0, problem.delta)
    return problem.delta


class OneStepRateExperiment(BaseExperiment):
    """결합된 정확 대체 해와 X^ε 로 수렴률 기울기를 측정"""

    experiment_id = "one_step_rate"

    def __init__(self, problem: SdeProblem, t: float = 1.0, eta: Optional[float] = None,
                 eps_grid: Sequence[float] = DEFAULT_EPS_GRID, replicas: int = 100_000,
                 steps_per_unit: int = DEFAULT_STEPS_PER_UNIT,
                 min_window_steps: int = DEFAULT_MIN_WINDOW_STEPS, tolerance: float = 0.1, **kwargs):
        """
        Args:
            problem: SDE 문제 (일반 구조면 gamma/delta, 대각이면 gammas/deltas 필요)
            t: 관측 시각
            eta: 모멘트 지수 (기본 허용 최대값의 절반)
            eps_grid: ε 그리드
            replicas: ε 당 replica 수
            steps_per_unit: 참조 Euler 단위시간당 단계 수
            min_window_steps: (t−ε, t] 구간 최소 미세 단계 수
            tolerance: 기울기 허용오차
        """
        super().__init__(**kwargs)
        self.problem = problem
        self.kappa = problem_kappa(problem)
        limit = max_eta(problem)
        self.eta = limit / 2.0 if eta is None else float(eta)
        if not (0.0 < self.eta <= limit):
            raise InputError(f"eta={self.eta} must lie in (0, {limit}] for this regime")
        self.t = float(t)
        self.eps_grid = sorted(float(e) for e in eps_grid)
        if len(self.eps_grid) < 1:
            raise InputError("eps_grid is empty")
        self.replicas = int(replicas)
        self.steps_per_unit = int(steps_per_unit)
        self.min_window_steps = int(min_window_steps)
        self.tolerance = float(tolerance)

    def _measure(self, epsilon: float):
        problem, t = self.problem, self.t
        eta = self.eta

        def batch(count: int, stream: RngStream) -> np.ndarray:
            result = couple_one_step(problem, t, epsilon, stream, replicas=count,
                                     steps_per_unit=self.steps_per_unit,
                                     min_window_steps=self.min_window_steps)
            diff = result.x_exact_surrogate - result.x_eps
            norm = np.linalg.norm(diff, axis=1)
            return np.column_stack([norm ** eta, np.abs(diff) ** eta])

        return batch

    def run(self) -> ExperimentReport:
        d = self.problem.dimension
        diagonal = self.problem.structure == Structure.DIAGONAL
        columns = ["epsilon", "requested_epsilon", "moment", "stderr"]
        if diagonal:
            for k in range(d):
                columns += [f"moment_{k}", f"stderr_{k}"]
        theory = self.eta * min(self.kappa)
        report = ExperimentReport(self.experiment_id, columns, x_column="epsilon", y_column="moment",
                                  theoretical_exponent=theory)

        conditions = problem_conditions(self.problem)
        if not conditions.overall:
            logger.warning("hypotheses fail (%s); results are advisory", conditions.theorem.value)
            report.flag(FLAG_ADVISORY)
        degenerate = self.problem.is_constant()
        if degenerate:
            report.flag(FLAG_DEGENERATE)

        for g, requested in enumerate(self.eps_grid):
            epsilon, _, _ = snap_epsilon(self.t, requested, self.steps_per_unit)
            values = self.run_batches(self._measure(requested), self.replicas, grid_index=g)
            summary = self.summarize(values)
            mean, err = summary.mean, summary.stderr
            row = {"epsilon": epsilon, "requested_epsilon": requested,
                   "moment": float(mean[0]), "stderr": float(err[0])}
            if diagonal:
                for k in range(d):
                    row[f"moment_{k}"] = float(mean[k + 1])
                    row[f"stderr_{k}"] = float(err[k + 1])
            report.table.append(row)
            logger.info("rate: epsilon=%.4g moment=%.4g ± %.2g", epsilon, mean[0], err[0])

        eps = report.column("epsilon")
        moments = report.column("moment")
        if not degenerate and np.any(moments <= 0):
            report.flag(FLAG_DEGENERATE)
            degenerate = True
        if not degenerate and len(eps) >= 3:
            report.fit = fit_loglog(eps, moments)
            if diagonal:
                for k in range(d):
                    component = report.column(f"moment_{k}")
                    if np.any(component <= 0):
                        logger.info("rate: component %d is exact on this grid; slope skipped", k)
                        continue
                    fit_k = fit_loglog(eps, component)
                    report.checks.append(Check(f"slope_{k}", fit_k.slope, self.eta * self.kappa[k],
                                               self.tolerance, "ge"))
            else:
                report.checks.append(Check("slope", report.fit.slope, theory, self.tolerance, "ge"))

        report.provenance = self.provenance(
            problem=self.problem.model_dump(mode="json"), t=self.t, eta=self.eta, kappa=list(self.kappa),
            replicas=self.replicas, eps_grid=self.eps_grid, steps_per_unit=self.steps_per_unit,
            min_window_steps=self.min_window_steps, conditions=conditions.to_dict())
        return report


def one_step_rate_experiment(problem: SdeProblem, eta: Optional[float] = None,
                             eps_grid: Sequence[float] = DEFAULT_EPS_GRID, replicas: int = 100_000,
                             t: float = 1.0, **kwargs) -> ExperimentReport:
    return OneStepRateExperiment(problem, t=t, eta=eta, eps_grid=eps_grid, replicas=replicas, **kwargs).execute()
