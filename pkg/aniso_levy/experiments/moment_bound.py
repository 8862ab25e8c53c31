#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
moment_bound.py

확률적분 모멘트 실험 - E|∫H dZ|^η 와 점프 변동량 모멘트의 창 길이 기울기
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np

from ..core.base_experiment import BaseExperiment
from ..core.errors import InputError, RegimeError, UnsupportedModelError
from ..numerics.levy_models import STABLE_KINDS, LevyModel, a1_indices, moment_integrals, small_jump_mean
from ..numerics.sampling import RngStream, sample_increments_with_jumps
from ..numerics.sde import CoefficientSpec, stochastic_integral
from .report import FLAG_ADVISORY, FLAG_DEGENERATE, FLAG_JUMP_SUM_UNAVAILABLE, Check, ExperimentReport, fit_loglog

logger = logging.getLogger(__name__)

DEFAULT_WINDOW_GRID = tuple(2.0 ** -k for k in range(10, 3, -1))


class MomentBoundExperiment(BaseExperiment):
    """창 길이 Δ 에 대한 확률적분 η-모멘트의 감소 기울기 측정"""

    experiment_id = "moment_bound"

    def __init__(self, model: LevyModel, eta: float, gamma: float, delta: float,
                 integrand: Optional[CoefficientSpec] = None,
                 window_grid: Sequence[float] = DEFAULT_WINDOW_GRID, replicas: int = 100_000,
                 substeps: int = 16, tolerance: float = 0.1, closed_form_tolerance: float = 0.05, **kwargs):
        """
        Args:
            model: 구동 과정
            eta, gamma, delta: 0 < η ≤ δ ≤ γ ≤ 2
            integrand: 피적분 계수 H(Z_{u−}) (기본 H ≡ 1)
            window_grid: 창 길이 Δ 그리드
            replicas: Δ 당 replica 수
            substeps: 창 내부 좌측점 합 단계 수
            tolerance: 정리 기울기 허용오차
            closed_form_tolerance: 자기유사 기울기 허용오차
        """
        super().__init__(**kwargs)
        if not (0.0 < eta <= delta <= gamma <= 2.0):
            raise InputError(f"need 0 < eta <= delta <= gamma <= 2, got ({eta}, {delta}, {gamma})")
        self.model = model
        self.eta, self.gamma, self.delta = float(eta), float(gamma), float(delta)
        self.integrand = integrand or CoefficientSpec.constant(1.0)
        self.window_grid = sorted(float(w) for w in window_grid)
        if not self.window_grid or self.window_grid[0] <= 0:
            raise InputError("window_grid must hold positive values")
        self.replicas = int(replicas)
        self.substeps = int(substeps)
        self.tolerance = float(tolerance)
        self.closed_form_tolerance = float(closed_form_tolerance)
        self.regime = "a" if self.gamma >= 1.0 else "b"
        if self.regime == "b" and not np.all(np.isfinite(small_jump_mean(model))):
            raise RegimeError(f"gamma={self.gamma} < 1 needs a finite small-jump first moment; "
                              f"{model.kind.value} does not have one")

    def _self_similar_alpha(self) -> Optional[float]:
        # H 상수, 단일 지수 안정 과정이면 E|cZ(Δ)|^η ∝ Δ^{η/α}
        if not self.integrand.is_constant or self.model.kind not in STABLE_KINDS:
            return None
        alphas = set(a1_indices(self.model))
        return alphas.pop() if len(alphas) == 1 else None

    def _slope_checks(self, report: ExperimentReport, column: str, name: str) -> Optional[float]:
        values = report.column(column)
        if np.any(values <= 0):
            report.flag(FLAG_DEGENERATE)
            return None
        if values.size < 3:
            return None
        fit = fit_loglog(self.window_grid, values)
        if report.fit is None:
            report.fit = fit
        report.checks.append(Check(name, fit.slope, self.eta / self.gamma, self.tolerance, "ge"))
        return fit.slope

    def run(self) -> ExperimentReport:
        model, eta = self.model, self.eta
        jump_sum = self.regime == "b"
        if jump_sum and model.kind in STABLE_KINDS:
            jump_sum = False
        columns = ["window", "moment", "stderr"] + (["jump_sum_moment", "jump_sum_stderr"] if jump_sum else [])
        report = ExperimentReport(self.experiment_id, columns, x_column="window", y_column="moment",
                                  theoretical_exponent=eta / self.gamma)
        if self.regime == "b" and not jump_sum:
            report.flag(FLAG_JUMP_SUM_UNAVAILABLE)

        try:
            moments = moment_integrals(model, self.gamma, self.delta)
            if not moments.finite:
                logger.warning("moment integral diverges for gamma=%g, delta=%g; results are advisory",
                               self.gamma, self.delta)
                report.flag(FLAG_ADVISORY)
        except UnsupportedModelError as e:
            logger.info("moment integral unavailable: %s", e)
            report.flag(FLAG_ADVISORY)

        compensate = self.regime == "b"
        n_grid = len(self.window_grid)
        for g, window in enumerate(self.window_grid):
            def integral_batch(count: int, stream: RngStream, window=window) -> np.ndarray:
                total = stochastic_integral(self.integrand, model, window, self.substeps, stream, count,
                                            compensate=compensate)
                return np.linalg.norm(total, axis=1) ** eta

            summary = self.summarize(self.run_batches(integral_batch, self.replicas, grid_index=g))
            row = {"window": window, "moment": float(summary.mean[0]), "stderr": float(summary.stderr[0])}

            if jump_sum:
                def jump_batch(count: int, stream: RngStream, window=window) -> np.ndarray:
                    _, variation = sample_increments_with_jumps(model, window, count, stream)
                    return variation ** eta

                jumps = self.summarize(self.run_batches(jump_batch, self.replicas, grid_index=n_grid + g))
                row["jump_sum_moment"] = float(jumps.mean[0])
                row["jump_sum_stderr"] = float(jumps.stderr[0])
            report.table.append(row)
            logger.info("moments: window=%.4g moment=%.4g ± %.2g", window, row["moment"], row["stderr"])

        slope = self._slope_checks(report, "moment", "slope")
        alpha = self._self_similar_alpha()
        if slope is not None and alpha is not None and not math.isclose(self.integrand.value, 0.0):
            report.checks.append(Check("self_similarity", slope, eta / alpha, self.closed_form_tolerance, "abs"))
        if jump_sum:
            self._slope_checks(report, "jump_sum_moment", "jump_sum_slope")

        report.provenance = self.provenance(
            model=model.model_dump(mode="json"), integrand=self.integrand.model_dump(mode="json"),
            eta=eta, gamma=self.gamma, delta=self.delta, regime=self.regime, window_grid=self.window_grid,
            replicas=self.replicas, substeps=self.substeps)
        return report


def moment_bound_experiment(model: LevyModel, integrand: Optional[CoefficientSpec], eta: float, gamma: float,
                            delta: float, window_grid: Sequence[float] = DEFAULT_WINDOW_GRID,
                            replicas: int = 100_000, **kwargs) -> ExperimentReport:
    return MomentBoundExperiment(model, eta, gamma, delta, integrand=integrand, window_grid=window_grid,
                                 replicas=replicas, **kwargs).execute()
