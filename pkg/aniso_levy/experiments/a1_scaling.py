#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
a1_scaling.py

(A1) 스케일링 실험 - t^{1/α_k}‖Δ_{h e_k} f_t‖₁/|h| 의 작은 t, 작은 h plateau
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy import special

from ..core.base_experiment import BaseExperiment
from ..core.errors import InputError, UnsupportedModelError
from ..numerics.density import Axis, gradient_l1, l1_shift_difference, stable_density_1d
from ..numerics.levy_models import STABLE_KINDS, LevyModel
from .report import Check, ExperimentReport, fit_loglog

logger = logging.getLogger(__name__)

DEFAULT_T_GRID = (0.5, 0.2, 0.1, 0.05)
DEFAULT_H_GRID = (1e-3,)
# 표준화 단위 반폭과 스케일당 셀 수
DEFAULT_HALF_WIDTH = 200.0
CELLS_PER_SCALE = 100
CELLS_PER_SHIFT = 4


def plateau_constant(alpha: float) -> float:
    """대칭 단봉 f_1 에 대해 ∫|f_1'| = 2 f_1(0) = 2Γ(1 + 1/α)/π"""
    return 2.0 * float(special.gamma(1.0 + 1.0 / alpha)) / math.pi


def component_alpha(model: LevyModel, axis: int) -> float:
    """축 k 가 1 차원 안정 인자를 이루면 그 지수 반환"""
    if model.kind not in STABLE_KINDS:
        raise UnsupportedModelError(f"{model.kind.value} has no exact density for the (A1) scan")
    if not 0 <= axis < model.dimension:
        raise InputError(f"axis {axis} out of range for dimension {model.dimension}")
    for indices, alpha in model.stable_groups():
        if axis in indices:
            if len(indices) != 1:
                raise UnsupportedModelError(f"axis {axis} lies in a {len(indices)}-dimensional block; "
                                            "the product reduction needs a 1-dimensional factor")
            return float(alpha)
    raise InputError(f"axis {axis} not covered by the model blocks")


class A1ScalingExperiment(BaseExperiment):
    """정확 밀도의 shift 차분으로 (A1) 상수 대체값을 측정"""

    experiment_id = "a1_scaling"

    def __init__(self, model: LevyModel, axis: int = 0,
                 h_grid: Sequence[float] = DEFAULT_H_GRID, t_grid: Sequence[float] = DEFAULT_T_GRID,
                 half_width: float = DEFAULT_HALF_WIDTH, expected_constant: Optional[float] = None,
                 tolerance: float = 0.05, **kwargs):
        """
        Args:
            model: 안정 계열 모델
            axis: 측정 축 k
            h_grid: shift 크기
            t_grid: 시간 그리드
            half_width: 표준화 단위 그리드 반폭
            expected_constant: plateau 기대값 (기본 2Γ(1+1/α_k)/π)
            tolerance: plateau 상대 허용오차
        """
        super().__init__(**kwargs)
        self.model = model
        self.axis = axis
        self.alpha = component_alpha(model, axis)
        self.h_grid = sorted({abs(float(h)) for h in h_grid})
        self.t_grid = sorted({float(t) for t in t_grid}, reverse=True)
        if not self.h_grid or not self.t_grid or min(self.h_grid) <= 0 or min(self.t_grid) <= 0:
            raise InputError("h_grid and t_grid must hold positive values")
        self.half_width = float(half_width)
        self.expected_constant = (plateau_constant(self.alpha) if expected_constant is None
                                  else float(expected_constant))
        self.tolerance = float(tolerance)

    def _axis_for(self, scale: float) -> Axis:
        step = min(min(self.h_grid) / CELLS_PER_SHIFT, scale / CELLS_PER_SCALE)
        half = self.half_width * scale
        count = 2 * int(math.ceil(half / step)) + 1
        return Axis(origin=-step * (count // 2), step=step, count=count)

    def run(self) -> ExperimentReport:
        columns = ["t", "h", "scaled_shift_l1", "scaled_gradient_l1", "grid_mass"]
        report = ExperimentReport(self.experiment_id, columns, x_column="t", y_column="scaled_shift_l1",
                                  theoretical_exponent=0.0)

        for t in self.t_grid:
            scale = t ** (1.0 / self.alpha)
            axis = self._axis_for(scale)
            logger.info("a1 scan: t=%g alpha=%g, %d nodes (step %.3g)", t, self.alpha, axis.count, axis.step)
            f_t = stable_density_1d(self.alpha, t, axis, check_mass=False)
            gradient = scale * gradient_l1(f_t, 0)
            for h in self.h_grid:
                value = scale * l1_shift_difference(f_t, 0, h) / h
                report.table.append({"t": t, "h": h, "scaled_shift_l1": value,
                                     "scaled_gradient_l1": gradient, "grid_mass": f_t.mass})

        h_min, t_min = self.h_grid[0], self.t_grid[-1]
        plateau = next(row["scaled_shift_l1"] for row in report.table
                       if row["t"] == t_min and row["h"] == h_min)
        report.checks.append(Check("plateau", plateau, self.expected_constant,
                                   self.tolerance * self.expected_constant, "abs"))
        # ‖Δf‖₁ ≤ 2
        worst = max(row["scaled_shift_l1"] * row["h"] / row["t"] ** (1.0 / self.alpha) for row in report.table)
        report.checks.append(Check("mass_cap", worst, 2.0, 1e-9, "le"))

        trend = [row for row in report.table if row["h"] == h_min]
        if len(trend) >= 3:
            report.fit = fit_loglog([row["t"] for row in trend], [row["scaled_shift_l1"] for row in trend])

        report.provenance = self.provenance(model=self.model.model_dump(mode="json"), axis=self.axis,
                                            alpha=self.alpha, h_grid=self.h_grid, t_grid=self.t_grid,
                                            half_width=self.half_width, plateau=plateau)
        logger.info("a1 scan plateau %.6f (expected %.6f)", plateau, self.expected_constant)
        return report


def a1_scaling_experiment(model: LevyModel, axis: int = 0, h_grid: Sequence[float] = DEFAULT_H_GRID,
                          t_grid: Sequence[float] = DEFAULT_T_GRID, **kwargs) -> ExperimentReport:
    """A1ScalingExperiment 를 실행하고 보고서 반환 (output_dir 가 있으면 저장)"""
    return A1ScalingExperiment(model, axis=axis, h_grid=h_grid, t_grid=t_grid, **kwargs).execute()
