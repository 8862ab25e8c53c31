#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
besov_growth.py

Besov 노름 폭발 실험 - ‖g_t‖_{B^{λ,a}_{1,∞}} 의 1/t 성장 지수
"""

import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from ..core.base_experiment import BaseExperiment
from ..core.errors import InputError
from ..numerics.density import (Axis, GridDensity, WeightedEnsemble, besov_norm, mollify, product_density,
                                stable_density_1d, weighted_endpoint_measure)
from ..numerics.hypotheses import derive_lambda, kappa_ge1, kappa_lt1
from ..numerics.levy_models import ModelKind, a1_indices, compute_anisotropy
from ..numerics.sampling import RngStream
from ..numerics.sde import SdeProblem, Structure, simulate_endpoint
from .one_step_rate import problem_kappa
from .report import FLAG_DEGENERATE, Check, ExperimentReport, fit_loglog

logger = logging.getLogger(__name__)

DEFAULT_T_GRID = tuple(2.0 ** -k for k in range(8, -1, -1))
DEFAULT_RADIUS_FACTOR = 0.1
CELLS_PER_WINDOW = 8
MAX_NODES_PER_AXIS = 1024
TAIL_QUANTILE = 0.005
JACKKNIFE_GROUPS = 8


def constant_diagonal_scales(problem: SdeProblem) -> Optional[np.ndarray]:
    """σ 가 상수 대각이면 대각 값, 아니면 None"""
    if not problem.is_constant():
        return None
    sigma = problem.sigma_matrices(np.zeros((1, problem.dimension)))[0]
    if np.any(sigma - np.diag(np.diag(sigma))):
        return None
    return np.diag(sigma).copy()


class BesovGrowthExperiment(BaseExperiment):
    """가중 경험 밀도의 Besov 노름을 t 그리드에서 측정"""

    experiment_id = "besov_growth"

    def __init__(self, problem: SdeProblem, lam: Optional[float] = None,
                 t_grid: Sequence[float] = DEFAULT_T_GRID, replicas: int = 100_000,
                 radius_factor: float = DEFAULT_RADIUS_FACTOR, steps_per_unit: int = 256,
                 max_nodes_per_axis: int = MAX_NODES_PER_AXIS, tolerance: float = 0.1,
                 oracle_tolerance: float = 0.1, jackknife_groups: int = JACKKNIFE_GROUPS, **kwargs):
        """
        Args:
            problem: SDE 문제
            lam: Besov 지수 λ (None 이면 가정에서 구성)
            t_grid: 시간 그리드
            replicas: t 당 끝점 수
            radius_factor: mollifier 반경 r = c·t^{1/ᾱ} 의 c
            steps_per_unit: Euler 단위시간당 단계 수 (상수 계수면 1 단계)
            max_nodes_per_axis: 축당 그리드 노드 상한
            tolerance: 성장 지수 허용오차
            oracle_tolerance: 정확 밀도 대비 상대 허용오차
            jackknife_groups: stderr 용 leave-one-group-out 그룹 수
        """
        super().__init__(**kwargs)
        self.problem = problem
        self.alphas = a1_indices(problem.model)
        self.anisotropy = compute_anisotropy(self.alphas)
        self.lam = self._default_lambda() if lam is None else float(lam)
        ratios = self.lam / self.anisotropy.array
        if np.any(ratios <= 0) or np.any(ratios >= 1):
            raise InputError(f"lambda={self.lam} must satisfy lambda/a_k in (0, 1)")
        self.t_grid = sorted(float(t) for t in t_grid)
        if not self.t_grid or self.t_grid[0] <= 0:
            raise InputError("t_grid must hold positive values")
        self.replicas = int(replicas)
        self.radius_factor = float(radius_factor)
        self.steps_per_unit = int(steps_per_unit)
        self.max_nodes_per_axis = int(max_nodes_per_axis)
        self.tolerance = float(tolerance)
        self.oracle_tolerance = float(oracle_tolerance)
        self.jackknife_groups = int(jackknife_groups)
        if self.jackknife_groups < 2:
            raise InputError("jackknife_groups must be at least 2")

    def _default_lambda(self) -> float:
        problem = self.problem
        if problem.structure == Structure.DIAGONAL:
            gamma, delta = max(problem.gammas), min(problem.deltas)
            kappa = problem_kappa(problem)
        elif problem.gamma is None:
            # 극한 모멘트 선택 γ = α^max, δ = α^min
            gamma, delta = max(self.alphas), min(self.alphas)
            beta = min(problem.beta, 1.0)
            kappa = (kappa_ge1(gamma, delta, beta, problem.chi) if gamma >= 1.0
                     else kappa_lt1(gamma, beta, problem.chi))
        else:
            gamma, delta = problem.gamma, problem.delta
            kappa = problem_kappa(problem)[0]
        plan = derive_lambda(self.anisotropy, self.alphas, kappa, problem.chi, delta, gamma)
        logger.info("besov: derived lambda=%g (eta=%g)", plan.lam, plan.eta)
        return plan.lam

    # --- 그리드 ---

    def _axes(self, points: np.ndarray, r: float) -> List[Axis]:
        axes = []
        for k, weight in enumerate(self.anisotropy.weights):
            half = r ** weight
            lo, hi = np.quantile(points[:, k], [TAIL_QUANTILE, 1.0 - TAIL_QUANTILE])
            lo, hi = lo - half, hi + half
            step = min(max(2.0 * half / CELLS_PER_WINDOW, (hi - lo) / self.max_nodes_per_axis), 2.0 * half / 3.0)
            count = int(math.ceil((hi - lo) / step)) + 1
            if count > self.max_nodes_per_axis:
                center = float(np.median(points[:, k]))
                count = self.max_nodes_per_axis
                lo = center - step * (count // 2)
                logger.warning("besov: axis %d truncated to %d nodes around %.4g", k, count, center)
            axes.append(Axis(origin=float(lo), step=float(step), count=count))
        return axes

    def _jackknife_stderr(self, points: np.ndarray, weights: np.ndarray, r: float, axes: List[Axis]) -> float:
        """배치 순서의 연속 그룹을 하나씩 뺀 노름들의 jackknife 표준오차"""
        n = points.shape[0]
        groups = min(self.jackknife_groups, n)
        if groups < 2:
            return math.nan
        labels = np.arange(n) * groups // n
        values = np.empty(groups)
        for i in range(groups):
            keep = labels != i
            ensemble = WeightedEnsemble(points[keep], weights[keep] / int(keep.sum()))
            f = mollify(ensemble, r, self.anisotropy, axes)
            values[i] = besov_norm(f, self.lam, self.anisotropy).value
        spread = values - values.mean()
        return float(math.sqrt((groups - 1) / groups * np.sum(spread ** 2)))

    def _exact_density(self, axes: List[Axis], t: float, scales: np.ndarray) -> GridDensity:
        x0 = np.asarray(self.problem.x0, dtype=float)
        factors = []
        for k, ax in enumerate(axes):
            shifted = Axis(origin=ax.origin - x0[k], step=ax.step, count=ax.count)
            t_eff = t * abs(scales[k]) ** self.alphas[k]
            factors.append(stable_density_1d(self.alphas[k], t_eff, shifted, check_mass=False))
        product = product_density(factors)
        return GridDensity(axes, product.values * float(np.min(np.abs(scales))))

    def _oracle_available(self, scales: Optional[np.ndarray]) -> bool:
        model = self.problem.model
        return (scales is not None and np.all(scales != 0) and self.problem.has_zero_drift()
                and (model.kind == ModelKind.COMPONENT_STABLE
                     or (model.kind == ModelKind.ISOTROPIC_STABLE and model.dimension == 1)))

    def run(self) -> ExperimentReport:
        problem = self.problem
        scales = constant_diagonal_scales(problem)
        oracle = self._oracle_available(scales)
        columns = ["t", "inv_t", "r", "norm", "stderr", "l1", "nodes"] + (["exact_norm", "ratio"] if oracle else [])
        a_min = min(self.alphas)
        report = ExperimentReport(self.experiment_id, columns, x_column="inv_t", y_column="norm",
                                  theoretical_exponent=1.0 / a_min)
        mean_alpha = self.anisotropy.mean_alpha

        for g, t in enumerate(self.t_grid):
            steps = 1 if problem.is_constant() else max(1, int(math.ceil(t * self.steps_per_unit)))

            def batch(count: int, stream: RngStream, t=t, steps=steps) -> np.ndarray:
                return simulate_endpoint(problem, t, steps, stream, replicas=count)

            points = self.run_batches(batch, self.replicas, grid_index=g)
            measure = weighted_endpoint_measure(points, problem)
            ensemble = WeightedEnsemble(points, measure.weights / points.shape[0])
            r = min(1.0, self.radius_factor * t ** (1.0 / mean_alpha))
            axes = self._axes(points, r)
            f = mollify(ensemble, r, self.anisotropy, axes)
            result = besov_norm(f, self.lam, self.anisotropy)
            err = self._jackknife_stderr(points, measure.weights, r, axes)
            row = {"t": t, "inv_t": 1.0 / t, "r": r, "norm": result.value, "stderr": err, "l1": result.l1,
                   "nodes": int(np.prod([ax.count for ax in axes]))}
            if oracle:
                exact = besov_norm(self._exact_density(axes, t, scales), self.lam, self.anisotropy)
                row["exact_norm"] = exact.value
                row["ratio"] = result.value / exact.value if exact.value > 0 else math.nan
            report.table.append(row)
            logger.info("besov: t=%.4g r=%.3g norm=%.5g ± %.2g", t, r, result.value, err)

        norms = report.column("norm")
        if np.any(norms <= 0):
            report.flag(FLAG_DEGENERATE)
        else:
            small = [row for row in report.table if row["t"] <= 1.0]
            if len(small) >= 3:
                report.fit = fit_loglog([row["inv_t"] for row in small], [row["norm"] for row in small])
                report.checks.append(Check("growth", report.fit.slope, 1.0 / a_min, self.tolerance, "le"))
            anchor = next((row["norm"] for row in report.table if row["t"] == 1.0), None)
            large = [row["norm"] for row in report.table if row["t"] > 1.0]
            if anchor is not None and large:
                report.checks.append(Check("large_t_cap", max(large) / anchor, 1.1, 0.0, "le"))
            if oracle:
                worst = float(np.nanmax(np.abs(report.column("ratio") - 1.0)))
                report.checks.append(Check("oracle", worst, 0.0, self.oracle_tolerance, "le"))

        report.provenance = self.provenance(
            problem=problem.model_dump(mode="json"), lam=self.lam, anisotropy=list(self.anisotropy.weights),
            t_grid=self.t_grid, replicas=self.replicas, radius_factor=self.radius_factor,
            steps_per_unit=self.steps_per_unit, max_nodes_per_axis=self.max_nodes_per_axis,
            jackknife_groups=self.jackknife_groups)
        return report


def besov_growth_experiment(problem: SdeProblem, lam: Optional[float] = None,
                            t_grid: Sequence[float] = DEFAULT_T_GRID, replicas: int = 100_000,
                            **kwargs) -> ExperimentReport:
    """
    BesovGrowthExperiment 실행

    비등방성 a 는 모델의 (A1) 지수에서 정해진다.
    """
    return BesovGrowthExperiment(problem, lam=lam, t_grid=t_grid, replicas=replicas, **kwargs).execute()
