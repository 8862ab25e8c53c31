#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
report.py

실험 보고서 - log-log 기울기 적합, 판정 항목, CSV/JSON/SVG 저장
"""

import io
import logging
import math
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy import stats

from ..core.errors import InputError
from ..core.utils import atomic_write_bytes, save_csv_table, save_json_result

logger = logging.getLogger(__name__)

FLAG_DEGENERATE = "degenerate"
FLAG_ADVISORY = "advisory"
FLAG_JUMP_SUM_UNAVAILABLE = "jump_sum_unavailable"

SVG_HASH_SALT = "aniso-levy"


@dataclass(frozen=True)
class LogLogFit:
    slope: float
    intercept: float
    r_squared: float

    def to_dict(self) -> Dict[str, float]:
        return {"slope": self.slope, "intercept": self.intercept, "r_squared": self.r_squared}


def fit_loglog(xs: Sequence[float], ys: Sequence[float]) -> LogLogFit:
    """
    (log x, log y) 최소제곱 직선

    Args:
        xs, ys: 양수 3 개 이상

    Returns:
        LogLogFit (기울기, 절편, R²)
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise InputError("xs and ys must be 1-d sequences of equal length")
    if x.size < 3:
        raise InputError(f"need at least 3 points, got {x.size}")
    if np.any(~np.isfinite(x)) or np.any(~np.isfinite(y)) or np.any(x <= 0) or np.any(y <= 0):
        raise InputError("fit_loglog needs finite positive values")

    lx, ly = np.log(x), np.log(y)
    fit = stats.linregress(lx, ly)
    residual = ly - (fit.intercept + fit.slope * lx)
    ss_tot = float(((ly - ly.mean()) ** 2).sum())
    ss_res = float((residual ** 2).sum())
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return LogLogFit(float(fit.slope), float(fit.intercept), r_squared)


@dataclass(frozen=True)
class Check:
    """
    단일 판정 항목

    direction: "ge" 는 measured ≥ theoretical − tolerance, "le" 는
    measured ≤ theoretical + tolerance, "abs" 는 |measured − theoretical| ≤ tolerance.
    """

    name: str
    measured: float
    theoretical: float
    tolerance: float
    direction: str = "abs"

    def __post_init__(self):
        if self.direction not in ("ge", "le", "abs"):
            raise InputError(f"unknown check direction '{self.direction}'")

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.measured):
            return False
        if self.direction == "ge":
            return self.measured >= self.theoretical - self.tolerance
        if self.direction == "le":
            return self.measured <= self.theoretical + self.tolerance
        return abs(self.measured - self.theoretical) <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "measured": self.measured, "theoretical": self.theoretical,
                "tolerance": self.tolerance, "direction": self.direction, "passed": self.passed}


@dataclass
class ExperimentReport:
    """실험 결과 표, 적합, 판정, 재현 정보"""

    experiment_id: str
    columns: List[str]
    table: List[Dict[str, Any]] = field(default_factory=list)
    fit: Optional[LogLogFit] = None
    theoretical_exponent: Optional[float] = None
    checks: List[Check] = field(default_factory=list)
    flags: List[str] = field(default_factory=list)
    provenance: Dict[str, Any] = field(default_factory=dict)
    x_column: Optional[str] = None
    y_column: Optional[str] = None

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def flag(self, name: str) -> None:
        if name not in self.flags:
            self.flags.append(name)

    def column(self, name: str) -> np.ndarray:
        return np.array([row[name] for row in self.table], dtype=float)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "experiment": self.experiment_id,
            "verdict": self.verdict,
            "fit": None if self.fit is None else self.fit.to_dict(),
            "theoretical_exponent": self.theoretical_exponent,
            "checks": [check.to_dict() for check in self.checks],
            "flags": list(self.flags),
            "provenance": self.provenance,
            "columns": list(self.columns),
            "table": self.table,
        }

    def write_artifacts(self, output_dir: str, plot: bool = False) -> List[str]:
        """<id>.csv, <id>.json, 선택적으로 <id>.svg 를 원자적으로 저장"""
        base = os.path.join(output_dir, self.experiment_id)
        paths = [base + ".csv", base + ".json"]
        save_csv_table(self.table, self.columns, paths[0])
        save_json_result(self.to_dict(), paths[1])
        if plot and self.x_column and self.y_column:
            svg = base + ".svg"
            if plot_loglog(self, svg):
                paths.append(svg)
        return paths


def plot_loglog(report: ExperimentReport, output_path: str) -> bool:
    """측정값과 이론 기울기 직선을 log-log SVG 로 저장 (양수 점이 없으면 False)"""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs = report.column(report.x_column)
    ys = report.column(report.y_column)
    keep = (xs > 0) & (ys > 0) & np.isfinite(xs) & np.isfinite(ys)
    if not keep.any():
        logger.warning("plot skipped: no positive points in %s", report.experiment_id)
        return False
    xs, ys = xs[keep], ys[keep]

    matplotlib.rcParams["svg.hashsalt"] = SVG_HASH_SALT
    fig, ax = plt.subplots(figsize=(6, 4))
    try:
        ax.loglog(xs, ys, "o-", label="measured")
        if report.fit is not None:
            ax.loglog(xs, np.exp(report.fit.intercept) * xs ** report.fit.slope, "--",
                      label=f"fit slope {report.fit.slope:.3f}")
            if report.theoretical_exponent is not None:
                anchor = np.exp(report.fit.intercept + report.fit.slope * np.log(xs[0]))
                ax.loglog(xs, anchor * (xs / xs[0]) ** report.theoretical_exponent, ":",
                          label=f"theory {report.theoretical_exponent:.3f}")
        ax.set_xlabel(report.x_column)
        ax.set_ylabel(report.y_column)
        ax.set_title(report.experiment_id)
        ax.legend()
        buffer = io.BytesIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    atomic_write_bytes(output_path, buffer.getvalue())
    return True
