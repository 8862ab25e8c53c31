#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
density.py

밀도 계산 - 특성함수 FFT 역변환, 비등방 mollifier, Besov/Hölder–Zygmund 노름
"""

import itertools
import logging
import math
import os
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import ndimage, special

from ..core.errors import InputError, NumericError, ResolutionError, TruncationError
from ..core.utils import load_json_config, read_samples, save_csv_table, save_json_result, write_samples
from .levy_models import Anisotropy

logger = logging.getLogger(__name__)

MIN_FFT_NODES = 2 ** 14
MAX_FFT_NODES = 2 ** 24
DEFAULT_ALIAS_TOL = 2e-7
NEGATIVE_CLIP = 1e-12
MASS_DEFICIT_LIMIT = 1e-3
LEAKAGE_WARNING = 1e-3


@dataclass(frozen=True)
class Axis:
    """균일 축: origin + step·j, j = 0..count−1"""

    origin: float
    step: float
    count: int

    def __post_init__(self):
        if not (self.step > 0 and math.isfinite(self.step)) or self.count < 1:
            raise InputError(f"axis needs step > 0 and count >= 1, got {self}")

    @classmethod
    def centered(cls, half_width: float, count: int) -> "Axis":
        step = 2.0 * half_width / (count - 1)
        return cls(origin=-half_width, step=step, count=count)

    @property
    def nodes(self) -> np.ndarray:
        return self.origin + self.step * np.arange(self.count)

    @property
    def span(self) -> float:
        return self.step * self.count


class GridFunction:
    """직사각 그리드 위 함수 값 (부호 제한 없음, 생성 후 불변)"""

    def __init__(self, axes: Sequence[Axis], values: np.ndarray):
        self.axes: Tuple[Axis, ...] = tuple(axes)
        values = np.array(values, dtype=float, copy=True)
        expected = tuple(ax.count for ax in self.axes)
        if values.shape != expected:
            raise InputError(f"values shape {values.shape} does not match axes {expected}")
        values.setflags(write=False)
        self.values = values

    @property
    def dimension(self) -> int:
        return len(self.axes)

    @property
    def cell_volume(self) -> float:
        return float(np.prod([ax.step for ax in self.axes]))

    def integral(self) -> float:
        return float(self.values.sum() * self.cell_volume)

    def l1(self) -> float:
        return float(np.abs(self.values).sum() * self.cell_volume)

    def sup(self) -> float:
        return float(np.abs(self.values).max())

    def value_at_nearest(self, point: Sequence[float]) -> float:
        idx = tuple(int(round((p - ax.origin) / ax.step)) for p, ax in zip(point, self.axes))
        return float(self.values[idx])


class GridDensity(GridFunction):
    """음이 아닌 그리드 밀도"""

    def __init__(self, axes: Sequence[Axis], values: np.ndarray):
        super().__init__(axes, values)
        if np.any(self.values < 0) or not np.all(np.isfinite(self.values)):
            raise InputError("density values must be finite and nonnegative")
        self._mass = self.integral()

    @property
    def mass(self) -> float:
        return self._mass

    @property
    def mass_deficit(self) -> float:
        """1 − 그리드 질량 (그리드 밖 꼬리 질량)"""
        return 1.0 - self._mass


@dataclass
class WeightedEnsemble:
    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        self.weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if self.weights.size != self.points.shape[0]:
            raise InputError("one weight per point is required")
        if not np.all(np.isfinite(self.weights)) or np.any(self.weights < 0):
            raise InputError("weights must be finite and nonnegative")

    @classmethod
    def uniform(cls, points: np.ndarray) -> "WeightedEnsemble":
        points = np.atleast_2d(np.asarray(points, dtype=float))
        n = points.shape[0]
        return cls(points, np.full(n, 1.0 / n))

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())


@dataclass(frozen=True)
class BesovResult:
    value: float
    l1: float
    per_axis_sup: Tuple[float, ...]
    argmax_h: Tuple[float, ...]


def aniso_norm(x: np.ndarray, a: Anisotropy) -> Union[float, np.ndarray]:
    """|x|_a = max_i |x_i|^{1/a_i} (행 단위 입력 허용)"""
    x = np.asarray(x, dtype=float)
    weights = a.array
    if x.shape[-1] != weights.size:
        raise InputError(f"vector length {x.shape[-1]} does not match anisotropy dimension {weights.size}")
    out = np.max(np.abs(x) ** (1.0 / weights), axis=-1)
    return float(out) if out.ndim == 0 else out


def default_h_grid() -> np.ndarray:
    """2^{−20}…2⁰ 반 옥타브 간격 41 개"""
    return np.geomspace(2.0 ** -20, 1.0, 41)


def _box_kernel(half_width: float, step: float) -> np.ndarray:
    # 셀 [j·s − s/2, j·s + s/2] 와 (−w, w) 의 겹침 길이 / (2w·s)
    reach = int(math.ceil(half_width / step + 0.5))
    centers = step * np.arange(-reach, reach + 1)
    lo = np.maximum(centers - step / 2.0, -half_width)
    hi = np.minimum(centers + step / 2.0, half_width)
    overlap = np.clip(hi - lo, 0.0, None)
    return overlap / (2.0 * half_width * step)


def mollify(ensemble: WeightedEnsemble, r: float, a: Anisotropy, axes: Sequence[Axis]) -> GridDensity:
    """
    가중 경험 측도와 φ_r = (2r)^{−d}1_{|x|_a<r} 의 합성곱을 그리드에서 계산

    Args:
        ensemble: 점과 가중치
        r: mollifier 반경 (0,1]
        a: 비등방성
        axes: 출력 그리드 축

    Returns:
        GridDensity (그리드 밖으로 빠진 질량은 경고로 보고)
    """
    if not (0.0 < r <= 1.0):
        raise InputError(f"r must lie in (0, 1], got {r}")
    axes = tuple(axes)
    d = len(axes)
    if ensemble.points.shape[1] != d or a.dimension != d:
        raise InputError("ensemble, anisotropy and grid dimensions differ")

    half_widths = [r ** w for w in a.weights]
    for k, (w, ax) in enumerate(zip(half_widths, axes)):
        if 2.0 * w / ax.step < 3.0 - 1e-9:
            raise ResolutionError(f"axis {k}: window 2r^a_k = {2 * w:.3g} spans fewer than 3 cells "
                                  f"of step {ax.step:.3g}")

    edges = [ax.origin - ax.step / 2.0 + ax.step * np.arange(ax.count + 1) for ax in axes]
    hist, _ = np.histogramdd(ensemble.points, bins=edges, weights=ensemble.weights)

    values = hist
    for k, (w, ax) in enumerate(zip(half_widths, axes)):
        values = ndimage.convolve1d(values, _box_kernel(w, ax.step), axis=k, mode="constant", cval=0.0)
    values = np.clip(values, 0.0, None)

    density = GridDensity(axes, values)
    total = ensemble.total_weight
    if total > 0:
        leakage = 1.0 - density.mass / total
        if leakage > LEAKAGE_WARNING:
            logger.warning("mollify: %.3g of the ensemble weight falls outside the grid", leakage)
    return density


def _stable_tail_distance(alpha: float, tol: float) -> float:
    if alpha >= 2.0:
        return 40.0
    tail = special.gamma(1.0 + alpha) * math.sin(math.pi * alpha / 2.0) / math.pi
    return max(40.0, (2.0 * tail * special.zeta(1.0 + alpha) / tol) ** (1.0 / (1.0 + alpha)))


def stable_density_1d(alpha: float, t: float, axis: Axis, tol: float = DEFAULT_ALIAS_TOL,
                      check_mass: bool = True) -> GridDensity:
    """
    exp(−t|ξ|^α) 의 FFT 역변환으로 f_t 계산

    표준화 밀도 f_1 을 출력 노드와 일치하는 FFT 그리드에서 구한 뒤 t^{1/α} 로
    rescale 한다. 주기는 꼬리 aliasing 이 tol 이하가 되도록 잡는다.
    """
    if not (0.0 < alpha <= 2.0):
        raise InputError(f"alpha={alpha} must lie in (0, 2]")
    if not t > 0:
        raise InputError(f"t must be positive, got {t}")

    scale = t ** (1.0 / alpha)
    y0 = axis.origin / scale
    dy_out = axis.step / scale
    dy_max = math.pi / 40.0 ** (1.0 / alpha)
    refine = max(1, int(math.ceil(dy_out / dy_max)))
    dy = dy_out / refine

    y_end = y0 + dy_out * (axis.count - 1)
    reach = max(abs(y0), abs(y_end))
    period = max(reach + _stable_tail_distance(alpha, tol), (y_end - y0) + dy)
    nodes = max(MIN_FFT_NODES, 1 << int(math.ceil(math.log2(period / dy))))
    if nodes > MAX_FFT_NODES:
        raise TruncationError(f"FFT inversion needs {nodes} nodes (cap {MAX_FFT_NODES}); "
                              "coarsen the grid or loosen the tolerance", mass_deficit=float("nan"))
    logger.debug("stable_density_1d alpha=%g t=%g: %d FFT nodes, refine=%d", alpha, t, nodes, refine)

    xi = 2.0 * math.pi * np.fft.fftfreq(nodes, d=dy)
    spectrum = np.exp(-np.abs(xi) ** alpha - 1j * xi * y0)
    dxi = 2.0 * math.pi / (nodes * dy)
    standard = np.fft.fft(spectrum).real * dxi / (2.0 * math.pi)
    values = standard[: refine * axis.count: refine][: axis.count] / scale

    worst = float(values.min())
    if worst < -NEGATIVE_CLIP:
        raise NumericError(f"FFT inversion produced a negative value {worst:.3g}", partial_sum=float(values.sum()))
    density = GridDensity((axis,), np.clip(values, 0.0, None))
    logger.debug("stable_density_1d alpha=%g t=%g: mass deficit %.3g", alpha, t, density.mass_deficit)

    if check_mass and density.mass_deficit > MASS_DEFICIT_LIMIT:
        raise TruncationError(f"grid span holds mass {density.mass:.6f}; widen the grid",
                              mass_deficit=density.mass_deficit)
    return density


def product_density(factors: Sequence[GridDensity]) -> GridDensity:
    """텐서곱 밀도 f = f¹ ⊗ … ⊗ f^m"""
    factors = list(factors)
    if not factors:
        raise InputError("need at least one factor")
    values = factors[0].values
    axes = list(factors[0].axes)
    for factor in factors[1:]:
        values = np.multiply.outer(values, factor.values)
        axes.extend(factor.axes)
    return GridDensity(axes, values)


def _shifted(values: np.ndarray, axis: int, shift_cells: float) -> np.ndarray:
    # g[j] = f(x_j + h), 선형 보간, 범위 밖은 0
    n = int(math.floor(shift_cells))
    frac = shift_cells - n
    length = values.shape[axis]
    idx = np.arange(length) + n

    def take(index):
        valid = (index >= 0) & (index < length)
        out = np.take(values, np.clip(index, 0, length - 1), axis=axis)
        shape = [1] * values.ndim
        shape[axis] = length
        return out * valid.reshape(shape)

    return (1.0 - frac) * take(idx) + frac * take(idx + 1) if frac > 0 else take(idx)


def l1_shift_difference(f: GridFunction, axis: int, h: float) -> float:
    """∫|f(x + h e_k) − f(x)| dx (격자 밖은 0 으로 채움)"""
    if not 0 <= axis < f.dimension:
        raise InputError(f"axis {axis} out of range")
    ax = f.axes[axis]
    h = abs(float(h))
    if h > ax.span:
        raise InputError(f"shift {h} exceeds the grid span {ax.span} on axis {axis}")
    if h == 0.0:
        return 0.0
    pad = int(math.ceil(h / ax.step)) + 2
    widths = [(0, 0)] * f.dimension
    widths[axis] = (pad, pad)
    padded = np.pad(f.values, widths)
    diff = _shifted(padded, axis, h / ax.step) - padded
    return float(np.abs(diff).sum() * f.cell_volume)


def _check_exponents(level: float, a: Anisotropy, dimension: int) -> np.ndarray:
    if a.dimension != dimension:
        raise InputError("anisotropy dimension does not match the grid")
    ratios = level / a.array
    if np.any(ratios <= 0) or np.any(ratios >= 1):
        raise InputError(f"need level/a_k in (0, 1), got {ratios.tolist()}")
    return ratios


def besov_norm(f: GridFunction, lam: float, a: Anisotropy,
               h_grid: Optional[Sequence[float]] = None) -> BesovResult:
    """
    ‖f‖_{B^{λ,a}_{1,∞}} 의 그리드 대체값

    sup_{h∈[−1,1]} 은 양/음 부호의 기하 h 그리드 최대로 바꾼다. 그리드 폭을 넘는
    shift 는 지지집합이 겹치지 않으므로 2‖f‖₁ 를 쓴다.
    """
    ratios = _check_exponents(lam, a, f.dimension)
    h_values = default_h_grid() if h_grid is None else np.asarray(h_grid, dtype=float)
    if h_values.size == 0:
        raise InputError("h grid is empty")
    l1 = f.l1()

    sups, argmax = [], []
    for k in range(f.dimension):
        best, best_h = 0.0, 0.0
        for magnitude in np.abs(h_values):
            if magnitude == 0.0 or magnitude > 1.0:
                continue
            for h in (magnitude, -magnitude):
                if magnitude > f.axes[k].span:
                    diff = 2.0 * l1
                else:
                    diff = l1_shift_difference(f, k, h)
                value = diff / magnitude ** ratios[k]
                if value > best:
                    best, best_h = value, h
        sups.append(best)
        argmax.append(best_h)
    return BesovResult(value=l1 + sum(sups), l1=l1, per_axis_sup=tuple(sups), argmax_h=tuple(argmax))


def holder_zygmund_norm(phi: GridFunction, eta: float, a: Anisotropy,
                        h_grid: Optional[Sequence[float]] = None) -> float:
    """‖φ‖_∞ + Σ_k sup_h |h|^{−η/a_k} ‖Δ_{he_k}φ‖_∞ (x, x+h 모두 그리드 내부인 노드만)"""
    ratios = _check_exponents(eta, a, phi.dimension)
    h_values = default_h_grid() if h_grid is None else np.asarray(h_grid, dtype=float)
    if h_values.size == 0:
        raise InputError("h grid is empty")

    total = phi.sup()
    for k, ax in enumerate(phi.axes):
        best = 0.0
        for magnitude in np.abs(h_values):
            cells = magnitude / ax.step
            if magnitude == 0.0 or magnitude > 1.0 or cells > ax.count - 2:
                continue
            for sign in (1.0, -1.0):
                shifted = _shifted(phi.values, k, sign * cells)
                diff = np.abs(shifted - phi.values)
                reach = int(math.ceil(cells))
                index = [slice(None)] * phi.dimension
                index[k] = slice(0, ax.count - reach - 1) if sign > 0 else slice(reach + 1, ax.count)
                interior = diff[tuple(index)]
                if interior.size:
                    best = max(best, float(interior.max()) / magnitude ** ratios[k])
        total += best
    return total


def gradient_l1(f: GridFunction, axis: int) -> float:
    """‖∂_k f‖₁ (중앙 차분)"""
    if not 0 <= axis < f.dimension:
        raise InputError(f"axis {axis} out of range")
    grad = np.gradient(f.values, f.axes[axis].step, axis=axis)
    return float(np.abs(grad).sum() * f.cell_volume)


def weighted_endpoint_measure(points: np.ndarray,
                              sigma: Union[Callable[[np.ndarray], np.ndarray], object]) -> WeightedEnsemble:
    """
    가중치 1/|σ(x)^{-1}| = σ(x) 의 최소 특이값 (특이 행렬이면 0)

    Args:
        points: (n, d) 끝점
        sigma: SdeProblem 또는 (n, d) -> (n, d, d) 함수
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    matrices = sigma.sigma_matrices(points) if hasattr(sigma, "sigma_matrices") else sigma(points)
    singular = np.linalg.svd(np.asarray(matrices, dtype=float), compute_uv=False)
    weights = singular.min(axis=-1)
    weights = np.where(weights > 1e-300, weights, 0.0)
    return WeightedEnsemble(points, weights)


# --- 저장 ---

def _sidecar(path: str) -> str:
    return path + ".json"


def save_grid_density(f: GridFunction, output_path: str) -> None:
    """값은 샘플 바이너리 포맷(n × 1), 축 정보는 JSON sidecar 로 저장"""
    write_samples(f.values.reshape(-1, 1), output_path)
    save_json_result({
        "kind": "density" if isinstance(f, GridDensity) else "function",
        "axes": [{"origin": ax.origin, "step": ax.step, "count": ax.count} for ax in f.axes],
    }, _sidecar(output_path))


def load_grid_density(input_path: str) -> GridFunction:
    meta = load_json_config(_sidecar(input_path))
    axes = [Axis(**item) for item in meta["axes"]]
    flat = read_samples(input_path)
    values = flat.reshape([ax.count for ax in axes])
    cls = GridDensity if meta.get("kind") == "density" else GridFunction
    return cls(axes, values)


def export_grid_csv(f: GridFunction, output_path: str) -> None:
    """노드마다 한 행: x0, …, x_{d−1}, value"""
    columns = [f"x{k}" for k in range(f.dimension)] + ["value"]
    node_lists = [ax.nodes for ax in f.axes]
    rows = ({**{f"x{k}": float(c) for k, c in enumerate(coords)}, "value": float(v)}
            for coords, v in zip(itertools.product(*node_lists), f.values.reshape(-1)))
    save_csv_table(rows, columns, output_path)
