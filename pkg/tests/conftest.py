import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from aniso_levy.core.plan_cache import get_plan_cache
from aniso_levy.numerics.levy_models import LevyModel
from aniso_levy.numerics.sde import CoefficientSpec, SdeProblem


def constant(value, declared=1.0):
    return CoefficientSpec.constant(value, declared_exponent=declared)


def identity_problem(model, drift=0.0, scale=1.0, gamma=None, delta=None, chi=0.9):
    """σ = scale·I, b ≡ drift 인 상수 계수 문제"""
    d = model.dimension
    matrix = tuple(tuple(constant(scale if i == j else 0.0, chi) for j in range(d)) for i in range(d))
    return SdeProblem(dimension=d, model=model, x0=(0.0,) * d, drift=(constant(drift),) * d,
                      diffusion_matrix=matrix, gamma=gamma, delta=delta)


def mean_reverting_problem(model, gamma=1.6, delta=1.4, beta=1.0, chi=0.9):
    """b(x) = clip(−x, ±1), σ 대각 smooth_bounded 인 일반 구조 문제"""
    d = model.dimension
    drift = tuple(CoefficientSpec(family="affine_clamped", declared_exponent=beta, c1=-1.0, clamp=1.0, axis=k)
                  for k in range(d))
    smooth = CoefficientSpec(family="smooth_bounded", declared_exponent=chi, c0=1.0, c1=0.5)
    matrix = tuple(tuple(smooth if i == j else constant(0.0, chi) for j in range(d)) for i in range(d))
    return SdeProblem(dimension=d, model=model, x0=(0.0,) * d, drift=drift, diffusion_matrix=matrix,
                      gamma=gamma, delta=delta)


def diagonal_problem(model, gammas, deltas, beta=0.5, chi=0.5):
    """mean_reverting_problem 과 같은 계수를 대각 구조와 성분별 γ_k, δ_k 로"""
    d = model.dimension
    drift = tuple(CoefficientSpec(family="affine_clamped", declared_exponent=beta, c1=-1.0, clamp=1.0, axis=k)
                  for k in range(d))
    diffusion = tuple(CoefficientSpec(family="smooth_bounded", declared_exponent=chi, c0=1.0, c1=0.5, axis=k)
                      for k in range(d))
    return SdeProblem(dimension=d, model=model, x0=(0.0,) * d, drift=drift, diffusion=diffusion,
                      structure="diagonal", gammas=tuple(gammas), deltas=tuple(deltas))


@pytest.fixture(autouse=True)
def clear_plan_cache():
    yield
    get_plan_cache().clear_cache()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def stable_1d():
    return LevyModel.component_stable([1.5])


@pytest.fixture
def stable_2d():
    return LevyModel.component_stable([1.5, 1.5])


@pytest.fixture
def tempered_symmetric():
    return LevyModel.tempered_one_sided(c_plus=[1.0], c_minus=[1.0], alpha_plus=[0.8], alpha_minus=[0.8])
