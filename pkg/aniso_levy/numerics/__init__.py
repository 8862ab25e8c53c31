"""
수치 계층 - Lévy 모델, 표본 추출, SDE 근사, 가정 검사, 격자 밀도
"""

from .levy_models import Anisotropy, LevyModel, ModelKind, compute_anisotropy, moment_integrals, symbol_eval
from .sampling import RngStream, batch_stream, sample_increments, sample_path_increments
from .sde import CoefficientSpec, SdeProblem, couple_one_step, simulate_endpoint, simulate_path, stochastic_integral
from .hypotheses import ConditionReport, TheoremKind, check_diagonal, check_general, derive_lambda
from .density import Axis, GridDensity, besov_norm, mollify, stable_density_1d

__all__ = [
    'Anisotropy',
    'LevyModel',
    'ModelKind',
    'compute_anisotropy',
    'moment_integrals',
    'symbol_eval',
    'RngStream',
    'batch_stream',
    'sample_increments',
    'sample_path_increments',
    'CoefficientSpec',
    'SdeProblem',
    'couple_one_step',
    'simulate_endpoint',
    'simulate_path',
    'stochastic_integral',
    'ConditionReport',
    'TheoremKind',
    'check_diagonal',
    'check_general',
    'derive_lambda',
    'Axis',
    'GridDensity',
    'besov_norm',
    'mollify',
    'stable_density_1d',
]
