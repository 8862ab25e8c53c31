"""
측정 실험 모음 - (A1) 스케일링, 한 단계 수렴률, Besov 폭발, 모멘트 경계
"""

from .report import Check, ExperimentReport, LogLogFit, fit_loglog, plot_loglog
from .a1_scaling import A1ScalingExperiment, a1_scaling_experiment
from .one_step_rate import OneStepRateExperiment, one_step_rate_experiment
from .besov_growth import BesovGrowthExperiment, besov_growth_experiment
from .moment_bound import MomentBoundExperiment, moment_bound_experiment
from .simulation import SimulationRun

__all__ = [
    'Check',
    'ExperimentReport',
    'LogLogFit',
    'fit_loglog',
    'plot_loglog',
    'A1ScalingExperiment',
    'OneStepRateExperiment',
    'BesovGrowthExperiment',
    'MomentBoundExperiment',
    'SimulationRun',
    'a1_scaling_experiment',
    'one_step_rate_experiment',
    'besov_growth_experiment',
    'moment_bound_experiment',
]
