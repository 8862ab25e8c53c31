#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
aniso-levy - 비등방 Lévy 구동 SDE 의 밀도 정칙성 가정 검사 및 수치 실험 도구

사용 예시:
    from aniso_levy import AnisoLevy, quick_check

    report = quick_check("z2", alphas=[1.2, 1.5], beta=1.0, chi=0.8)
    print(report.overall)
"""

__version__ = "1.0.0"
__author__ = "aniso-levy Team"
__license__ = "MIT"

from .api import AnisoLevy, RunOutcome, quick_check, quick_density, quick_rate
from .core.config import RunConfig, load_run_config
from .core.errors import AnisoLevyError
from .numerics.levy_models import LevyModel
from .numerics.sde import SdeProblem

__all__ = [
    'AnisoLevy',
    'RunOutcome',
    'quick_check',
    'quick_density',
    'quick_rate',
    'RunConfig',
    'load_run_config',
    'AnisoLevyError',
    'LevyModel',
    'SdeProblem',
]


def get_version():
    """버전 정보 반환"""
    return __version__


def get_info():
    """패키지 정보 반환"""
    return {
        "name": "aniso-levy",
        "version": __version__,
        "author": __author__,
        "license": __license__,
        "description": "비등방 Lévy SDE 밀도 정칙성 실험 시스템"
    }
