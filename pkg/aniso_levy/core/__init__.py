#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
aniso_levy/core/__init__.py

aniso-levy 공통 모듈 초기화 (오류 계층, 파일 유틸리티, 증분 계획 캐시)
"""

from .errors import (
    AnisoLevyError,
    InputError,
    ConfigError,
    ResolutionError,
    RegimeError,
    InfeasibleError,
    UnsupportedModelError,
    NumericError,
    UnboundedSearchError,
    TruncationError
)
from .plan_cache import IncrementPlanCache, get_plan_cache, preload_plans
from .utils import (
    validate_file_exists,
    load_json_config,
    save_json_result,
    save_csv_table,
    write_samples,
    read_samples,
    ensure_directory,
    format_file_size,
    list_artifacts
)

__all__ = [
    # 오류 계층
    'AnisoLevyError',
    'InputError',
    'ConfigError',
    'ResolutionError',
    'RegimeError',
    'InfeasibleError',
    'UnsupportedModelError',
    'NumericError',
    'UnboundedSearchError',
    'TruncationError',

    # 증분 계획 캐시
    'IncrementPlanCache',
    'get_plan_cache',
    'preload_plans',

    # 유틸리티 함수들
    'validate_file_exists',
    'load_json_config',
    'save_json_result',
    'save_csv_table',
    'write_samples',
    'read_samples',
    'ensure_directory',
    'format_file_size',
    'list_artifacts'
]
