#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
errors.py

aniso-levy 예외 계층
"""

from typing import Optional, Sequence


class AnisoLevyError(Exception):
    """모든 패키지 예외의 루트"""


class InputError(AnisoLevyError, ValueError):
    """파라미터 도메인 위반"""


class ConfigError(InputError):
    """설정 문서 검증 실패 (JSON 경로 포함)"""

    def __init__(self, message: str, path: Sequence = ()):
        self.path = tuple(path)
        location = ".".join(str(p) for p in self.path) or "<root>"
        super().__init__(f"{location}: {message}")


class ResolutionError(InputError):
    """그리드 해상도가 mollifier 창보다 거친 경우"""


class RegimeError(InputError):
    """γ 구간과 맞지 않는 근사/보정을 요청한 경우"""


class InfeasibleError(InputError):
    """λ 구성이 불가능한 경우 (κα_j ≤ 1)"""

    def __init__(self, message: str, index: int):
        self.index = index
        super().__init__(message)


class UnsupportedModelError(InputError):
    """해당 연산을 지원하지 않는 모델 종류"""


class NumericError(AnisoLevyError, RuntimeError):
    """수치 계산이 허용 오차 내에서 수렴하지 않음"""

    def __init__(self, message: str, partial_sum: Optional[float] = None):
        self.partial_sum = partial_sum
        super().__init__(message)


class UnboundedSearchError(NumericError):
    """δ(η)가 탐색 범위에서 1/t에 도달하지 못함"""


class TruncationError(NumericError):
    """그리드 범위가 좁아 질량 결손이 허용치를 넘음"""

    def __init__(self, message: str, mass_deficit: float):
        self.mass_deficit = mass_deficit
        super().__init__(message, partial_sum=1.0 - mass_deficit)
