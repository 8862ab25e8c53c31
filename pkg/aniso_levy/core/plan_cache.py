"""
plan_cache.py

증분 계획 캐시 - 복합 Poisson 테이블을 (모델, cutoff) 단위로 재사용
"""

import logging
import threading
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

logger = logging.getLogger(__name__)


class IncrementPlanCache:
    """스레드 안전한 증분 계획 캐시"""

    def __init__(self):
        self.plan_cache: Dict[Tuple[str, Optional[float]], Any] = {}
        self.plan_lock = threading.Lock()

    def load_plan(self, model, cutoff: Optional[float], builder: Callable[[Any, Optional[float]], Any]):
        """
        캐시된 계획 반환, 없으면 생성 후 저장

        Args:
            model: LevyModel (frozen pydantic 모델)
            cutoff: 점프 cutoff (None 이면 모델 기본값)
            builder: (model, cutoff) -> IncrementPlan

        Returns:
            IncrementPlan
        """
        # 캐시 키 생성
        cache_key = (model.model_dump_json(), None if cutoff is None else float(cutoff))

        with self.plan_lock:
            if cache_key in self.plan_cache:
                logger.debug("Using cached increment plan: %s cutoff=%s", model.kind.value, cutoff)
                return self.plan_cache[cache_key]

            logger.info("Building increment plan: %s cutoff=%s", model.kind.value, cutoff)
            plan = builder(model, cutoff)
            self.plan_cache[cache_key] = plan
            return plan

    def clear_cache(self) -> None:
        """계획 캐시 정리"""
        with self.plan_lock:
            self.plan_cache.clear()
            logger.debug("Increment plan cache cleared")

    def get_cached_plans(self) -> List[Tuple[str, Optional[float]]]:
        """캐시된 계획 키 목록 반환"""
        with self.plan_lock:
            return list(self.plan_cache.keys())


# 글로벌 계획 캐시 인스턴스
_global_cache = IncrementPlanCache()


def get_plan_cache() -> IncrementPlanCache:
    """글로벌 계획 캐시 반환"""
    return _global_cache


def preload_plans(models: Iterable, builder: Callable, cutoff: Optional[float] = None) -> None:
    """실험 시작 전에 계획을 미리 생성"""
    for model in models:
        if model.is_samplable:
            _global_cache.load_plan(model, cutoff, builder)
