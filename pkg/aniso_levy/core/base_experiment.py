#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
base_experiment.py

공통 실험 베이스 클래스 - 재현 가능한 배치 분할, 워커 풀, 산출물 저장
"""

import concurrent.futures
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from ..numerics.sampling import RngStream, batch_stream
from .errors import InputError
from .utils import ensure_directory

logger = logging.getLogger(__name__)

DEFAULT_BATCH_SIZE = 2048


@dataclass(frozen=True)
class BatchSummary:
    """배치 요약 (count, Σx, Σx²) - 결합 연산은 교환/결합 법칙을 만족한다"""

    count: int
    total: np.ndarray
    total_sq: np.ndarray

    @classmethod
    def empty(cls, width: int) -> "BatchSummary":
        return cls(0, np.zeros(width), np.zeros(width))

    @classmethod
    def of(cls, values: np.ndarray) -> "BatchSummary":
        values = np.asarray(values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        return cls(values.shape[0], values.sum(axis=0), (values ** 2).sum(axis=0))

    def merge(self, other: "BatchSummary") -> "BatchSummary":
        return BatchSummary(self.count + other.count, self.total + other.total, self.total_sq + other.total_sq)

    @property
    def mean(self) -> np.ndarray:
        if self.count == 0:
            raise InputError("empty summary has no mean")
        return self.total / self.count

    @property
    def stderr(self) -> np.ndarray:
        """정규 근사 표준오차 √(s²/n)"""
        if self.count < 2:
            return np.full_like(self.total, math.nan)
        mean = self.mean
        var = np.clip((self.total_sq - self.count * mean ** 2) / (self.count - 1), 0.0, None)
        return np.sqrt(var / self.count)


class BaseExperiment:
    """공통 실험 베이스 클래스"""

    experiment_id = "experiment"

    def __init__(self, seed: int = 0, workers: int = 4, output_dir: Optional[str] = None,
                 plot: bool = False, batch_size: int = DEFAULT_BATCH_SIZE):
        """
        실험 초기화

        Args:
            seed: 루트 시드
            workers: 배치 워커 수 (결과에 영향 없음)
            output_dir: 산출물 디렉토리 (None 이면 저장하지 않음)
            plot: SVG log-log 그림 저장 여부
            batch_size: 배치당 replica 수
        """
        if seed < 0:
            raise InputError(f"seed must be nonnegative, got {seed}")
        if workers < 1 or batch_size < 1:
            raise InputError("workers and batch_size must be positive")
        self.seed = int(seed)
        self.workers = int(workers)
        self.output_dir = output_dir
        self.plot = plot
        self.batch_size = int(batch_size)

        logger.info("%s initialized (seed=%d, workers=%d, batch_size=%d)",
                    type(self).__name__, self.seed, self.workers, self.batch_size)

    # --- 배치 실행 ---

    def run_batches(self, fn: Callable[[int, RngStream], np.ndarray], n_replicas: int,
                    grid_index: int = 0) -> np.ndarray:
        """
        replica 를 고정 크기 배치로 나눠 워커 풀에서 실행

        Args:
            fn: (배치 크기, RngStream) -> (배치 크기, ...) 배열
            n_replicas: 전체 replica 수
            grid_index: 그리드 점 번호 (스트림 id 상위 비트)

        Returns:
            배치 순서대로 이어붙인 결과
        """
        if n_replicas < 1:
            raise InputError(f"n_replicas must be positive, got {n_replicas}")
        n_batches = int(math.ceil(n_replicas / self.batch_size))
        sizes = [min(self.batch_size, n_replicas - b * self.batch_size) for b in range(n_batches)]
        results: List[Optional[np.ndarray]] = [None] * n_batches

        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            future_to_batch = {
                executor.submit(fn, sizes[b], batch_stream(self.seed, grid_index, b)): b
                for b in range(n_batches)
            }
            for future in concurrent.futures.as_completed(future_to_batch):
                b = future_to_batch[future]
                try:
                    results[b] = np.asarray(future.result())
                    logger.debug("✓ grid %d batch %d/%d (%d replicas)", grid_index, b + 1, n_batches, sizes[b])
                except Exception as e:
                    logger.error("✗ grid %d batch %d: %s", grid_index, b, e)
                    raise

        return np.concatenate(results, axis=0)

    def summarize(self, values: np.ndarray) -> BatchSummary:
        """배치 순서대로 요약을 접는다"""
        values = np.asarray(values, dtype=float)
        width = 1 if values.ndim == 1 else values.shape[1]
        summary = BatchSummary.empty(width)
        for start in range(0, values.shape[0], self.batch_size):
            summary = summary.merge(BatchSummary.of(values[start:start + self.batch_size]))
        return summary

    def provenance(self, **extra: Any) -> Dict[str, Any]:
        """재현에 필요한 정보"""
        info = {"experiment": self.experiment_id, "seed": self.seed, "batch_size": self.batch_size}
        info.update(extra)
        return info

    # --- 산출물 ---

    def write_outputs(self, report) -> List[str]:
        """<id>.csv, <id>.json (plot 이면 <id>.svg) 저장"""
        if self.output_dir is None:
            return []
        ensure_directory(self.output_dir)
        paths = report.write_artifacts(self.output_dir, plot=self.plot)
        for path in paths:
            logger.info("wrote %s", path)
        return paths

    def execute(self):
        """run() 후 산출물 저장"""
        report = self.run()
        self.write_outputs(report)
        return report

    def run(self):
        """실험 실행 - 하위 클래스에서 구현"""
        raise NotImplementedError("Subclasses must implement run")
