#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
simulation.py

끝점/경로 시뮬레이션 - 샘플 바이너리 파일과 요약 JSON 저장
"""

import logging
import os
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel

from ..core.base_experiment import BaseExperiment
from ..core.errors import InputError
from ..core.utils import ensure_directory, save_json_result, write_samples
from ..numerics.levy_models import LevyModel
from ..numerics.sampling import RngStream, batch_stream, sample_increments, sample_path_increments
from ..numerics.sde import SdeProblem, simulate_endpoint, simulate_path

logger = logging.getLogger(__name__)


class SimulationRun(BaseExperiment):
    """SDE 끝점 X(t) (문제가 없으면 Z(t)) 또는 단일 경로 생성"""

    experiment_id = "simulate"

    def __init__(self, model: Optional[LevyModel] = None, problem: Optional[SdeProblem] = None,
                 t: float = 1.0, steps: int = 256, replicas: int = 10_000, path: bool = False,
                 output_name: str = "samples.bin", **kwargs):
        super().__init__(**kwargs)
        if model is None and problem is None:
            raise InputError("simulation needs a model or a problem")
        if not t > 0 or steps < 1 or replicas < 1:
            raise InputError("need t > 0, steps >= 1 and replicas >= 1")
        self.model = model if model is not None else problem.model
        self.problem = problem
        self.t = float(t)
        self.steps = int(steps)
        self.replicas = int(replicas)
        self.path = path
        self.output_name = output_name
        self.samples: Optional[np.ndarray] = None

    def run(self) -> np.ndarray:
        if self.path:
            stream = batch_stream(self.seed, 0, 0)
            if self.problem is not None:
                self.samples = simulate_path(self.problem, self.t, self.steps, stream)
            else:
                grid = np.linspace(0.0, self.t, self.steps + 1)
                increments = sample_path_increments(self.model, grid, stream)
                self.samples = np.vstack([np.zeros((1, self.model.dimension)), np.cumsum(increments, axis=0)])
        elif self.problem is not None:
            problem, t, steps = self.problem, self.t, self.steps

            def batch(count: int, stream: RngStream) -> np.ndarray:
                return simulate_endpoint(problem, t, steps, stream, replicas=count)

            self.samples = self.run_batches(batch, self.replicas)
        else:
            model, t = self.model, self.t

            def batch(count: int, stream: RngStream) -> np.ndarray:
                return sample_increments(model, t, count, stream)

            self.samples = self.run_batches(batch, self.replicas)
        logger.info("simulated %d x %d samples", *self.samples.shape)
        return self.samples

    def summary(self) -> Dict[str, Any]:
        if self.samples is None:
            raise InputError("run() has not been called")
        source: BaseModel = self.problem if self.problem is not None else self.model
        return {
            "experiment": self.experiment_id,
            "kind": "path" if self.path else "endpoints",
            "shape": list(self.samples.shape),
            "median": np.median(self.samples, axis=0).tolist(),
            "provenance": self.provenance(source=source.model_dump(mode="json"), t=self.t, steps=self.steps,
                                          replicas=1 if self.path else self.replicas),
        }

    def write_outputs(self, report=None) -> List[str]:
        if self.output_dir is None or self.samples is None:
            return []
        ensure_directory(self.output_dir)
        samples_path = os.path.join(self.output_dir, self.output_name)
        summary_path = os.path.join(self.output_dir, self.experiment_id + ".json")
        write_samples(self.samples, samples_path)
        save_json_result(self.summary(), summary_path)
        return [samples_path, summary_path]
