#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
utils.py

공통 유틸리티 함수들 - 설정 로드, 원자적 파일 쓰기, 샘플 바이너리 포맷
"""

import csv
import io
import json
import os
import struct
import tempfile
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np

from .errors import ConfigError, InputError

SAMPLE_MAGIC = b"ALVY"
SAMPLE_HEADER = struct.Struct("<4sIQ")


def validate_file_exists(file_path: str, description: str = "File") -> None:
    """파일 존재 확인"""
    if not os.path.exists(file_path):
        raise FileNotFoundError(f"{description} not found: {file_path}")


def load_json_config(config_path: str) -> Dict[str, Any]:
    """JSON 설정 파일 로드"""
    validate_file_exists(config_path, "Config file")

    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Invalid JSON in config file {config_path}: {e}")

    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    # 최상위 "_comment*" 키는 설명용
    return {key: value for key, value in data.items() if not key.startswith("_comment")}


def ensure_directory(dir_path: str) -> None:
    """디렉토리 생성 (존재하지 않을 경우)"""
    if dir_path:
        os.makedirs(dir_path, exist_ok=True)


def atomic_write_bytes(output_path: str, payload: bytes) -> None:
    """
    임시 파일에 쓴 뒤 rename 으로 교체

    중간에 실패해도 대상 경로에는 이전 파일 또는 완성된 파일만 남는다.
    """
    directory = os.path.dirname(os.path.abspath(output_path))
    ensure_directory(directory)

    fd, tmp_path = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, 'wb') as f:
            f.write(payload)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp_path, output_path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def _to_builtin(value: Any) -> Any:
    # numpy 스칼라/배열을 JSON 직렬화 가능한 형태로
    if isinstance(value, dict):
        return {str(k): _to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_builtin(v) for v in value]
    if isinstance(value, np.ndarray):
        return _to_builtin(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if np.isnan(value) or np.isinf(value):
            return str(value)
        return value
    return value


def save_json_result(result: Dict[str, Any], output_path: str) -> None:
    """JSON 결과 저장 (원자적)"""
    text = json.dumps(_to_builtin(result), ensure_ascii=False, indent=2, sort_keys=True)
    atomic_write_bytes(output_path, (text + "\n").encode('utf-8'))


def format_number(value: Any) -> str:
    """CSV 셀 포맷 - 로케일 무관, float 은 repr 로 정확히"""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if value is None:
        return ""
    return str(value)


def save_csv_table(rows: Iterable[Dict[str, Any]], columns: Sequence[str], output_path: str) -> None:
    """
    CSV 테이블 저장

    Args:
        rows: 열 이름 -> 값 딕셔너리들
        columns: 헤더 순서
        output_path: 출력 경로
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_number(row.get(col)) for col in columns])
    atomic_write_bytes(output_path, buffer.getvalue().encode('utf-8'))


def encode_samples(matrix: np.ndarray) -> bytes:
    """n × d 행렬을 바이너리 포맷으로 인코딩"""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim == 1:
        matrix = matrix[:, None]
    if matrix.ndim != 2:
        raise InputError(f"sample matrix must be 2-d, got shape {matrix.shape}")
    n, d = matrix.shape
    header = SAMPLE_HEADER.pack(SAMPLE_MAGIC, d, n)
    return header + np.ascontiguousarray(matrix, dtype="<f8").tobytes()


def write_samples(matrix: np.ndarray, output_path: str) -> None:
    """샘플 행렬을 바이너리 파일로 저장 (16바이트 헤더 + little-endian float64)"""
    atomic_write_bytes(output_path, encode_samples(matrix))


def read_samples(input_path: str) -> np.ndarray:
    """write_samples 로 저장한 파일 읽기"""
    validate_file_exists(input_path, "Sample file")
    with open(input_path, 'rb') as f:
        payload = f.read()

    if len(payload) < SAMPLE_HEADER.size:
        raise InputError(f"Sample file too short: {input_path}")
    magic, d, n = SAMPLE_HEADER.unpack_from(payload)
    if magic != SAMPLE_MAGIC:
        raise InputError(f"Bad sample file magic in {input_path}: {magic!r}")

    body = payload[SAMPLE_HEADER.size:]
    if len(body) != 8 * n * d:
        raise InputError(f"Sample file {input_path} holds {len(body)} bytes, expected {8 * n * d}")
    return np.frombuffer(body, dtype="<f8").reshape(n, d).astype(float)


def format_file_size(size_bytes: float) -> str:
    """파일 크기를 읽기 쉬운 형태로 포맷"""
    for unit in ['B', 'KB', 'MB', 'GB']:
        if size_bytes < 1024.0:
            return f"{size_bytes:.1f} {unit}"
        size_bytes /= 1024.0
    return f"{size_bytes:.1f} TB"


def list_artifacts(paths: List[str]) -> List[Dict[str, Any]]:
    """생성된 산출물 정보 (CLI 출력용)"""
    artifacts = []
    for path in paths:
        if os.path.exists(path):
            size = os.stat(path).st_size
            artifacts.append({"path": path, "size": size, "size_formatted": format_file_size(size)})
    return artifacts
