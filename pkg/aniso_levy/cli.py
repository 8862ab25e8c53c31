#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
cli.py

aniso-levy CLI 인터페이스
"""

import argparse
import copy
import logging
import sys
from typing import Any, Dict, List, Mapping, Optional

from pydantic import ValidationError

from .api import EXIT_ERROR, AnisoLevy
from .core.config import CHECK_PRESETS, merge_overrides, validate_run_config
from .core.errors import AnisoLevyError
from .core.utils import list_artifacts, load_json_config, validate_file_exists

# 플래그 이름 -> 실험 파라미터 이름
PARAM_FLAGS = {
    "check": ["preset", "alphas", "gamma", "delta", "gammas", "deltas", "beta", "chi", "betas", "chis",
              "zero_drift"],
    "simulate": ["t", "steps", "replicas", "path", "output_name"],
    "a1-scan": ["axis", "h_grid", "t_grid", "half_width", "expected_constant", "tolerance"],
    "rate": ["t", "eta", "eps_grid", "replicas", "steps_per_unit", "min_window_steps", "tolerance", "batch_size"],
    "besov": ["lam", "t_grid", "replicas", "radius_factor", "steps_per_unit", "max_nodes_per_axis", "tolerance",
              "oracle_tolerance", "jackknife_groups", "batch_size"],
    "moments": ["eta", "gamma", "delta", "window_grid", "replicas", "substeps", "tolerance",
                "closed_form_tolerance", "batch_size"],
    "density": ["alpha", "t", "half_width", "count", "output_name"],
}

# --alphas 로 ComponentStable 모델을 만들 수 있는 명령
MODEL_SHORTCUT = ("simulate", "a1-scan", "besov", "moments")


def float_list(text: str) -> List[float]:
    """'1.2,1.5' -> [1.2, 1.5]"""
    items = [item.strip() for item in text.split(",") if item.strip()]
    if not items:
        raise ValueError("empty list")
    return [float(item) for item in items]


def _global_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, help="RunConfig JSON 파일 경로")
    common.add_argument("--seed", type=int, default=None, help="루트 시드 (기본값: 0)")
    common.add_argument("--out", type=str, default=None, help="출력 디렉토리 (기본값: ./output)")
    common.add_argument("--workers", type=int, default=None,
                        help="배치 워커 수 (기본값: ANISO_LEVY_WORKERS 또는 4)")
    common.add_argument("--plot", action="store_true", default=None, help="SVG log-log 그림 저장")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="DEBUG 로그 출력")
    verbosity.add_argument("--quiet", action="store_true", help="경고 이상만 출력")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aniso-levy",
        description="aniso-levy - 비등방 Lévy 구동 SDE 밀도 정칙성 실험 도구",
        epilog="Example: aniso-levy check --preset z2 --alphas 1.2,1.5 --beta 1 --chi 0.8"
    )
    common = _global_flags()
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[common], help="정리 가정 검사")
    check.add_argument("--preset", choices=CHECK_PRESETS, default=None, help="조건 프리셋 (기본값: general)")
    check.add_argument("--alphas", type=float_list, default=None, help="성분 안정 지수 (쉼표 구분)")
    check.add_argument("--gamma", type=float, default=None)
    check.add_argument("--delta", type=float, default=None)
    check.add_argument("--gammas", type=float_list, default=None)
    check.add_argument("--deltas", type=float_list, default=None)
    check.add_argument("--beta", type=float, default=None, help="drift Hölder 지수")
    check.add_argument("--chi", type=float, default=None, help="diffusion Hölder 지수")
    check.add_argument("--betas", type=float_list, default=None)
    check.add_argument("--chis", type=float_list, default=None)
    check.add_argument("--zero-drift", dest="zero_drift", action="store_true", default=None,
                       help="b ≡ 0 완화 조건 사용")

    simulate = sub.add_parser("simulate", parents=[common], help="끝점/경로 샘플을 바이너리 파일로 저장")
    simulate.add_argument("--alphas", type=float_list, default=None, help="ComponentStable 모델 지수")
    simulate.add_argument("--t", type=float, default=None)
    simulate.add_argument("--steps", type=int, default=None)
    simulate.add_argument("--replicas", type=int, default=None)
    simulate.add_argument("--path", action="store_true", default=None, help="단일 경로 저장")
    simulate.add_argument("--output-name", dest="output_name", type=str, default=None)

    a1 = sub.add_parser("a1-scan", parents=[common], help="(A1) 스케일링 측정")
    a1.add_argument("--alphas", type=float_list, default=None, help="ComponentStable 모델 지수")
    a1.add_argument("--axis", type=int, default=None)
    a1.add_argument("--h-grid", dest="h_grid", type=float_list, default=None)
    a1.add_argument("--t-grid", dest="t_grid", type=float_list, default=None)
    a1.add_argument("--half-width", dest="half_width", type=float, default=None)
    a1.add_argument("--expected-constant", dest="expected_constant", type=float, default=None)
    a1.add_argument("--tolerance", type=float, default=None)

    rate = sub.add_parser("rate", parents=[common], help="한 단계 근사 수렴률 측정 (설정의 problem 필요)")
    rate.add_argument("--t", type=float, default=None)
    rate.add_argument("--eta", type=float, default=None)
    rate.add_argument("--eps-grid", dest="eps_grid", type=float_list, default=None)
    rate.add_argument("--replicas", type=int, default=None)
    rate.add_argument("--steps-per-unit", dest="steps_per_unit", type=int, default=None)
    rate.add_argument("--min-window-steps", dest="min_window_steps", type=int, default=None)
    rate.add_argument("--tolerance", type=float, default=None)
    rate.add_argument("--batch-size", dest="batch_size", type=int, default=None)

    besov = sub.add_parser("besov", parents=[common], help="Besov 노름 성장 측정")
    besov.add_argument("--alphas", type=float_list, default=None,
                       help="σ ≡ I, b ≡ 0 인 ComponentStable 문제 지수")
    besov.add_argument("--lam", type=float, default=None)
    besov.add_argument("--t-grid", dest="t_grid", type=float_list, default=None)
    besov.add_argument("--replicas", type=int, default=None)
    besov.add_argument("--radius-factor", dest="radius_factor", type=float, default=None)
    besov.add_argument("--steps-per-unit", dest="steps_per_unit", type=int, default=None)
    besov.add_argument("--max-nodes-per-axis", dest="max_nodes_per_axis", type=int, default=None)
    besov.add_argument("--tolerance", type=float, default=None)
    besov.add_argument("--oracle-tolerance", dest="oracle_tolerance", type=float, default=None)
    besov.add_argument("--jackknife-groups", dest="jackknife_groups", type=int, default=None,
                       help="stderr 용 jackknife 그룹 수 (기본값: 8)")
    besov.add_argument("--batch-size", dest="batch_size", type=int, default=None)

    moments = sub.add_parser("moments", parents=[common], help="확률적분 모멘트 경계 측정")
    moments.add_argument("--alphas", type=float_list, default=None, help="ComponentStable 모델 지수")
    moments.add_argument("--eta", type=float, default=None)
    moments.add_argument("--gamma", type=float, default=None)
    moments.add_argument("--delta", type=float, default=None)
    moments.add_argument("--window-grid", dest="window_grid", type=float_list, default=None)
    moments.add_argument("--replicas", type=int, default=None)
    moments.add_argument("--substeps", type=int, default=None)
    moments.add_argument("--tolerance", type=float, default=None)
    moments.add_argument("--closed-form-tolerance", dest="closed_form_tolerance", type=float, default=None)
    moments.add_argument("--batch-size", dest="batch_size", type=int, default=None)

    density = sub.add_parser("density", parents=[common], help="FFT 역변환 안정 밀도를 CSV 로 저장")
    density.add_argument("--alpha", type=float, default=None)
    density.add_argument("--t", type=float, default=None)
    density.add_argument("--half-width", dest="half_width", type=float, default=None)
    density.add_argument("--count", type=int, default=None)
    density.add_argument("--output-name", dest="output_name", type=str, default=None)
    return parser


def _shortcut_model(alphas: List[float]) -> Dict[str, Any]:
    return {"kind": "component_stable", "dimension": len(alphas), "alphas": list(alphas)}


def _shortcut_problem(alphas: List[float]) -> Dict[str, Any]:
    d = len(alphas)
    zero = {"family": "constant", "value": 0.0, "declared_exponent": 1.0}
    one = {"family": "constant", "value": 1.0, "declared_exponent": 0.9}
    off = {"family": "constant", "value": 0.0, "declared_exponent": 0.9}
    return {
        "dimension": d,
        "model": _shortcut_model(alphas),
        "x0": [0.0] * d,
        "drift": [zero] * d,
        "diffusion_matrix": [[one if i == j else off for j in range(d)] for i in range(d)],
    }


def build_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """플래그를 RunConfig 부분 문서로 변환 (모델 단축 플래그 제외)"""
    command = args.command
    params = {name: getattr(args, name) for name in PARAM_FLAGS[command]}
    return {
        "seed": args.seed,
        "output_dir": args.out,
        "workers": args.workers,
        "plot": args.plot,
        "experiment": {"id": command, "params": params},
    }


def _apply_model_shortcut(document: Dict[str, Any], command: str, alphas: List[float]) -> None:
    # --alphas 는 설정의 Lévy 모델을 통째로 교체한다
    if isinstance(document.get("problem"), dict):
        document["problem"]["model"] = _shortcut_model(alphas)
        document.pop("model", None)
    elif command == "besov":
        document["problem"] = _shortcut_problem(alphas)
        document.pop("model", None)
    else:
        document["model"] = _shortcut_model(alphas)


def build_run_document(args: argparse.Namespace, base: Mapping[str, Any]) -> Dict[str, Any]:
    """
    설정 문서와 플래그를 합친 RunConfig 문서

    base 는 변경하지 않는다. 플래그가 설정보다 우선한다.
    """
    command = args.command
    document = copy.deepcopy(dict(base))
    if document.get("experiment", {}).get("id") not in (None, command):
        # 다른 실험의 파라미터 블록은 가져오지 않는다
        document["experiment"] = {"id": command, "params": {}}
    alphas = getattr(args, "alphas", None)
    if command in MODEL_SHORTCUT and alphas is not None:
        _apply_model_shortcut(document, command, alphas)
    return merge_overrides(document, build_overrides(args))


def configure_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[List[str]] = None) -> int:
    """CLI 메인 함수"""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose, args.quiet)

    try:
        base: Dict[str, Any] = {}
        if args.config:
            validate_file_exists(args.config, "Config file")
            base = load_json_config(args.config)
        config = validate_run_config(build_run_document(args, base))

        print(f"=== aniso-levy: {args.command.upper()} ===")
        print(f"출력 디렉토리: {config.output_dir}")
        print(f"seed: {config.seed}, workers: {config.workers}")
        for name, value in config.params.model_dump().items():
            print(f"  - {name}: {value}")

        outcome = AnisoLevy.from_config(config).run(config)

        verdict = outcome.summary.get("verdict")
        if verdict is None and "overall" in outcome.summary:
            verdict = "pass" if outcome.summary["overall"] else "fail"
        print(f"\n=== aniso-levy {args.command.upper()} 완료 ===")
        if verdict is not None:
            print(f"판정: {verdict}")
        for flag in outcome.summary.get("flags", []):
            print(f"플래그: {flag}")
        for note in outcome.summary.get("notes", []):
            print(f"참고: {note}")
        for artifact in list_artifacts(outcome.artifacts):
            print(f"결과 파일: {artifact['path']} ({artifact['size_formatted']})")
        return outcome.exit_code

    except (AnisoLevyError, ValidationError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as e:
        print(f"Error: 파일 처리 실패: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
