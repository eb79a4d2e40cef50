#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
블라인드 검증 계산 시뮬레이터 실험 CLI

하위 명령:
1️⃣ bounds        : χ, ε₁, ε₂, ε̃, δ, confidence, p_error 경계 출력
2️⃣ scaling       : N(m) 과 N/(m⁴ ln m) 표 (연속 행 변화 25% 미만 검사)
3️⃣ selftest-run  : 1단계(자가검증 + 원격 준비)만 시드 고정으로 반복
4️⃣ full-run      : 1단계 + 2단계(brickwork 실행, trap 검사) 반복
5️⃣ sweep         : 전략 파라미터 하나를 바꿔 가며 요약 (예: bob.q)

종료 코드:
  0 모든 검사 통과 / 1 경계·기대값 위반 / 2 사용법·설정 오류

사용법:
  python -m jobs.run_experiments bounds --m 16 --epsilon 1e-3 --n-tilde 10000000 --delta-frac 0.25
  python -m jobs.run_experiments scaling --m 8 16 32 64 128
  python -m jobs.run_experiments full-run --config config/honest_full_run.json --trials 100 --out outputs/honest.csv
  python -m jobs.run_experiments sweep --config config/depolarizing_sweep.json --workers 4
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from jobs.experiments import bounds_frame, run_sweep, run_trials, scaling_frame, summarize_trials
from pipeline.config_io import ConfigError, load_session, load_settings, parse_session
from pipeline.report_io import REPORT_FORMATS, write_report
from selftest import SecurityParams
from selftest.bounds import CONFIDENCE_VARIANTS

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

BOUND_FIELDS = ("chi", "eps1", "eps2", "eps_tilde", "delta", "confidence", "p_error_bound")


class UsageError(Exception):
    pass


# =============================================================================
# 인자
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--settings", default="config/settings.yaml", help="기본 설정 YAML")
    common.add_argument("--seed", type=int, help="난수 시드 (세션 설정 값을 덮어씀)")
    common.add_argument("--trials", type=int, help="시행 횟수 (세션 설정 값을 덮어씀)")
    common.add_argument("--out", help="리포트 출력 경로")
    common.add_argument("--format", choices=REPORT_FORMATS, default="csv", help="리포트 형식")
    common.add_argument("--workers", type=int, help="시행 병렬 스레드 수")
    common.add_argument("--verbose", action="store_true", help="상세 로그")

    parser = argparse.ArgumentParser(description="DI 블라인드 검증 계산 시뮬레이터 실험")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="해석적 경계 출력")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--n-tilde", type=int, required=True)
    p.add_argument("--delta-frac", type=float, required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--p", type=float, default=0.9, help="목표 신뢰도 (SecurityParams 검증용)")
    p.add_argument("--variant", choices=CONFIDENCE_VARIANTS, default=None)
    p.add_argument("--ideal", action="store_true", help="χ = 0 경로")

    p = sub.add_parser("scaling", parents=[common], help="자원 스케일링 표")
    p.add_argument("--m", type=int, nargs="+", required=True)

    for name, text in (("selftest-run", "1단계만 실행"), ("full-run", "1·2단계 실행"), ("sweep", "파라미터 sweep")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--config", help="세션 설정 JSON (schema 1)")
    return parser


def _setup_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _print_frame_bullets(row: dict, keys) -> None:
    for k in keys:
        print(f" - {k}: {row[k]}")


def _output_path(args, settings: dict) -> Path:
    if args.out:
        return Path(args.out)
    return Path(settings["output_dir"]) / f"{args.command}.{args.format}"


def _load_session(args, settings: dict):
    if args.config:
        session = load_session(args.config, settings)
    else:
        if args.seed is None:
            raise UsageError("--config 가 없으면 --seed 가 필요합니다")
        session = parse_session({"schema": 1, "seed": args.seed}, settings)
    return session.with_overrides(seed=args.seed, trials=args.trials)


# =============================================================================
# 명령
# =============================================================================

def cmd_bounds(args, settings: dict) -> int:
    variant = args.variant or settings["confidence_variant"]
    params = SecurityParams(
        p=args.p, epsilon=args.epsilon, delta_frac=args.delta_frac, c=args.c, m=args.m, n_tilde=args.n_tilde,
    )
    df = bounds_frame(params, variant, args.ideal)
    row = df.iloc[0].to_dict()
    print(f"📊 경계 (m={params.m}, ε={params.epsilon}, ñ={params.n_tilde}, Δ={params.delta_frac}, c={params.c})")
    _print_frame_bullets(row, BOUND_FIELDS)
    if args.out:
        write_report(df, args.out, args.format)
        print(f"✅ 저장: {args.out}")
    if not row["finite_ok"]:
        print("❌ 유한하지 않거나 1 을 넘는 경계값")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_scaling(args, settings: dict) -> int:
    resource = settings["resource"]
    df = scaling_frame(args.m, resource["target_confidence"], 1.0, resource["eps0"])
    print("📊 자원 스케일링 N(m) / (m⁴ ln m)")
    for row in df.to_dict(orient="records"):
        print(f" - m={row['m']}: N={row['N']}, ratio={row['ratio']:.6g}, 직전 행 대비={row['change_vs_prev_ratio']:.3%}")
    if args.out:
        write_report(df, args.out, args.format)
        print(f"✅ 저장: {args.out}")
    if not df["within_band_of_prev"].all():
        print("❌ 연속 행 사이 비율 변화가 25% 이상입니다")
        return EXIT_VIOLATION
    return EXIT_OK


def _report_summary(summary: dict) -> None:
    _print_frame_bullets(summary, ("trials", "accept_rate", "abort_rate", "reject_rate"))
    if summary["mode"] == "full":
        _print_frame_bullets(summary, ("detection_rate", "accepted_incorrect_rate", "p_error_bound"))


def cmd_run(args, settings: dict, mode: str) -> int:
    session = _load_session(args, settings)
    workers = args.workers or settings["workers"]
    print(f"▶️ {args.command}: seed={session.seed}, trials={session.trials}, workers={workers}")
    df = run_trials(session, mode, workers)
    summary = summarize_trials(df, session, mode)
    print("📊 결과 요약")
    _report_summary(summary)

    out = _output_path(args, settings)
    write_report(df, out, args.format)
    print(f"✅ 저장: {out}")

    ok = summary["expect_ok"] and summary["bound_ok"]
    if not summary["expect_ok"]:
        print(f"❌ 기대 결과({session.expect})와 다른 시행이 있습니다")
    if not summary["bound_ok"]:
        print("❌ 오답 수락률이 p_error 경계를 넘었습니다")
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_sweep(args, settings: dict) -> int:
    session = _load_session(args, settings)
    if session.sweep is None:
        raise UsageError("sweep 명령에는 sweep 블록이 있는 --config 가 필요합니다")
    workers = args.workers or settings["workers"]
    sweep = session.sweep
    print(f"▶️ sweep {sweep.target} ∈ {list(sweep.values)} ({sweep.mode}, trials={session.trials})")
    summary, _, monotone = run_sweep(session, workers)
    for row in summary.to_dict(orient="records"):
        print(f"📊 {sweep.target}={row['value']}")
        _report_summary(row)

    out = _output_path(args, settings)
    write_report(summary, out, args.format)
    print(f"✅ 저장: {out}")

    ok = bool(summary["expect_ok"].all() and summary["bound_ok"].all() and monotone)
    if not monotone:
        print(f"❌ {sweep.monotone} 가 단조 증가하지 않습니다 (3σ)")
    if not summary["expect_ok"].all():
        print(f"❌ 기대 결과({session.expect})와 다른 시행이 있습니다")
    return EXIT_OK if ok else EXIT_VIOLATION


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    _setup_logging(args.verbose)

    try:
        settings = load_settings(args.settings)
        if args.command == "bounds":
            return cmd_bounds(args, settings)
        if args.command == "scaling":
            return cmd_scaling(args, settings)
        if args.command == "selftest-run":
            return cmd_run(args, settings, "selftest")
        if args.command == "full-run":
            return cmd_run(args, settings, "full")
        return cmd_sweep(args, settings)
    except (UsageError, ConfigError, ValueError) as e:
        print(f"❌ {e}")
        parser.print_usage()
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
