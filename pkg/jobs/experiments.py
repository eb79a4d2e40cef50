# -*- coding: utf-8 -*-

"""
시드 고정 실험 실행기

주요 기능:
1️⃣ run_trial: 시행 하나 (selftest: 1단계만, full: 1단계 + 2단계)
2️⃣ run_trials: 스레드 풀로 시행을 나눠 돌리고 trial 순서로 정렬
3️⃣ summarize_trials: 수락/중단/거절 비율, 검출률, 오답 수락률, p_error 경계, 기대값 검사
4️⃣ run_sweep: 전략 파라미터 하나를 바꿔 가며 요약 행을 모음 (+ 단조성 검사)
5️⃣ bounds_frame / scaling_frame: 해석적 경계와 자원 스케일링 표
"""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import pandas as pd

from mbqc import (
    BrickworkPattern,
    PatternError,
    Transcript,
    build_brickwork,
    build_pattern,
    choose_single_trap,
    choose_tape,
    computation_angles,
    is_correct_output,
    p_error_bound,
)
from pipeline.config_io import SessionConfig
from pipeline.report_io import to_frame
from pipeline.seeds import TrialStreams
from protocol import default_vertex_roles, make_strategy, run_phase_one, run_phase_two, vertex_roles
from selftest import SecurityParams, Side, bound_report, resource_estimate, scaling_ratio

logger = logging.getLogger(__name__)

TRIAL_COLUMNS = [
    "trial", "seed", "mode", "alice_device", "bob",
    "phase_one", "reason", "rounds", "max_deviation",
    "phase_two", "outputs", "correct", "outcome", "digest",
]
SUMMARY_COLUMNS = [
    "value", "mode", "seed", "trials",
    "accept_rate", "abort_rate", "reject_rate", "detection_rate", "accepted_incorrect_rate",
    "confidence", "eps_tilde", "p_error_bound", "expect", "expect_ok", "bound_ok",
]
BOUND_COLUMNS = ["m", "p", "epsilon", "n_tilde", "delta_frac", "c", "variant", "ideal",
                 "chi", "eps1", "eps2", "eps_tilde", "delta", "confidence", "p_error_bound", "finite_ok"]
SCALING_COLUMNS = ["m", "epsilon", "n_tilde", "N", "ratio", "change_vs_prev_ratio", "within_band_of_prev"]

SCALING_BAND = 0.25  # 직전 행 ratio 대비 상대 변화 상한


# =============================================================================
# 패턴 / 파라미터
# =============================================================================

def build_session_pattern(session: SessionConfig, rng) -> BrickworkPattern:
    """Alice 가 자기 난수로 tape, θ, r, d (그리고 random 계산의 φ) 를 고름"""
    cfg = session.pattern
    graph = build_brickwork(cfg.rows, cfg.cols)
    if cfg.trap_scheme == "single":
        tape = choose_single_trap(graph, rng)
    else:
        tape = choose_tape(graph, cfg.delta_frac, rng)
    if cfg.phi is not None:
        vertices = graph.vertices()
        if len(cfg.phi) != len(vertices):
            raise PatternError(f"phi 길이 {len(cfg.phi)} ≠ 꼭짓점 수 {len(vertices)}")
        phi = dict(zip(vertices, cfg.phi))
    else:
        phi = computation_angles(graph, cfg.computation, rng)
    return build_pattern(graph, tape, rng, phi)


def session_params(session: SessionConfig, mode: str) -> SecurityParams:
    """full 모드는 m = 패턴 꼭짓점 수, selftest 모드는 명시한 m (없으면 같은 값)"""
    vertices = session.pattern.rows * session.pattern.cols
    if mode == "full" or session.m is None:
        return session.params(vertices)
    return session.params(session.m)


def _strategy_label(spec) -> str:
    return json.dumps(dict(spec), sort_keys=True, ensure_ascii=False)


# =============================================================================
# 시행
# =============================================================================

def run_trial(session: SessionConfig, trial: int, mode: str = "full") -> dict:
    streams = TrialStreams(session.seed, trial)
    params = session_params(session, mode)
    alice_device = make_strategy(session.strategies["alice_device"], Side.ALICE).bind(streams.alice_device)
    bob = make_strategy(session.strategies["bob"], Side.BOB).bind(streams.bob)
    transcript = Transcript()

    row = {
        "trial": trial,
        "seed": session.seed,
        "mode": mode,
        "alice_device": _strategy_label(session.strategies["alice_device"]),
        "bob": _strategy_label(session.strategies["bob"]),
        "phase_two": "",
        "outputs": "",
        "correct": pd.NA,
    }

    if mode == "full":
        pattern = build_session_pattern(session, streams.alice)
        roles = vertex_roles(pattern)
    else:
        pattern = None
        roles = default_vertex_roles(params.m)

    one = run_phase_one(
        params, alice_device, bob, streams.alice,
        vertex_roles=roles, variant=session.variant, setting_draw=session.setting_draw, transcript=transcript,
    )
    row.update({
        "phase_one": "accept" if one.accepted else "abort",
        "reason": one.verdict.reason,
        "rounds": one.rounds,
        "max_deviation": one.ledger.max_deviation(),
    })

    if mode == "full" and one.accepted:
        two = run_phase_two(one.inputs, pattern, bob, streams.alice, transcript)
        row["phase_two"] = "accept" if two.accepted else "reject"
        if two.accepted:
            row["outputs"] = "".join(str(b) for b in two.outputs)
            row["correct"] = is_correct_output(two.pattern, two.outputs)
        else:
            row["reason"] = two.verdict.reason

    if not one.accepted:
        row["outcome"] = "abort"
    elif mode == "full":
        row["outcome"] = row["phase_two"]
    else:
        row["outcome"] = "accept"
    row["digest"] = transcript.digest()
    logger.debug("trial %d: %s (%s)", trial, row["outcome"], row["reason"])
    return row


def run_trials(session: SessionConfig, mode: str = "full", workers: int = 1) -> pd.DataFrame:
    """시행 결과 DataFrame (trial 오름차순, 스레드 수와 무관하게 같은 내용)"""
    trials = range(session.trials)
    if workers <= 1:
        rows = [run_trial(session, t, mode) for t in trials]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda t: run_trial(session, t, mode), trials))
    return to_frame(rows, TRIAL_COLUMNS)


# =============================================================================
# 요약
# =============================================================================

def _sigma(p: float, n: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / n) if n else 0.0


def expectation_met(outcomes: pd.Series, expect: str) -> bool:
    if expect == "any":
        return True
    return bool((outcomes == expect).all())


def summarize_trials(df: pd.DataFrame, session: SessionConfig, mode: str, value=None) -> dict:
    n = len(df)
    accepted = int((df["outcome"] == "accept").sum())
    aborted = int((df["outcome"] == "abort").sum())
    rejected = int((df["outcome"] == "reject").sum())
    reached = accepted + rejected
    incorrect = sum(
        1 for outcome, correct in zip(df["outcome"], df["correct"])
        if outcome == "accept" and correct is not pd.NA and not bool(correct)
    )

    params = session_params(session, mode)
    report = bound_report(params, session.variant)
    bound = p_error_bound(params, report)
    incorrect_rate = incorrect / n
    bound_ok = mode != "full" or incorrect_rate <= bound + 3.0 * _sigma(bound, n)

    return {
        "value": value,
        "mode": mode,
        "seed": session.seed,
        "trials": n,
        "accept_rate": accepted / n,
        "abort_rate": aborted / n,
        "reject_rate": rejected / n,
        "detection_rate": rejected / reached if (mode == "full" and reached) else float("nan"),
        "accepted_incorrect_rate": incorrect_rate,
        "confidence": report.confidence,
        "eps_tilde": report.eps_tilde,
        "p_error_bound": bound,
        "expect": session.expect,
        "expect_ok": expectation_met(df["outcome"], session.expect),
        "bound_ok": bool(bound_ok),
    }


def monotone_ok(summary: pd.DataFrame, column: str, tolerance_sigmas: float = 3.0) -> bool:
    """행 순서대로 column 값이 (3σ 허용 안에서) 줄지 않는지"""
    values = summary[column].tolist()
    counts = summary["trials"].tolist()
    for (a, na), (b, nb) in zip(zip(values, counts), zip(values[1:], counts[1:])):
        slack = tolerance_sigmas * math.hypot(_sigma(a, na), _sigma(b, nb))
        if b < a - slack:
            return False
    return True


def run_sweep(session: SessionConfig, workers: int = 1) -> tuple[pd.DataFrame, pd.DataFrame, bool]:
    """
    Returns:
        (요약 DataFrame, 전체 시행 DataFrame, 단조성 검사 결과)
    """
    if session.sweep is None:
        raise ValueError("sweep 블록이 없는 설정입니다")
    sweep = session.sweep
    summaries, frames = [], []
    for value in sweep.values:
        point = session.with_strategy_value(sweep.target, value)
        df = run_trials(point, sweep.mode, workers)
        df.insert(0, "value", value)
        frames.append(df)
        summaries.append(summarize_trials(df, point, sweep.mode, value))
        logger.info("sweep %s=%s: %s", sweep.target, value, summaries[-1]["accept_rate"])
    summary = to_frame(summaries, SUMMARY_COLUMNS)
    monotone = monotone_ok(summary, sweep.monotone) if sweep.monotone else True
    return summary, pd.concat(frames, ignore_index=True), monotone


# =============================================================================
# 해석적 표
# =============================================================================

def bounds_frame(params: SecurityParams, variant: str = "per_session", ideal: bool = False) -> pd.DataFrame:
    report = bound_report(params, variant, ideal)
    values = report.to_dict()
    finite = all(math.isfinite(v) for v in values.values()) and report.p_error_bound <= 1.0
    row = {**params.to_dict(), "variant": variant, "ideal": ideal, **values, "finite_ok": finite}
    return to_frame([row], BOUND_COLUMNS)


def scaling_frame(
    m_list: Sequence[int],
    target_confidence: float = 0.9,
    c: float = 1.0,
    eps0: float = 1.0,
) -> pd.DataFrame:
    """
    N(m) 과 ratio = N/(m⁴ ln max(m,2))

    change_vs_prev_ratio = |ratio − 직전 행 ratio| / 직전 행 ratio (첫 행은 0),
    25% 미만이면 within_band_of_prev

    Raises:
        ValueError: 빈 목록 또는 오름차순이 아님
    """
    m_list = [int(m) for m in m_list]
    if not m_list:
        raise ValueError("m 목록이 비어 있습니다")
    if any(b <= a for a, b in zip(m_list, m_list[1:])):
        raise ValueError(f"m 목록은 오름차순이어야 합니다: {m_list}")
    rows, previous = [], None
    for m in m_list:
        est = resource_estimate(m, target_confidence, c, eps0)
        ratio = scaling_ratio(m, est.N)
        change = abs(ratio - previous) / previous if previous else 0.0
        rows.append({
            "m": m,
            "epsilon": est.epsilon,
            "n_tilde": est.n_tilde,
            "N": est.N,
            "ratio": ratio,
            "change_vs_prev_ratio": change,
            "within_band_of_prev": change < SCALING_BAND,
        })
        previous = ratio
    return to_frame(rows, SCALING_COLUMNS)
