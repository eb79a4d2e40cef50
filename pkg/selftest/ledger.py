# -*- coding: utf-8 -*-

"""
상관 추정 장부(CorrelationLedger)와 3단계 수락 검사

장부는 설정별로 k^{αβ}(라운드 수)와 a·b 곱의 정수 합만 저장하고,
추정치 Ĉ^{αβ} 는 읽을 때 합/개수로 계산합니다.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import pandas as pd

from selftest.bounds import SecurityParams, azuma_delta, confidence
from selftest.settings import SETTINGS, MeasurementSetting, ideal_correlation

logger = logging.getLogger(__name__)

# 수락 검사 실패 사유 코드
REASON_CONFIDENCE = "insufficient_confidence"
REASON_STATISTICS = "insufficient_statistics"
REASON_DEVIATION = "correlation_deviation"


@dataclass(frozen=True)
class Verdict:
    """수락(accepted=True) 또는 중단/거절과 그 사유"""
    accepted: bool
    reason: str = ""
    detail: str = ""

    @classmethod
    def accept(cls) -> "Verdict":
        return cls(True)

    @classmethod
    def abort(cls, reason: str, detail: str = "") -> "Verdict":
        return cls(False, reason, detail)

    def __bool__(self) -> bool:
        return self.accepted


@dataclass
class CorrelationLedger:
    """
    설정별 카운터 k^{αβ} 와 누적 곱 합

    라운드 시작 시 begin_round 로 k 를 먼저 올리고(2(b)i),
    두 결과가 도착하면 update_estimator 로 곱을 기록합니다.
    Ĉ 와 통계 검사는 결과가 기록된 라운드(recorded)만 셉니다.
    """
    counts: dict = field(default_factory=lambda: {s: 0 for s in SETTINGS})
    sums: dict = field(default_factory=lambda: {s: 0 for s in SETTINGS})
    recorded: dict = field(default_factory=lambda: {s: 0 for s in SETTINGS})

    def begin_round(self, setting: MeasurementSetting) -> None:
        self.counts[setting] += 1

    def count(self, setting: MeasurementSetting) -> int:
        return self.counts[setting]

    def completed(self, setting: MeasurementSetting) -> int:
        return self.recorded[setting]

    def estimate(self, setting: MeasurementSetting) -> float:
        k = self.recorded[setting]
        return self.sums[setting] / k if k else 0.0

    def deviation(self, setting: MeasurementSetting) -> float:
        return abs(self.estimate(setting) - ideal_correlation(setting))

    def max_deviation(self) -> float:
        return max(self.deviation(s) for s in SETTINGS if self.recorded[s]) if any(self.recorded.values()) else 0.0

    def snapshot(self) -> "CorrelationLedger":
        return CorrelationLedger(dict(self.counts), dict(self.sums), dict(self.recorded))

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for s in SETTINGS:
            rows.append({
                "setting": s.name,
                "count": self.counts[s],
                "product_sum": self.sums[s],
                "estimate": self.estimate(s),
                "ideal": ideal_correlation(s),
                "deviation": self.deviation(s),
            })
        return pd.DataFrame(rows)


def update_estimator(ledger: CorrelationLedger, setting: MeasurementSetting, a: int, b: int) -> CorrelationLedger:
    """
    Ĉ = 1/k[(k−1)Ĉ + a·b] 를 정수 합으로 갱신

    k 는 이번 라운드를 위해 이미 증가해 있어야 합니다.
    """
    if a not in (1, -1) or b not in (1, -1):
        raise ValueError(f"측정 결과는 ±1 이어야 합니다: a={a}, b={b}")
    if ledger.recorded[setting] >= ledger.counts[setting]:
        raise ValueError(f"{setting.name}: k 를 올리지 않은 채 결과를 기록하려 했습니다")
    ledger.sums[setting] += a * b
    ledger.recorded[setting] += 1
    return ledger


def acceptance_check(
    ledger: CorrelationLedger,
    params: SecurityParams,
    variant: str = "per_session",
) -> Verdict:
    """
    3단계 수락 검사 (첫 번째로 실패한 조건을 사유로 돌려줌)

    1) confidence(δ) ≥ p
    2) 모든 설정에서 k^{αβ} ≥ ñ
    3) 모든 설정에서 |Ĉ^{αβ} − μ^{αβ}| ≤ ε
    """
    delta = azuma_delta(params.n_tilde, params.m, params.epsilon)
    conf = confidence(delta, variant, params.m)
    if conf < params.p:
        return Verdict.abort(REASON_CONFIDENCE, f"confidence={conf:.6g} < p={params.p}")

    for s in SETTINGS:
        if ledger.recorded[s] < params.n_tilde:
            return Verdict.abort(REASON_STATISTICS, f"{s.name}: k={ledger.recorded[s]} < ñ={params.n_tilde}")

    for s in SETTINGS:
        dev = ledger.deviation(s)
        if dev > params.epsilon:
            return Verdict.abort(REASON_DEVIATION, f"{s.name}: |Ĉ−μ|={dev:.6g} > ε={params.epsilon}")

    logger.info("자가검증 통과 (confidence=%.6g)", conf)
    return Verdict.accept()


def ledger_from_records(records) -> CorrelationLedger:
    """(setting, a, b) 기록 목록으로 장부 생성"""
    ledger = CorrelationLedger()
    for setting, a, b in records:
        ledger.begin_round(setting)
        update_estimator(ledger, setting, a, b)
    return ledger

