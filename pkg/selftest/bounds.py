# -*- coding: utf-8 -*-

"""
1단계(자가검증)의 해석적 경계식 모음

주요 기능:
1️⃣ SecurityParams: p, ε, Δ, c, m, ñ 와 총 라운드 수 N = m + 14cñ
2️⃣ azuma_delta / confidence / chi_bound / epsilon_bounds
3️⃣ worst_case_prep_deviation: 측정하지 않은 쌍의 최악 상관 편차 표
4️⃣ resource_estimate: ε = ε₀·m⁻², ñ+m = ⌈8ε⁻² ln(28m/(1−p))⌉
5️⃣ BoundReport: χ, ε₁, ε₂, ε̃, δ, confidence, p_error_bound 일괄 계산
6️⃣ 마팅게일 보조식: azuma_tail, azuma_epsilon, correlation_interval

O(·) 안의 상수(ε₀, 28)는 구현 상수이며 설정 파일에서 바꿀 수 있습니다.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass
from typing import NamedTuple, Sequence

import numpy as np

from qstate import SQRT_HALF

logger = logging.getLogger(__name__)

NUM_SETTINGS = 14
ONE_SIDED_SETTINGS = 3      # |μ| = 1 : XX, YY, ZZ
TWO_SIDED_SETTINGS = 11     # |μ| ∈ {0, 1/√2}

CONFIDENCE_VARIANTS = ("per_session", "per_qubit")

# 자원 추정 구현 상수
DEFAULT_EPS0 = 1.0
RESOURCE_LOG_FACTOR = 28.0


# =============================================================================
# 파라미터 / 결과 레코드
# =============================================================================

@dataclass(frozen=True)
class SecurityParams:
    """
    보안 파라미터

    Args:
        p: 목표 신뢰도 (0, 1)
        epsilon: 상관 허용오차 ε > 0
        delta_frac: 검증 상수 Δ ∈ (0, ½)
        c: 과표집 상수 c ≥ 1
        m: 계산용 큐비트 수
        n_tilde: 설정당 테스트 수 ñ
    """
    p: float
    epsilon: float
    delta_frac: float
    c: float
    m: int
    n_tilde: int

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p 는 (0,1) 범위여야 합니다: {self.p}")
        if not self.epsilon > 0.0:
            raise ValueError(f"epsilon 은 양수여야 합니다: {self.epsilon}")
        if not 0.0 < self.delta_frac < 0.5:
            raise ValueError(f"delta_frac 는 (0, 1/2) 범위여야 합니다: {self.delta_frac}")
        if self.c < 1.0:
            raise ValueError(f"c 는 1 이상이어야 합니다: {self.c}")
        if int(self.m) != self.m or self.m < 0:
            raise ValueError(f"m 은 0 이상의 정수여야 합니다: {self.m}")
        if int(self.n_tilde) != self.n_tilde or self.n_tilde < 0:
            raise ValueError(f"n_tilde 는 0 이상의 정수여야 합니다: {self.n_tilde}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "n_tilde", int(self.n_tilde))

    @property
    def rounds_per_setting(self) -> int:
        """⌈c·ñ⌉ (정수 c 이면 c·ñ)"""
        return int(math.ceil(self.c * self.n_tilde - 1e-9))

    @property
    def test_rounds(self) -> int:
        return NUM_SETTINGS * self.rounds_per_setting

    @property
    def N(self) -> int:
        return self.m + self.test_rounds

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class BoundReport:
    """필드 이름은 JSON 직렬화의 고정 API 입니다."""
    chi: float
    eps1: float
    eps2: float
    eps_tilde: float
    delta: float
    confidence: float
    p_error_bound: float

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


class EpsilonBounds(NamedTuple):
    eps1: float
    eps2: float
    eps_tilde: float


class ResourceEstimate(NamedTuple):
    epsilon: float
    n_tilde: int
    N: int


# =============================================================================
# 경계식
# =============================================================================

def azuma_delta(n_tilde: float, m: float, epsilon: float) -> float:
    """δ = exp(−(ñ+m)ε²/8)"""
    if n_tilde < 0 or m < 0:
        raise ValueError(f"ñ, m 은 음수일 수 없습니다: ñ={n_tilde}, m={m}")
    if not epsilon > 0.0:
        raise ValueError(f"epsilon 은 양수여야 합니다: {epsilon}")
    return math.exp(-(n_tilde + m) * epsilon ** 2 / 8.0)


def confidence_with_flag(delta: float, variant: str = "per_session", m: int = 1) -> tuple[float, bool]:
    """
    신뢰도 p 와 퇴화 플래그

    - per_session: (1−δ)³(1−2δ)^11
    - per_qubit:   (1−δ)^{3m}(1−2δ)^{11m}
    δ ≥ ½ 이면 식이 양수가 아니므로 (0.0, True) 를 돌려줍니다.
    """
    if delta < 0.0:
        raise ValueError(f"delta 는 음수일 수 없습니다: {delta}")
    if variant not in CONFIDENCE_VARIANTS:
        raise ValueError(f"알 수 없는 confidence 변형: {variant!r}")
    if delta >= 0.5:
        return 0.0, True
    power = 1 if variant == "per_session" else max(int(m), 1)
    value = (1.0 - delta) ** (ONE_SIDED_SETTINGS * power) * (1.0 - 2.0 * delta) ** (TWO_SIDED_SETTINGS * power)
    return float(value), False


def confidence(delta: float, variant: str = "per_session", m: int = 1) -> float:
    value, degenerate = confidence_with_flag(delta, variant, m)
    if degenerate:
        logger.warning("δ=%.4g ≥ 1/2: confidence 식이 양수가 아니어서 0 으로 둡니다", delta)
    return value


def chi_bound(n_tilde: float, m: float, epsilon: float) -> float:
    """χ = (2ñε + m(2+ε)) / (ñ+m)"""
    if n_tilde + m <= 0:
        raise ValueError("ñ + m 은 양수여야 합니다")
    return (2.0 * n_tilde * epsilon + m * (2.0 + epsilon)) / (n_tilde + m)


def epsilon_bounds(chi: float) -> EpsilonBounds:
    """
    ε₂ = √(2χ)
    ε₁ = (1+√2)√((1+2√2)χ + √(2χ)) + 2√(2χ)
    ε̃ = ½(9ε₁ + ε₂)
    """
    if chi < 0.0:
        raise ValueError(f"chi 는 음수일 수 없습니다: {chi}")
    root = math.sqrt(2.0 * chi)
    eps2 = root
    eps1 = (1.0 + math.sqrt(2.0)) * math.sqrt((1.0 + 2.0 * math.sqrt(2.0)) * chi + root) + 2.0 * root
    return EpsilonBounds(eps1, eps2, 0.5 * (9.0 * eps1 + eps2))


_WORST_CASE = (
    (1.0, -2.0),
    (SQRT_HALF, -(1.0 + SQRT_HALF)),
    (0.0, 1.0),
    (-SQRT_HALF, 1.0 + SQRT_HALF),
)


def worst_case_prep_deviation(mu: float, pessimistic: bool = False) -> float:
    """
    측정하지 않은 준비용 쌍의 가상 상관 편차 ε′ (표 그대로)

    pessimistic=True 이면 chi_bound 가 쓰는 단순화 |ε′| = 2 를 돌려줍니다.
    """
    for ideal, value in _WORST_CASE:
        if abs(mu - ideal) <= 1e-12:
            return 2.0 if pessimistic else value
    raise ValueError(f"이상적 상관값이 아닙니다: {mu}")


def error_probability_bound(p: float, delta_frac: float, m: int, eps_tilde: float) -> float:
    """1 − pΔ + 2p√m ε̃ 를 [0, 1] 로 자름"""
    value = 1.0 - p * delta_frac + 2.0 * p * math.sqrt(m) * eps_tilde
    return float(min(1.0, max(0.0, value)))


def bound_report(params: SecurityParams, variant: str = "per_session", ideal: bool = False) -> BoundReport:
    """
    SecurityParams 만으로 일곱 개의 경계값을 재계산합니다.

    ideal=True 는 χ = 0 경로 (ε̃ = 0, p_error = 1 − pΔ).
    """
    delta = azuma_delta(params.n_tilde, params.m, params.epsilon)
    conf = confidence(delta, variant, params.m)
    chi = 0.0 if ideal else chi_bound(params.n_tilde, params.m, params.epsilon)
    eps = epsilon_bounds(chi)
    p_error = error_probability_bound(conf, params.delta_frac, max(params.m, 1), eps.eps_tilde)
    return BoundReport(chi, eps.eps1, eps.eps2, eps.eps_tilde, delta, conf, p_error)


def resource_estimate(
    m: int,
    target_confidence: float = 0.9,
    c: float = 1.0,
    eps0: float = DEFAULT_EPS0,
) -> ResourceEstimate:
    """
    ε = ε₀·m⁻², ñ+m = ⌈8ε⁻² ln(28m/(1−p))⌉, N = m + 14⌈cñ⌉

    δ ≤ (1−p)/(28m) 가 되므로 두 confidence 변형 모두 target 이상입니다.
    """
    if m < 1:
        raise ValueError(f"m 은 1 이상이어야 합니다: {m}")
    if not 0.0 < target_confidence < 1.0:
        raise ValueError(f"target_confidence 는 (0,1) 범위여야 합니다: {target_confidence}")
    epsilon = eps0 / m ** 2
    total = int(math.ceil(8.0 * math.log(RESOURCE_LOG_FACTOR * m / (1.0 - target_confidence)) / epsilon ** 2))
    n_tilde = max(total - m, 1)
    N = m + NUM_SETTINGS * int(math.ceil(c * n_tilde - 1e-9))
    return ResourceEstimate(epsilon, n_tilde, N)


def scaling_ratio(m: int, N: int) -> float:
    """N / (m⁴ ln max(m, 2))"""
    return N / (m ** 4 * math.log(max(m, 2)))


# =============================================================================
# 마팅게일 보조식
# =============================================================================

def azuma_tail(gamma: float, increments: Sequence[float]) -> float:
    """Pr(Y_n ≥ γ) ≤ exp(−γ² / (2Σc_i²))"""
    total = float(np.sum(np.square(increments)))
    if total <= 0.0:
        return 1.0 if gamma <= 0 else 0.0
    return math.exp(-gamma ** 2 / (2.0 * total))


def azuma_epsilon(count: int, delta: float) -> float:
    """주어진 통계량(count)과 실패확률 δ 로 보장되는 ε = √(8 ln(1/δ)/count)"""
    if count <= 0:
        raise ValueError("count 는 양수여야 합니다")
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"delta 는 (0,1] 범위여야 합니다: {delta}")
    return math.sqrt(8.0 * math.log(1.0 / delta) / count)


def correlation_interval(n_tilde: int, m_tilde: int, epsilon: float) -> tuple[float, float]:
    """
    실제 평균 상관 − 이상 평균 상관이 들어가는 비대칭 구간
    [m̃(2−ε)/|S̃|, (2ñε + m̃(2+ε))/|S̃|], 확률 ≥ 1 − 2exp(−|S̃|ε²/8)
    """
    size = n_tilde + m_tilde
    if size <= 0:
        raise ValueError("|S̃| 는 양수여야 합니다")
    lower = m_tilde * (2.0 - epsilon) / size
    upper = (2.0 * n_tilde * epsilon + m_tilde * (2.0 + epsilon)) / size
    return lower, upper
