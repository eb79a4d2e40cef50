# -*- coding: utf-8 -*-

"""
2단계 오류 확률 경계와 입력 상태 충실도 사슬

- p_error ≤ 1 − pΔ + 2p√m·ε̃  ([0, 1] 로 자름)
- F ≥ (1 − ε̃²/2)^{2m} ≥ 1 − mε̃²  (ε̃² ≤ 2)
- ‖ρ − ψ‖_tr ≤ 2√(1 − F) ≤ 2√m·ε̃
"""

from __future__ import annotations

import math

from selftest import BoundReport, SecurityParams, error_probability_bound


def p_error_bound(params: SecurityParams, report: BoundReport) -> float:
    """report.confidence 를 p 로, params 의 Δ, m 과 report.eps_tilde 를 사용"""
    return error_probability_bound(report.confidence, params.delta_frac, max(params.m, 1), report.eps_tilde)


def _check(eps_tilde: float, m: int) -> None:
    if eps_tilde < 0.0:
        raise ValueError(f"eps_tilde 는 음수일 수 없습니다: {eps_tilde}")
    if m < 1:
        raise ValueError(f"m 은 1 이상이어야 합니다: {m}")


def fidelity_floor(eps_tilde: float, m: int) -> float:
    """(1 − ε̃²/2)^{2m}"""
    _check(eps_tilde, m)
    return (1.0 - eps_tilde ** 2 / 2.0) ** (2 * m)


def linear_fidelity_floor(eps_tilde: float, m: int) -> float:
    """1 − mε̃²"""
    _check(eps_tilde, m)
    return 1.0 - m * eps_tilde ** 2


def input_trace_bound(eps_tilde: float, m: int) -> float:
    """2√m·ε̃"""
    _check(eps_tilde, m)
    return 2.0 * math.sqrt(m) * eps_tilde


def trace_bound_from_fidelity(fidelity: float) -> float:
    """2√(1 − F)"""
    if not 0.0 <= fidelity <= 1.0 + 1e-12:
        raise ValueError(f"fidelity 는 [0,1] 범위여야 합니다: {fidelity}")
    return 2.0 * math.sqrt(max(0.0, 1.0 - fidelity))
