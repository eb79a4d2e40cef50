# -*- coding: utf-8 -*-

"""
정직한 Bell 쌍 측정의 Monte Carlo 와 마팅게일 경로

세션 수가 많은 Azuma 검증에서는 라운드별 상태 붕괴를 반복하는 대신,
qstate 로 구한 결합 결과 분포 Pr(a·b = +1) 에서 곱을 한꺼번에 뽑습니다.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from qstate import StateVector, apply_array, bell_pair
from selftest.settings import MeasurementSetting, Side, observable_matrix


def joint_outcome_distribution(state: StateVector, setting: MeasurementSetting) -> dict:
    """{(a, b): 확률}: Alice 는 0번, Bob 은 1번 큐비트를 측정"""
    alice = observable_matrix(setting.alpha, Side.ALICE).matrix
    bob = observable_matrix(setting.beta, Side.BOB).matrix
    identity = np.eye(2)
    dist = {}
    for a in (1, -1):
        for b in (1, -1):
            proj = np.kron(0.5 * (identity + a * alice), 0.5 * (identity + b * bob))
            branch = apply_array(proj, state.amplitudes, state.num_qubits, (0, 1))
            dist[(a, b)] = float(np.vdot(branch, branch).real)
    return dist


def product_plus_probability(state: StateVector, setting: MeasurementSetting) -> float:
    """Pr(a·b = +1)"""
    dist = joint_outcome_distribution(state, setting)
    return dist[(1, 1)] + dist[(-1, -1)]


def sample_estimators(
    setting: MeasurementSetting,
    rounds: int,
    sessions: int,
    rng: np.random.Generator,
    state: StateVector | None = None,
) -> np.ndarray:
    """
    세션별 Ĉ^{αβ} 표본 (길이 sessions)

    각 세션은 rounds 개의 독립된 쌍을 측정하며, 곱이 +1 인 개수를 이항분포로 뽑습니다.
    """
    pair = state if state is not None else bell_pair()
    p_plus = product_plus_probability(pair, setting)
    plus = rng.binomial(rounds, p_plus, size=sessions)
    return (2 * plus - rounds) / rounds


def correlation_martingale(products: Sequence[int], true_correlations: Sequence[float]) -> np.ndarray:
    """
    Y_k = Σ_{i≤k} [C_i − Ĉ_i]  (Y_0 = 0 포함, 길이 n+1)

    Ĉ_i = a_i·b_i ∈ {±1}, C_i ∈ [−1, 1] 이므로 증분은 |Y_{k+1} − Y_k| ≤ 2.
    """
    products = np.asarray(products, dtype=float)
    true_correlations = np.asarray(true_correlations, dtype=float)
    if products.shape != true_correlations.shape:
        raise ValueError("products 와 true_correlations 길이가 다릅니다")
    return np.concatenate([[0.0], np.cumsum(true_correlations - products)])
