# -*- coding: utf-8 -*-

"""
Bob 시점의 정확한 view 와 blindness 감사

주요 기능:
1️⃣ bob_view: 꼭짓점 하나에 대해 (δ 메시지, Bob 큐비트) 의 고전-양자 상태를 Alice 의 숨은 θ, r, d 로 평균
2️⃣ delta_distribution: δ 의 mod 8 히스토그램 (전수 열거)
3️⃣ blindness_audit: 두 비밀(계산 각도, θ, 역할 배치)에 대한 view 의 거리 합
4️⃣ prepared_input_marginal: 정직한 쌍에서 원격 준비된 Bob 큐비트의 주변 상태
5️⃣ transcript_audit: 실제 실행의 대화록 δ 와 전달된 잔여 큐비트로 만든 경험적 view 비교
"""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Mapping, Sequence

import numpy as np

from qstate import (
    PAULI_Z,
    DensityMatrix,
    Operator,
    StateVector,
    bell_pair,
    eigenvector,
    ket,
    outcome_probabilities,
    plus_state,
    remove_qubit,
    trace_distance,
    xy_observable,
)
from mbqc import OCTANTS, AngleOctant, BrickworkPattern, MessageKind, Role, Transcript, Vertex, compute_delta
from protocol.devices import PAIR_LABELS

logger = logging.getLogger(__name__)

VIEW_LABELS = ("delta0", "delta1", "delta2", "bob")


def _default_results(pattern: BrickworkPattern, results: Mapping | None) -> Mapping:
    return results if results is not None else {v: 0 for v in pattern.graph.vertices()}


def _delta_projector(k: int) -> np.ndarray:
    e = np.zeros(OCTANTS)
    e[k] = 1.0
    return np.outer(e, e)


def bob_view(pattern: BrickworkPattern, v: Vertex, results: Mapping | None = None) -> DensityMatrix:
    """
    Σ_{θ,r} (1/16) |δ⟩⟨δ| ⊗ |+_θ⟩⟨+_θ|  (dummy 는 Σ_{δ,d} (1/16) |δ⟩⟨δ| ⊗ |d⟩⟨d|)

    results: 이전 꼭짓점들의 s (기본값 모두 0), 보정 집합 패리티에만 쓰임
    """
    results = _default_results(pattern, results)
    spec = pattern.spec(v)
    rho = np.zeros((2 * OCTANTS, 2 * OCTANTS), dtype=complex)
    weight = 1.0 / (2 * OCTANTS)

    if spec.role is Role.DUMMY:
        for k in range(OCTANTS):
            for d in (0, 1):
                rho += weight * np.kron(_delta_projector(k), ket(str(d)).density().matrix)
        return DensityMatrix(rho, VIEW_LABELS)

    for theta in range(OCTANTS):
        for r in (0, 1):
            specs = dict(pattern.specs)
            specs[v] = replace(spec, theta=theta, r=r)
            delta = compute_delta(v, replace(pattern, specs=specs), results)
            qubit = plus_state(AngleOctant(theta).radians).density().matrix
            rho += weight * np.kron(_delta_projector(delta.k), qubit)
    return DensityMatrix(rho, VIEW_LABELS)


def delta_distribution(pattern: BrickworkPattern, v: Vertex, results: Mapping | None = None) -> np.ndarray:
    """δ ∈ {0..7} 의 확률 (길이 8)"""
    diag = np.real(np.diag(bob_view(pattern, v, results).matrix))
    return diag.reshape(OCTANTS, 2).sum(axis=1)


def blindness_audit(
    pattern_a: BrickworkPattern,
    pattern_b: BrickworkPattern,
    results: Mapping | None = None,
) -> float:
    """
    꼭짓점별 ½‖view_a − view_b‖_tr 의 합 (결합 view 거리의 상한)

    Raises:
        ValueError: 두 패턴의 그래프 크기가 다름
    """
    ga, gb = pattern_a.graph, pattern_b.graph
    if (ga.rows, ga.cols, ga.cylindrical) != (gb.rows, gb.cols, gb.cylindrical):
        raise ValueError(f"그래프 크기 불일치: {ga.rows}x{ga.cols} vs {gb.rows}x{gb.cols}")
    results = _default_results(pattern_a, results)
    advantage = 0.0
    for v in ga.measurement_order():
        advantage += 0.5 * trace_distance(bob_view(pattern_a, v, results), bob_view(pattern_b, v, results))
    logger.debug("blindness advantage=%.3g", advantage)
    return advantage


def prepared_input_marginal(kind: Role | str, pair: StateVector | None = None) -> DensityMatrix:
    """
    균등한 θ 와 Alice 결과에 대해 평균한 Bob 잔여 큐비트 밀도행렬 (정확한 Born 가중치)

    pair 를 주지 않으면 |φ⁺⟩ (0번 Alice, 1번 Bob)
    """
    kind = Role(kind)
    pair = (pair if pair is not None else bell_pair(PAIR_LABELS)).relabel(PAIR_LABELS)
    if kind is Role.DUMMY:
        observables = [(1.0, Operator(PAULI_Z))]
    else:
        observables = [(1.0 / OCTANTS, Operator(xy_observable(AngleOctant(k).radians))) for k in range(OCTANTS)]

    weighted = []
    for w, op in observables:
        p_plus, p_minus = outcome_probabilities(pair, op, [PAIR_LABELS[0]])
        for outcome, prob in ((1, p_plus), (-1, p_minus)):
            if prob > 0.0:
                weighted.append((w * prob, remove_qubit(pair, PAIR_LABELS[0], eigenvector(op, outcome))))
    return DensityMatrix.mixture(weighted)


# =============================================================================
# 대화록 기반 감사
# =============================================================================

def delivered_view(transcript: Transcript, inputs: Mapping) -> dict:
    """
    실행 한 번에서 Bob 이 실제로 가진 꼭짓점별 view |δ⟩⟨δ| ⊗ ρ_v

    δ 는 대화록의 각도 지시, ρ_v 는 원격 준비 뒤 Bob 에게 남은 잔여 큐비트입니다.

    Raises:
        ValueError: 각도 지시를 받은 꼭짓점에 전달된 큐비트가 없음
    """
    views = {}
    for m in transcript.of_kind(MessageKind.ANGLE_INSTRUCTION):
        v = tuple(m.payload["vertex"])
        if v not in inputs:
            raise ValueError(f"{v} 에 전달된 큐비트가 없습니다")
        qubit = inputs[v].bob_state.density().matrix
        views[v] = np.kron(_delta_projector(int(m.payload["delta"]) % OCTANTS), qubit)
    return views


def empirical_view(runs: Sequence[tuple[Transcript, Mapping]]) -> dict:
    """
    (대화록, 전달된 입력) 실행들의 delivered_view 평균 {vertex: DensityMatrix}

    Raises:
        ValueError: 실행이 없거나 실행마다 꼭짓점 집합이 다름
    """
    if not runs:
        raise ValueError("실행이 없습니다")
    total: dict = {}
    for transcript, inputs in runs:
        views = delivered_view(transcript, inputs)
        if total and set(views) != set(total):
            raise ValueError("실행마다 각도 지시를 받은 꼭짓점이 다릅니다")
        for v, rho in views.items():
            total[v] = total.get(v, 0.0) + rho
    return {v: DensityMatrix(rho / len(runs), VIEW_LABELS) for v, rho in total.items()}


def transcript_audit(
    runs_a: Sequence[tuple[Transcript, Mapping]],
    runs_b: Sequence[tuple[Transcript, Mapping]],
) -> float:
    """
    두 실행 묶음의 경험적 view 사이 꼭짓점별 ½‖·‖_tr 의 평균

    표본 잡음이 남으므로 값은 실행 수 n 에 대해 O(1/√n) 로 줄어듭니다.
    """
    view_a, view_b = empirical_view(runs_a), empirical_view(runs_b)
    if set(view_a) != set(view_b):
        raise ValueError("두 실행 묶음의 꼭짓점 집합이 다릅니다")
    distances = [0.5 * trace_distance(view_a[v], view_b[v]) for v in sorted(view_a)]
    advantage = float(np.mean(distances))
    logger.debug("transcript audit: %d/%d 실행, 평균 거리=%.3g", len(runs_a), len(runs_b), advantage)
    return advantage
