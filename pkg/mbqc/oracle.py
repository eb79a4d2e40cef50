# -*- coding: utf-8 -*-

"""
전체 그래프 상태벡터 기준값(oracle)

dummy 는 계산 기저 곱 인자이므로 상태벡터에서 빼고, 이웃에 Z^x 로만 반영합니다.
각 dummy 의 X-Y 평면 측정 결과는 확률 ½ 입니다.
"""

from __future__ import annotations

import logging
from typing import Mapping, Sequence

import numpy as np

from qstate import SQRT_HALF
from mbqc.brickwork import AngleOctant, BrickworkGraph, PatternError, Vertex
from mbqc.pattern import BrickworkPattern
from mbqc.tape import Role

logger = logging.getLogger(__name__)

MAX_ORACLE_QUBITS = 22


def _basis_bra(delta: int, bit: int) -> np.ndarray:
    """⟨±_δ| (bit 0 → +)"""
    angle = AngleOctant(delta).shifted_by_pi(bit).radians
    return np.conj(SQRT_HALF * np.array([1.0, np.exp(1j * angle)]))


def graph_state(
    graph: BrickworkGraph,
    vertices: Sequence[Vertex],
    thetas: Mapping[Vertex, int],
    z_flips: Mapping[Vertex, int] | None = None,
) -> np.ndarray:
    """
    ⊗|+_θ⟩ 에 vertices 사이 간선의 CZ 와 Z^{flip} 을 적용한 진폭 텐서 (축 순서 = vertices)
    """
    k = len(vertices)
    if k > MAX_ORACLE_QUBITS:
        raise PatternError(f"oracle 큐비트 {k}개 > {MAX_ORACLE_QUBITS}")
    if k == 0:
        return np.ones((), dtype=complex)
    index = {v: i for i, v in enumerate(vertices)}
    bits = (np.arange(2 ** k)[:, None] >> np.arange(k - 1, -1, -1)[None, :]) & 1
    phase = np.zeros(2 ** k)
    for v in vertices:
        angle = AngleOctant(thetas.get(v, 0)).radians
        flip = (z_flips or {}).get(v, 0) & 1
        phase += bits[:, index[v]] * (angle + np.pi * flip)
    for u, v in graph.edges_within(vertices):
        phase += np.pi * (bits[:, index[u]] & bits[:, index[v]])
    amps = np.exp(1j * phase) / np.sqrt(2.0 ** k)
    return amps.reshape((2,) * k)


def _contract(tensor: np.ndarray, bras: Sequence[np.ndarray]) -> np.ndarray:
    """앞쪽 축부터 순서대로 ⟨bra| 를 축약"""
    out = tensor
    for bra in bras:
        out = np.tensordot(bra, out, axes=(0, 0))
    return out


def branch_probability(
    pattern: BrickworkPattern,
    deltas: Mapping[Vertex, int],
    bits: Mapping[Vertex, int],
) -> float:
    """
    실현된 (δ, b) 갈래의 결합 확률 (정직한 Bob, 이상적 입력)

    계산/trap 꼭짓점은 |+_θ⟩ 와 CZ, dummy 이웃의 Z^x 로 상태벡터를 만들고
    모든 측정 기저로 사영한 노름²에 dummy 마다 ½ 을 곱합니다.
    """
    active = [v for v in pattern.order if pattern.role(v) is not Role.DUMMY]
    thetas = {v: pattern.spec(v).theta for v in active}
    flips = {v: pattern.spec(v).x for v in active}
    state = graph_state(pattern.graph, active, thetas, flips)
    amplitude = _contract(state, [_basis_bra(deltas[v], bits[v]) for v in active])
    num_dummies = len(pattern.graph.vertices()) - len(active)
    return float(np.abs(amplitude) ** 2) * 0.5 ** num_dummies


def plain_output_distribution(pattern: BrickworkPattern, tol: float = 1e-12) -> dict:
    """
    블라인딩 없는 계산 영역의 보정된 출력 분포 {출력 비트열: 확률}

    흐름이 있으면 분포가 앞선 결과에 의존하지 않으므로 모든 s = 0 갈래에서 계산합니다.
    출력 비트열은 pattern.output_vertices 순서입니다.
    """
    region = [v for v in pattern.order if pattern.role(v) is Role.COMPUTATION]
    outputs = [v for v in region if pattern.is_output(v)]
    inner = [v for v in region if not pattern.is_output(v)]
    if not region:
        return {(): 1.0}
    ordered = inner + outputs
    state = graph_state(pattern.graph, ordered, {}, None)
    rest = _contract(state, [_basis_bra(pattern.spec(v).phi, 0) for v in inner])
    rest = np.asarray(rest).reshape(-1)
    norm = float(np.vdot(rest, rest).real)
    if norm <= tol:
        raise PatternError("s = 0 갈래의 확률이 0 입니다")
    rest = rest / np.sqrt(norm)

    # 출력 큐비트를 |±_φ⟩ 기저로 바꾼 뒤 확률
    k = len(outputs)
    tensor = rest.reshape((2,) * k)
    for axis, v in enumerate(outputs):
        basis = np.stack([_basis_bra(pattern.spec(v).phi, 0), _basis_bra(pattern.spec(v).phi, 1)])
        tensor = np.moveaxis(np.tensordot(basis, tensor, axes=(1, axis)), 0, axis)
    probs = np.abs(tensor.reshape(-1)) ** 2
    dist = {}
    for index, p in enumerate(probs):
        if p > tol:
            dist[tuple((index >> (k - 1 - i)) & 1 for i in range(k))] = float(p)
    return dist


def is_correct_output(pattern: BrickworkPattern, output: Sequence[int], tol: float = 1e-12) -> bool:
    return tuple(output) in plain_output_distribution(pattern, tol)
