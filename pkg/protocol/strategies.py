# -*- coding: utf-8 -*-

"""
증명자 전략 (Alice 의 측정 장치와 Bob)

전략 객체는 세션마다 새로 만들고 bind(rng) 로 자기 난수 스트림만 받습니다.
서로 공유하는 가변 상태는 없으며, Alice 의 θ, r, φ, 역할, tape 위치는 어떤 콜백에도 전달되지 않습니다.

콜백:
- on_prepare_pair(round) -> StateVector      (Bob: 두 큐비트 쌍 생성, 0번이 Alice 쪽)
- on_measure(round, basis, qubit) -> ±1      (자기 큐비트 측정)
- begin_computation(graph, qubits)           (2단계 시작: Bob 이 가진 잔여 큐비트)
- on_compute_measure(round, vertex, δ) -> bit
"""

from __future__ import annotations

import logging
from typing import Mapping

import numpy as np

from qstate import StateVector, bell_pair, ket
from isometry import rotate_operator
from mbqc import AngleOctant, BrickworkGraph, HonestBrickworkProver, Vertex
from protocol.devices import PAIR_LABELS, PairQubit, basis_observable
from selftest import Side

logger = logging.getLogger(__name__)


class ProverStrategy:
    """정직한 기본 동작"""
    name = "honest"

    def __init__(self, side: Side | str = Side.BOB):
        self.side = Side(side)
        self.rng: np.random.Generator | None = None
        self._prover: HonestBrickworkProver | None = None

    def bind(self, rng: np.random.Generator) -> "ProverStrategy":
        self.rng = rng
        return self

    def describe(self) -> dict:
        return {"name": self.name}

    # --- 1단계 ---------------------------------------------------------------
    def on_prepare_pair(self, round_index: int) -> StateVector:
        return bell_pair(PAIR_LABELS)

    def observable(self, basis: str) -> np.ndarray:
        return basis_observable(basis, self.side)

    def on_measure(self, round_index: int, basis: str, qubit: PairQubit) -> int:
        return qubit.measure(self.observable(basis), self.rng)

    # --- 2단계 ---------------------------------------------------------------
    def angle_offset(self) -> float:
        return 0.0

    def begin_computation(self, graph: BrickworkGraph, qubits: Mapping[Vertex, np.ndarray]) -> None:
        self._prover = HonestBrickworkProver(graph, qubits, self.rng, angle_offset=self.angle_offset())

    def honest_bit(self, round_index: int, vertex: Vertex, delta: AngleOctant) -> int:
        if self._prover is None:
            raise RuntimeError("begin_computation 이 먼저 호출되어야 합니다")
        return self._prover.on_compute_measure(round_index, vertex, delta)

    def on_compute_measure(self, round_index: int, vertex: Vertex, delta: AngleOctant) -> int:
        return self.honest_bit(round_index, vertex, delta)


class HonestStrategy(ProverStrategy):
    name = "honest"


class DepolarizingStrategy(ProverStrategy):
    """확률 q 로 |φ⁺⟩, 아니면 균등한 계산 기저 |ab⟩ (평균하면 Werner 상태)"""
    name = "depolarizing"

    def __init__(self, side: Side | str = Side.BOB, q: float = 1.0):
        super().__init__(side)
        if not 0.0 <= q <= 1.0:
            raise ValueError(f"q 는 [0,1] 범위여야 합니다: {q}")
        self.q = float(q)

    def describe(self) -> dict:
        return {"name": self.name, "q": self.q}

    def on_prepare_pair(self, round_index: int) -> StateVector:
        if self.rng.random() < self.q:
            return bell_pair(PAIR_LABELS)
        bits = self.rng.integers(2, size=2)
        return ket(f"{bits[0]}{bits[1]}", PAIR_LABELS)


class MiscalibratedStrategy(ProverStrategy):
    """모든 측정 기저를 Y 축 둘레로 η 만큼 돌리고, 2단계 각도에 η 를 더함"""
    name = "miscalibrated"

    def __init__(self, side: Side | str = Side.BOB, eta: float = 0.0):
        super().__init__(side)
        self.eta = float(eta)

    def describe(self) -> dict:
        return {"name": self.name, "eta": self.eta}

    def observable(self, basis: str) -> np.ndarray:
        return rotate_operator(super().observable(basis), "Y", self.eta)

    def angle_offset(self) -> float:
        return self.eta


class ClassicalCheatStrategy(ProverStrategy):
    """큐비트를 측정하지 않고 항상 같은 값을 보고"""
    name = "classical_cheat"

    def __init__(self, side: Side | str = Side.BOB, report: int = 1, entangle: bool = True):
        super().__init__(side)
        if report not in (1, -1):
            raise ValueError(f"report 는 ±1 이어야 합니다: {report}")
        self.report = int(report)
        self.entangle = bool(entangle)

    def describe(self) -> dict:
        return {"name": self.name, "report": self.report, "entangle": self.entangle}

    def on_prepare_pair(self, round_index: int) -> StateVector:
        return bell_pair(PAIR_LABELS) if self.entangle else ket("00", PAIR_LABELS)

    def on_measure(self, round_index: int, basis: str, qubit: PairQubit) -> int:
        return self.report


class FlipAllStrategy(ProverStrategy):
    """2단계에서 모든 결과 비트를 뒤집어 보고"""
    name = "flip_all"

    def on_compute_measure(self, round_index: int, vertex: Vertex, delta: AngleOctant) -> int:
        return 1 - self.honest_bit(round_index, vertex, delta)


class SingleVertexDeviateStrategy(ProverStrategy):
    """
    한 꼭짓점의 결과만 뒤집음

    vertex 를 주지 않으면 begin_computation 에서 자기 난수로 균등하게 고릅니다.
    """
    name = "single_vertex"

    def __init__(self, side: Side | str = Side.BOB, vertex: Vertex | None = None):
        super().__init__(side)
        self.fixed_vertex = tuple(vertex) if vertex is not None else None
        self.vertex: Vertex | None = self.fixed_vertex

    def describe(self) -> dict:
        return {"name": self.name, "vertex": list(self.fixed_vertex) if self.fixed_vertex else None}

    def begin_computation(self, graph: BrickworkGraph, qubits: Mapping[Vertex, np.ndarray]) -> None:
        super().begin_computation(graph, qubits)
        if self.fixed_vertex is None:
            vertices = graph.vertices()
            self.vertex = vertices[int(self.rng.integers(len(vertices)))]

    def on_compute_measure(self, round_index: int, vertex: Vertex, delta: AngleOctant) -> int:
        bit = self.honest_bit(round_index, vertex, delta)
        return 1 - bit if vertex == self.vertex else bit


STRATEGIES = {
    cls.name: cls
    for cls in (
        HonestStrategy,
        DepolarizingStrategy,
        MiscalibratedStrategy,
        ClassicalCheatStrategy,
        FlipAllStrategy,
        SingleVertexDeviateStrategy,
    )
}


def make_strategy(spec: Mapping | str, side: Side | str = Side.BOB) -> ProverStrategy:
    """
    {"name": "depolarizing", "q": 0.9} 또는 "honest" → 전략 객체

    Raises:
        ValueError: 알 수 없는 전략 이름/파라미터
    """
    if isinstance(spec, str):
        spec = {"name": spec}
    params = dict(spec)
    name = params.pop("name", None)
    if name not in STRATEGIES:
        raise ValueError(f"알 수 없는 전략: {name!r} (가능: {', '.join(sorted(STRATEGIES))})")
    try:
        return STRATEGIES[name](side, **params)
    except TypeError as e:
        raise ValueError(f"{name} 전략 파라미터 오류: {e}") from e
