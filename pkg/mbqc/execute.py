# -*- coding: utf-8 -*-

"""
2단계 스트리밍 실행과 trap 검사

주요 기능:
1️⃣ BrickworkRegister: 열 단위로 큐비트를 추가하며 CZ 를 걸고, 측정한 큐비트는 바로 제거
   (살아 있는 큐비트는 현재 열 + 다음 열, 최대 2·rows + 2)
2️⃣ HonestBrickworkProver: 정직한 Bob (받은 δ 그대로 X-Y 평면 측정)
3️⃣ streaming_execute: Alice 가 열 우선 순서로 δ_i 를 보내고 s_i = b_i ⊕ r_i 를 기록
4️⃣ verify_traps / corrected_output
"""

from __future__ import annotations

import logging
from typing import Mapping, Protocol

import numpy as np

from qstate import CZ, Operator, StateVector, apply, eigenvector, ket, plus_state, projective_measure, remove_qubit, tensor, xy_observable
from mbqc.brickwork import AngleOctant, BrickworkGraph, PatternError, Vertex
from mbqc.pattern import BrickworkPattern, compute_delta
from mbqc.tape import Role
from mbqc.transcript import MessageKind, ProtocolViolation, Transcript
from selftest import Verdict

logger = logging.getLogger(__name__)

REASON_TRAP = "trap_failed"
ALICE_TO_BOB = "alice->bob"
BOB_TO_ALICE = "bob->alice"


class FrontierOverflow(RuntimeError):
    """스트리밍 레지스터가 허용 큐비트 수를 넘음"""


class ComputeProver(Protocol):
    """2단계 증명자: 꼭짓점 위치와 δ 만 받고 비트 하나를 돌려줌"""

    def on_compute_measure(self, round_index: int, vertex: Vertex, delta: AngleOctant) -> int:
        ...


def vertex_label(v: Vertex) -> str:
    return f"{v[0]},{v[1]}"


# =============================================================================
# 스트리밍 레지스터
# =============================================================================

class BrickworkRegister:
    """
    Bob 이 들고 있는 단일 큐비트 입력으로 brickwork 상태를 열 단위로 만들며 측정

    Args:
        graph: brickwork 그래프
        inputs: {vertex: 길이 2 상태 벡터}
        max_live: 살아 있는 큐비트 상한 (기본 2·rows + 2)
    """

    def __init__(self, graph: BrickworkGraph, inputs: Mapping[Vertex, np.ndarray], max_live: int | None = None):
        missing = [v for v in graph.vertices() if v not in inputs]
        if missing:
            raise PatternError(f"입력 큐비트가 없습니다: {missing[:3]}...")
        self.graph = graph
        self.inputs = {v: np.asarray(inputs[v], dtype=complex) for v in graph.vertices()}
        self.max_live = max_live if max_live is not None else 2 * graph.rows + 2
        self.state: StateVector | None = None
        self.loaded_cols = 0
        self.measured: set = set()
        self.peak_live = 0

    @property
    def live(self) -> int:
        return 0 if self.state is None else self.state.num_qubits

    def _add(self, v: Vertex) -> None:
        qubit = StateVector.from_amplitudes(self.inputs[v], (vertex_label(v),))
        self.state = qubit if self.state is None else tensor(self.state, qubit)

    def _entangle(self, u: Vertex, v: Vertex) -> None:
        self.state = apply(CZ, self.state, [vertex_label(u), vertex_label(v)])

    def _load_column(self, j: int) -> None:
        for v in self.graph.column(j):
            self._add(v)
        for u, v in self.graph.iter_edges():
            if u[1] == j and v[1] == j:
                self._entangle(u, v)
            elif {u[1], v[1]} == {j - 1, j}:
                self._entangle(u, v)
        self.loaded_cols = j + 1
        self.peak_live = max(self.peak_live, self.live)
        if self.live > self.max_live:
            raise FrontierOverflow(f"살아 있는 큐비트 {self.live}개 > 상한 {self.max_live}")

    def ensure_loaded(self, col: int) -> None:
        target = min(col, self.graph.cols - 1)
        while self.loaded_cols <= target:
            self._load_column(self.loaded_cols)

    def measure(
        self,
        v: Vertex,
        delta: AngleOctant,
        rng: np.random.Generator,
        offset: float = 0.0,
    ) -> tuple[int, float]:
        """
        |±_{δ+offset}⟩ 기저 측정 후 큐비트 제거 (offset 은 라디안)

        Returns:
            (b, 해당 결과의 확률), |+_δ⟩ 이면 b = 0
        """
        if v in self.measured:
            raise ProtocolViolation(f"{v} 는 이미 측정되었습니다")
        self.ensure_loaded(v[1] + 1)
        label = vertex_label(v)
        observable = Operator(xy_observable(AngleOctant(delta).radians + offset), f"M({delta})")
        outcome, post, prob = projective_measure(self.state, observable, [label], rng)
        remaining = post.num_qubits - 1
        if remaining:
            self.state = remove_qubit(post, label, eigenvector(observable, outcome))
        else:
            self.state = None
        self.measured.add(v)
        return (0 if outcome == 1 else 1), prob


class HonestBrickworkProver:
    """받은 δ 로 정직하게 측정하는 Bob (관측 결과의 확률 곱을 branch_probability 에 기록)"""

    def __init__(
        self,
        graph: BrickworkGraph,
        inputs: Mapping[Vertex, np.ndarray],
        rng: np.random.Generator,
        max_live: int | None = None,
        angle_offset: float = 0.0,
    ):
        self.register = BrickworkRegister(graph, inputs, max_live)
        self.rng = rng
        self.angle_offset = angle_offset
        self.branch_probability = 1.0

    def on_compute_measure(self, round_index: int, vertex: Vertex, delta: AngleOctant) -> int:
        bit, prob = self.register.measure(vertex, delta, self.rng, self.angle_offset)
        self.branch_probability *= prob
        return bit


def ideal_inputs(pattern: BrickworkPattern) -> dict:
    """정직한 원격 준비 결과: 계산/trap 은 |+_θ⟩, dummy 는 |d⟩"""
    inputs = {}
    for v, s in pattern.specs.items():
        if s.role is Role.DUMMY:
            inputs[v] = ket(str(s.d)).amplitudes
        else:
            inputs[v] = plus_state(AngleOctant(s.theta).radians).amplitudes
    return inputs


# =============================================================================
# Alice 쪽 실행
# =============================================================================

def _check_bit(bit, vertex: Vertex) -> int:
    if isinstance(bit, bool) or not isinstance(bit, (int, np.integer)) or int(bit) not in (0, 1):
        raise ProtocolViolation(f"{vertex}: 결과 비트가 0/1 이 아닙니다: {bit!r}")
    return int(bit)


def streaming_execute(
    pattern: BrickworkPattern,
    bob: ComputeProver,
    alice_rng: np.random.Generator,
    transcript: Transcript | None = None,
) -> Transcript:
    """
    열 우선 순서로 δ_i 를 보내고 b_i 를 받아 대화록에 기록

    Alice 의 s_i = b_i ⊕ r_i 는 이후 꼭짓점의 δ 계산에만 쓰이며 대화록에는 싣지 않습니다.
    """
    transcript = transcript if transcript is not None else Transcript()
    base = transcript.next_round()
    results: dict = {}
    for index, v in enumerate(pattern.order):
        round_index = base + index
        delta = compute_delta(v, pattern, results, alice_rng)
        transcript.record(MessageKind.ANGLE_INSTRUCTION, round_index, ALICE_TO_BOB, vertex=v, delta=delta.k)
        bit = _check_bit(bob.on_compute_measure(round_index, v, delta), v)
        transcript.record(MessageKind.RESULT_REPORT, round_index, BOB_TO_ALICE, vertex=v, bit=bit)
        results[v] = bit ^ pattern.spec(v).r
    logger.debug("streaming 실행 완료: %d 라운드", len(pattern.order))
    return transcript


def alice_results(transcript: Transcript, pattern: BrickworkPattern) -> dict:
    """{vertex: s = b ⊕ r}"""
    return {v: b ^ pattern.spec(v).r for v, b in transcript.results_by_vertex().items()}


def corrected_output(transcript: Transcript, pattern: BrickworkPattern) -> tuple[int, ...]:
    """출력 열 계산 꼭짓점의 s (행 순서)"""
    results = alice_results(transcript, pattern)
    return tuple(results[v] for v in pattern.output_vertices)


def verify_traps(transcript: Transcript, pattern: BrickworkPattern) -> Verdict:
    """
    모든 trap 에서 b_t = r_t 이면 수락, 아니면 첫 번째 실패 trap 을 이름으로 거절

    Raises:
        PatternError: trap 이 하나도 없음
        ProtocolViolation: trap 결과가 대화록에 없음
    """
    traps = [v for v in pattern.order if pattern.role(v) is Role.TRAP]
    if not traps:
        raise PatternError("trap 이 없는 패턴은 검증할 수 없습니다")
    reported = transcript.results_by_vertex()
    for t in traps:
        if t not in reported:
            raise ProtocolViolation(f"trap {t} 의 결과가 없습니다")
        if reported[t] != pattern.spec(t).r:
            logger.info("trap %s 실패 (b=%d, r=%d)", t, reported[t], pattern.spec(t).r)
            return Verdict.abort(REASON_TRAP, f"trap {t}: b={reported[t]} ≠ r={pattern.spec(t).r}")
    return Verdict.accept()
