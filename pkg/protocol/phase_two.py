# -*- coding: utf-8 -*-

"""
2단계: 1단계에서 준비된 입력으로 brickwork 패턴을 스트리밍 실행하고 trap 을 검사
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from mbqc import (
    BrickworkPattern,
    PatternError,
    Role,
    Transcript,
    corrected_output,
    streaming_execute,
    verify_traps,
    with_prepared_labels,
)
from protocol.phase_one import PreparedInput
from protocol.strategies import ProverStrategy
from selftest import Verdict

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class PhaseTwoResult:
    verdict: Verdict
    outputs: tuple | None
    transcript: Transcript
    pattern: BrickworkPattern

    @property
    def accepted(self) -> bool:
        return self.verdict.accepted


def vertex_roles(pattern: BrickworkPattern) -> list:
    """1단계 준비 라운드에 넘길 (꼭짓점, 역할) 목록 (행 우선)"""
    return [(v, pattern.role(v)) for v in pattern.graph.vertices()]


def prepared_pattern(pattern: BrickworkPattern, inputs: Mapping) -> BrickworkPattern:
    """준비 라벨을 패턴의 θ (Bob 쪽 각도) 와 dummy 비트 d 로 옮김"""
    thetas, bits = {}, {}
    for v in pattern.graph.vertices():
        if v not in inputs:
            raise PatternError(f"{v} 에 준비된 입력이 없습니다")
        prepared: PreparedInput = inputs[v]
        if prepared.kind is not pattern.role(v):
            raise PatternError(f"{v}: 준비 역할 {prepared.kind.value} ≠ 패턴 역할 {pattern.role(v).value}")
        if prepared.kind is Role.DUMMY:
            bits[v] = prepared.label
        else:
            thetas[v] = prepared.bob_angle
    return with_prepared_labels(pattern, thetas, bits)


def run_phase_two(
    inputs: Mapping,
    pattern: BrickworkPattern,
    bob: ProverStrategy,
    alice_rng: np.random.Generator,
    transcript: Transcript | None = None,
) -> PhaseTwoResult:
    """
    Bob 에게 잔여 큐비트를 넘기고 열 우선 순서로 δ 를 보내 실행

    Returns:
        PhaseTwoResult (거절이면 outputs=None)
    """
    transcript = transcript if transcript is not None else Transcript()
    pattern = prepared_pattern(pattern, inputs)
    bob.begin_computation(pattern.graph, {v: inputs[v].bob_state.amplitudes for v in pattern.graph.vertices()})
    streaming_execute(pattern, bob, alice_rng, transcript)
    verdict = verify_traps(transcript, pattern)
    transcript.close(verdict.accepted, transcript.next_round(), verdict.reason)
    if not verdict.accepted:
        logger.info("2단계 거절: %s", verdict.detail)
        return PhaseTwoResult(verdict, None, transcript, pattern)
    outputs = corrected_output(transcript, pattern)
    logger.info("2단계 수락: 출력 %s", outputs)
    return PhaseTwoResult(verdict, outputs, transcript, pattern)
