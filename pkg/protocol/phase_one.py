# -*- coding: utf-8 -*-

"""
1단계: 자가검증 + 원격 상태 준비

진행 순서 (라운드마다):
1️⃣ Alice → Bob: 쌍 요청, Bob → Alice 장치: 쌍 전달 (역할이 정해지기 전)
2️⃣ 테스트 라운드: 설정 αβ 로 양쪽 측정, 장부 갱신
3️⃣ 준비 라운드: Alice 장치가 θ 기저(dummy 는 Z)로 측정, Bob 은 잔여 큐비트 보관
4️⃣ 모든 라운드 후 acceptance_check, 중단 시 준비된 입력은 내보내지 않음

라운드 역할 순열은 Alice 의 rng 로만 정해지고 어떤 전략에도 전달되지 않습니다.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from qstate import StateVector
from mbqc import OCTANTS, ProtocolViolation, Role, Transcript, Vertex
from mbqc.transcript import MessageKind
from protocol.devices import SharedPair, basis_observable, check_outcome, theta_basis
from protocol.strategies import ProverStrategy
from selftest import (
    SETTINGS,
    CorrelationLedger,
    MeasurementSetting,
    SecurityParams,
    Side,
    Verdict,
    acceptance_check,
    update_estimator,
)

logger = logging.getLogger(__name__)

SETTING_DRAWS = ("balanced", "uniform")
REASON_VIOLATION = "protocol_violation"

ALICE_TO_BOB = "alice->bob"
BOB_TO_ALICE = "bob->alice"
ALICE_TO_DEVICE = "alice->device"
DEVICE_TO_ALICE = "device->alice"


class RoundKind(str, Enum):
    TEST = "test"
    PREP = "prep"


@dataclass(frozen=True)
class RoundRole:
    kind: RoundKind
    setting: MeasurementSetting | None = None
    prep_kind: Role | None = None
    vertex: Vertex | None = None

    @classmethod
    def test(cls, setting: MeasurementSetting) -> "RoundRole":
        return cls(RoundKind.TEST, setting=setting)

    @classmethod
    def prep(cls, kind: Role, vertex: Vertex) -> "RoundRole":
        return cls(RoundKind.PREP, prep_kind=Role(kind), vertex=vertex)


@dataclass(frozen=True, eq=False)
class PreparedInput:
    """
    Alice 쪽 고전 라벨과 Bob 쪽 잔여 큐비트

    label: 계산/trap 이면 Alice 가 저장한 8분 각도 (결과 −1 이면 θ+π), dummy 면 비트 s
    """
    vertex: Vertex
    kind: Role
    label: int
    bob_state: StateVector

    @property
    def bob_angle(self) -> int:
        """Bob 쪽 큐비트 |+_{−label}⟩ 의 각도"""
        return (-self.label) % OCTANTS


@dataclass(eq=False)
class PhaseOneResult:
    verdict: Verdict
    ledger: CorrelationLedger
    inputs: dict | None
    transcript: Transcript
    rounds: int

    @property
    def accepted(self) -> bool:
        return self.verdict.accepted


# =============================================================================
# 라운드 계획
# =============================================================================

def default_vertex_roles(m: int) -> list[tuple[Vertex, Role]]:
    return [((0, k), Role.COMPUTATION) for k in range(m)]


def plan_rounds(
    params: SecurityParams,
    vertex_roles: Sequence[tuple[Vertex, Role]],
    rng: np.random.Generator,
    setting_draw: str = "balanced",
) -> list[RoundRole]:
    """
    N = m + 14⌈cñ⌉ 개 라운드 역할을 균등 무작위 순서로 배치

    balanced: 설정마다 정확히 ⌈cñ⌉ 회, uniform: 테스트 라운드마다 설정을 균등 추출
    """
    if setting_draw not in SETTING_DRAWS:
        raise ValueError(f"알 수 없는 setting_draw: {setting_draw!r}")
    if len(vertex_roles) != params.m:
        raise ValueError(f"준비할 꼭짓점 {len(vertex_roles)}개 ≠ m={params.m}")
    if setting_draw == "balanced":
        tests = [RoundRole.test(s) for s in SETTINGS for _ in range(params.rounds_per_setting)]
    else:
        draws = rng.integers(len(SETTINGS), size=params.test_rounds)
        tests = [RoundRole.test(SETTINGS[int(i)]) for i in draws]
    roles = tests + [RoundRole.prep(kind, v) for v, kind in vertex_roles]
    order = rng.permutation(len(roles))
    return [roles[int(i)] for i in order]


# =============================================================================
# 원격 준비
# =============================================================================

def remote_prepare_round(
    kind: Role,
    rng: np.random.Generator,
    pair: StateVector | SharedPair,
    device: ProverStrategy | None = None,
    round_index: int = 0,
    theta: int | None = None,
    transcript: Transcript | None = None,
) -> tuple[int, StateVector]:
    """
    Alice 장치가 자기 쪽 큐비트를 측정해 Bob 쪽 입력을 원격 준비

    Args:
        kind: computation | trap | dummy
        rng: Alice 난수 (θ 추출, device 가 없으면 측정에도 사용)
        device: Alice 의 측정 장치 전략 (없으면 정직한 측정)
        theta: θ 를 고정할 때 (감사/테스트용)

    Returns:
        (Alice 라벨, Bob 잔여 상태)
    """
    kind = Role(kind)
    shared = pair if isinstance(pair, SharedPair) else SharedPair(pair)
    if kind is Role.DUMMY:
        basis, sign = "Z", 1
    else:
        theta = int(rng.integers(OCTANTS)) if theta is None else int(theta) % OCTANTS
        basis, sign = theta_basis(theta)

    if transcript is not None:
        transcript.record(MessageKind.MEASURE_INSTRUCTION, round_index, ALICE_TO_DEVICE, basis=basis)
    if device is None:
        reported = shared.alice.measure(basis_observable(basis, Side.ALICE), rng)
    else:
        reported = check_outcome(device.on_measure(round_index, basis, shared.alice), "Alice 장치")
    if transcript is not None:
        transcript.record(MessageKind.OUTCOME_REPORT, round_index, DEVICE_TO_ALICE, outcome=reported)
    outcome = sign * reported

    if kind is Role.DUMMY:
        label = 0 if outcome == 1 else 1
    else:
        label = (theta + (0 if outcome == 1 else 4)) % OCTANTS
    residual = shared.bob.residual(device.rng if device is not None and device.rng is not None else rng)
    return label, residual


# =============================================================================
# 1단계 실행
# =============================================================================

def _test_round(
    role: RoundRole,
    shared: SharedPair,
    alice_device: ProverStrategy,
    bob: ProverStrategy,
    ledger: CorrelationLedger,
    round_index: int,
    transcript: Transcript,
) -> None:
    setting = role.setting
    ledger.begin_round(setting)
    transcript.record(MessageKind.MEASURE_INSTRUCTION, round_index, ALICE_TO_DEVICE, basis=setting.alpha)
    transcript.record(MessageKind.MEASURE_INSTRUCTION, round_index, ALICE_TO_BOB, basis=setting.beta)
    a = check_outcome(alice_device.on_measure(round_index, setting.alpha, shared.alice), "Alice 장치")
    b = check_outcome(bob.on_measure(round_index, setting.beta, shared.bob), "Bob")
    transcript.record(MessageKind.OUTCOME_REPORT, round_index, DEVICE_TO_ALICE, outcome=a)
    transcript.record(MessageKind.OUTCOME_REPORT, round_index, BOB_TO_ALICE, outcome=b)
    update_estimator(ledger, setting, a, b)


def run_phase_one(
    params: SecurityParams,
    alice_device: ProverStrategy,
    bob: ProverStrategy,
    rng: np.random.Generator,
    vertex_roles: Sequence[tuple[Vertex, Role]] | None = None,
    variant: str = "per_session",
    setting_draw: str = "balanced",
    transcript: Transcript | None = None,
) -> PhaseOneResult:
    """
    N 라운드를 실행하고 수락 검사 결과를 돌려줌

    전략의 형식 위반(ProtocolViolation)은 진단 메시지를 담은 중단으로 처리합니다.
    """
    transcript = transcript if transcript is not None else Transcript()
    vertex_roles = list(vertex_roles) if vertex_roles is not None else default_vertex_roles(params.m)
    plan = plan_rounds(params, vertex_roles, rng, setting_draw)
    ledger = CorrelationLedger()
    prepared: dict = {}
    base = transcript.next_round()

    try:
        for offset, role in enumerate(plan):
            round_index = base + offset
            transcript.record(MessageKind.REQUEST_PAIR, round_index, ALICE_TO_BOB)
            shared = SharedPair(bob.on_prepare_pair(round_index))
            transcript.record(MessageKind.PAIR_DELIVERED, round_index, BOB_TO_ALICE)
            if role.kind is RoundKind.TEST:
                _test_round(role, shared, alice_device, bob, ledger, round_index, transcript)
            else:
                label, residual = remote_prepare_round(
                    role.prep_kind, rng, shared, alice_device, round_index, transcript=transcript,
                )
                prepared[role.vertex] = PreparedInput(role.vertex, role.prep_kind, label, residual)
                logger.debug("round %d: %s %s label=%d", round_index, role.prep_kind.value, role.vertex, label)
    except ProtocolViolation as e:
        logger.info("1단계 중단 (형식 위반): %s", e)
        verdict = Verdict.abort(REASON_VIOLATION, str(e))
        transcript.close(False, transcript.next_round(), verdict.reason)
        return PhaseOneResult(verdict, ledger, None, transcript, len(plan))

    verdict = acceptance_check(ledger, params, variant)
    if not verdict.accepted:
        logger.info("1단계 중단: %s (%s)", verdict.reason, verdict.detail)
        transcript.close(False, transcript.next_round(), verdict.reason)
        return PhaseOneResult(verdict, ledger, None, transcript, len(plan))
    return PhaseOneResult(verdict, ledger, prepared, transcript, len(plan))
