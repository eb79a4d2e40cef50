# -*- coding: utf-8 -*-

"""
로컬 아이소메트리 Φ̄ = Φ′∘Φ 의 회로 구현과 폐형식

레지스터 순서: [S_A..., S_B..., QA, QB, RB]
1️⃣ swap_stage: 양쪽 축소 swap (H, c-Z, H, c-X) 로 Q 레지스터에 상태를 옮김
2️⃣ kickback_stage: R_B 에 H, c-M_B, H 로 복소켤레 여부를 기록
3️⃣ closed_form: (1/4√2)Σ_{k,l}(I+(−1)^l M)X^k(I+(−1)^k Z)(I+(−1)^a σ_A)|ψ⟩|a k⟩|l⟩ (재정규화)
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from qstate import (
    HADAMARD,
    PAULI_X,
    QStateError,
    StateVector,
    apply,
    apply_array,
    controlled,
    ket,
    tensor,
)
from isometry.assignment import OperatorAssignment
from selftest import ALICE_AXES

logger = logging.getLogger(__name__)

ANCILLA_LABELS = ("QA", "QB")
KICKBACK_LABEL = "RB"


def _check_physical(state: StateVector, assignment: OperatorAssignment, extra: int = 0) -> None:
    expected = assignment.physical_qubits + extra
    if state.num_qubits != expected:
        raise QStateError(
            f"레지스터 크기 불일치: 상태 {state.num_qubits}큐비트, "
            f"배정 {assignment.alice_qubits}+{assignment.bob_qubits}(+{extra}) 큐비트"
        )


def _outcome_bit(outcome: int) -> int:
    if outcome not in (1, -1):
        raise ValueError(f"결과는 ±1 이어야 합니다: {outcome}")
    return 0 if outcome == 1 else 1


def _reduced_swap(
    state: StateVector,
    ancilla: int,
    targets: Sequence[int],
    z_matrix: np.ndarray,
    x_matrix: np.ndarray,
) -> StateVector:
    state = apply(HADAMARD, state, [ancilla])
    state = apply(controlled(z_matrix), state, [ancilla, *targets])
    state = apply(HADAMARD, state, [ancilla])
    return apply(controlled(x_matrix), state, [ancilla, *targets])


def swap_stage(state: StateVector, assignment: OperatorAssignment, alice_outcome: int | None = None) -> StateVector:
    """
    Q = (QA, QB) 를 |00⟩ 으로 붙이고 축소 swap 을 적용

    alice_outcome 이 주어지면 Alice 쪽은 이미 측정이 끝난 것으로 보고
    QA 를 |a⟩ (+1 → |0⟩) 로 준비합니다.
    """
    _check_physical(state, assignment)
    n = state.num_qubits
    out = tensor(state, ket("00", ANCILLA_LABELS))
    qa, qb = n, n + 1
    if alice_outcome is None:
        out = _reduced_swap(out, qa, assignment.alice_targets, assignment.alice["Z"], assignment.alice["X"])
    elif _outcome_bit(alice_outcome):
        out = apply(PAULI_X, out, [qa])
    return _reduced_swap(out, qb, assignment.bob_targets, assignment.bob["Z"], assignment.bob["X"])


def kickback_stage(state: StateVector, assignment: OperatorAssignment) -> StateVector:
    """R_B 를 |0⟩ 으로 붙이고 H, c-M_B, H"""
    _check_physical(state, assignment, extra=len(ANCILLA_LABELS))
    out = tensor(state, ket("0", (KICKBACK_LABEL,)))
    rb = out.num_qubits - 1
    out = apply(HADAMARD, out, [rb])
    out = apply(controlled(assignment.phase), out, [rb, *assignment.bob_targets])
    return apply(HADAMARD, out, [rb])


def full_isometry(state: StateVector, assignment: OperatorAssignment) -> StateVector:
    """Φ̄ 전체 (Alice 측정 없이 양쪽 swap + kickback)"""
    return kickback_stage(swap_stage(state, assignment), assignment)


def project_alice(
    state: StateVector,
    assignment: OperatorAssignment,
    sigma: str,
    outcome: int,
) -> tuple[StateVector, float]:
    """
    Alice 가 σ 를 측정해 outcome 을 얻은 뒤의 상태 Π^a_σ|ψ⟩/√p 와 p

    Raises:
        QStateError: 해당 결과의 확률이 0
    """
    _check_physical(state, assignment)
    if sigma not in ALICE_AXES:
        raise ValueError(f"Alice 관측량이 아닙니다: {sigma!r}")
    sign = 1 - 2 * _outcome_bit(outcome)
    dim = 2 ** assignment.alice_qubits
    proj = 0.5 * (np.eye(dim) + sign * assignment.alice[sigma])
    branch = apply_array(proj, state.amplitudes, state.num_qubits, assignment.alice_targets)
    prob = float(np.vdot(branch, branch).real)
    if prob <= 1e-14:
        raise QStateError(f"Pr[{sigma}={outcome:+d}] = 0")
    return StateVector(branch / np.sqrt(prob), state.labels), prob


def closed_form(state: StateVector, assignment: OperatorAssignment, sigma: str, outcome: int) -> StateVector:
    """
    폐형식 아이소메트리 출력 (재정규화)

    정규화 전 노름² 은 2·Pr[σ=a] 입니다 (√2Π|ψ⟩ 의 노름²).
    """
    _check_physical(state, assignment)
    if sigma not in ALICE_AXES:
        raise ValueError(f"Alice 관측량이 아닙니다: {sigma!r}")
    a = _outcome_bit(outcome)
    n = state.num_qubits
    dim_a, dim_b = 2 ** assignment.alice_qubits, 2 ** assignment.bob_qubits
    eye_b = np.eye(dim_b)
    alice_t, bob_t = assignment.alice_targets, assignment.bob_targets

    base = apply_array(np.eye(dim_a) + (-1) ** a * assignment.alice[sigma], state.amplitudes, n, alice_t)
    total = np.zeros(2 ** (n + 3), dtype=complex)
    for k in (0, 1):
        v = apply_array(eye_b + (-1) ** k * assignment.bob["Z"], base, n, bob_t)
        if k:
            v = apply_array(assignment.bob["X"], v, n, bob_t)
        for l in (0, 1):
            w = apply_array(eye_b + (-1) ** l * assignment.phase, v, n, bob_t)
            register = np.zeros(8, dtype=complex)
            register[(a << 2) | (k << 1) | l] = 1.0
            total += np.kron(w, register) / (4.0 * np.sqrt(2.0))

    raw_norm = float(np.vdot(total, total).real)
    logger.debug("closed form %s=%+d: raw norm² %.6g", sigma, outcome, raw_norm)
    labels = state.labels + ANCILLA_LABELS + (KICKBACK_LABEL,)
    return StateVector.from_amplitudes(total, labels)
