# -*- coding: utf-8 -*-

"""
신뢰할 수 없는 장치의 연산자 배정(OperatorAssignment)과 물리 상태 생성기

레지스터 규약: S = S_A ⊗ S_B, Alice 물리 큐비트가 먼저(SA0, SA1, ...), 그 다음 Bob(SB0, ...).
한쪽당 물리 큐비트는 1~2개 (두 번째 큐비트는 junk 자유도).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from qstate import (
    ATOL_NORMALIZED,
    I2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    SQRT_HALF,
    StateVector,
    random_reflection,
    random_unitary,
)
from selftest import ALICE_AXES, BOB_AXES, Side, observable_matrix

MAX_SIDE_QUBITS = 2


def physical_labels(alice_qubits: int, bob_qubits: int) -> tuple[str, ...]:
    return tuple(f"SA{i}" for i in range(alice_qubits)) + tuple(f"SB{i}" for i in range(bob_qubits))


def _is_hermitian(m: np.ndarray) -> bool:
    return bool(np.allclose(m, m.conj().T, atol=ATOL_NORMALIZED, rtol=0))


def _is_unitary(m: np.ndarray) -> bool:
    return bool(np.allclose(m @ m.conj().T, np.eye(m.shape[0]), atol=ATOL_NORMALIZED, rtol=0))


def _embed(single: np.ndarray, qubits: int) -> np.ndarray:
    """첫 번째 물리 큐비트에만 작용하는 연산자"""
    out = single
    for _ in range(qubits - 1):
        out = np.kron(out, I2)
    return out


@dataclass(frozen=True, eq=False)
class OperatorAssignment:
    """
    Alice: X, Y, Z, D, E+, E-, F / Bob: X, Y, Z 와 위상 연산자 M_B

    Bob 의 Y 항목은 장치가 "Y_B" 로 측정하는 연산자입니다 (이상적이면 −Y).
    M_B 를 제외한 모든 항목은 Hermitian 유니터리여야 하고, M_B 는 유니터리여야 합니다.
    """
    alice: dict
    bob: dict
    phase: np.ndarray
    alice_qubits: int = 1
    bob_qubits: int = 1

    def __post_init__(self):
        for side, qubits in (("alice", self.alice_qubits), ("bob", self.bob_qubits)):
            if not 1 <= qubits <= MAX_SIDE_QUBITS:
                raise ValueError(f"{side} 물리 큐비트 수는 1~{MAX_SIDE_QUBITS}: {qubits}")
        if set(self.alice) != set(ALICE_AXES):
            raise ValueError(f"Alice 배정 항목이 다릅니다: {sorted(self.alice)}")
        if set(self.bob) != set(BOB_AXES):
            raise ValueError(f"Bob 배정 항목이 다릅니다: {sorted(self.bob)}")
        dim_a, dim_b = 2 ** self.alice_qubits, 2 ** self.bob_qubits
        for table, dim, side in ((self.alice, dim_a, "A"), (self.bob, dim_b, "B")):
            for label, matrix in table.items():
                matrix = np.asarray(matrix, dtype=complex)
                if matrix.shape != (dim, dim):
                    raise ValueError(f"{label}_{side}: 크기 {matrix.shape} ≠ {(dim, dim)}")
                if not (_is_hermitian(matrix) and _is_unitary(matrix)):
                    raise ValueError(f"{label}_{side} 는 Hermitian 유니터리가 아닙니다")
        phase = np.asarray(self.phase, dtype=complex)
        if phase.shape != (dim_b, dim_b) or not _is_unitary(phase):
            raise ValueError("M_B 는 Bob 쪽 유니터리여야 합니다")
        object.__setattr__(self, "alice", {k: np.asarray(v, dtype=complex) for k, v in self.alice.items()})
        object.__setattr__(self, "bob", {k: np.asarray(v, dtype=complex) for k, v in self.bob.items()})
        object.__setattr__(self, "phase", phase)

    @property
    def physical_qubits(self) -> int:
        return self.alice_qubits + self.bob_qubits

    @property
    def alice_targets(self) -> tuple[int, ...]:
        return tuple(range(self.alice_qubits))

    @property
    def bob_targets(self) -> tuple[int, ...]:
        return tuple(range(self.alice_qubits, self.physical_qubits))

    def labels(self) -> tuple[str, ...]:
        return physical_labels(self.alice_qubits, self.bob_qubits)

    def with_operator(self, side: Side | str, label: str, matrix: np.ndarray) -> "OperatorAssignment":
        side = Side(side)
        if side is Side.ALICE:
            return replace(self, alice={**self.alice, label: matrix})
        return replace(self, bob={**self.bob, label: matrix})

    def with_phase(self, matrix: np.ndarray) -> "OperatorAssignment":
        return replace(self, phase=matrix)


# =============================================================================
# 배정 생성기
# =============================================================================

def ideal_assignment(alice_qubits: int = 1, bob_qubits: int = 1) -> OperatorAssignment:
    """이상적 Pauli 배정, M_B = I (실수 측정 경우)"""
    alice = {label: _embed(observable_matrix(label, Side.ALICE).matrix, alice_qubits) for label in ALICE_AXES}
    bob = {label: _embed(observable_matrix(label, Side.BOB).matrix, bob_qubits) for label in BOB_AXES}
    return OperatorAssignment(alice, bob, np.eye(2 ** bob_qubits), alice_qubits, bob_qubits)


def conjugated_assignment(alice_qubits: int = 1, bob_qubits: int = 1) -> OperatorAssignment:
    """
    양쪽 장치가 모두 복소켤레 연산자를 쓰는 전략 (통계는 이상적 경우와 동일)

    Bob 의 Y 는 +Y 가 되고 그만큼의 위상을 M_B = −I 가 담습니다.
    """
    ideal = ideal_assignment(alice_qubits, bob_qubits)
    alice = {label: m.conj() for label, m in ideal.alice.items()}
    bob = {label: m.conj() for label, m in ideal.bob.items()}
    return OperatorAssignment(alice, bob, -np.eye(2 ** bob_qubits), alice_qubits, bob_qubits)


def random_assignment(rng: np.random.Generator, alice_qubits: int = 1, bob_qubits: int = 1) -> OperatorAssignment:
    """모든 관측량은 무작위 반사(±1 스펙트럼), M_B 는 Haar 유니터리"""
    dim_a, dim_b = 2 ** alice_qubits, 2 ** bob_qubits
    alice = {label: random_reflection(dim_a, rng) for label in ALICE_AXES}
    bob = {label: random_reflection(dim_b, rng) for label in BOB_AXES}
    return OperatorAssignment(alice, bob, random_unitary(dim_b, rng), alice_qubits, bob_qubits)


_GENERATORS = {"X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}


def rotate_operator(matrix: np.ndarray, axis: str, eta: float, qubits: int = 1) -> np.ndarray:
    """U O U†, U = exp(−iηG/2) (G 는 첫 물리 큐비트의 Pauli)"""
    generator = _embed(_GENERATORS[axis], qubits)
    u = np.cos(eta / 2.0) * np.eye(generator.shape[0]) - 1j * np.sin(eta / 2.0) * generator
    return u @ matrix @ u.conj().T


def rotated_assignment(
    base: OperatorAssignment,
    side: Side | str,
    label: str,
    axis: str,
    eta: float,
) -> OperatorAssignment:
    """한 관측량만 axis 둘레로 η 회전한 배정"""
    side = Side(side)
    qubits = base.alice_qubits if side is Side.ALICE else base.bob_qubits
    table = base.alice if side is Side.ALICE else base.bob
    return base.with_operator(side, label, rotate_operator(table[label], axis, eta, qubits))


# =============================================================================
# 물리 상태
# =============================================================================

def detuned_bell(detuning: float, phase: float = 0.0) -> StateVector:
    """cos(π/4+η)|00⟩ + e^{iφ} sin(π/4+η)|11⟩"""
    angle = np.pi / 4.0 + detuning
    amps = np.array([np.cos(angle), 0.0, 0.0, np.exp(1j * phase) * np.sin(angle)], dtype=complex)
    return StateVector(amps, physical_labels(1, 1))


_BELL_BASIS = SQRT_HALF * np.array([
    [1, 0, 0, 1],     # φ+
    [1, 0, 0, -1],    # φ−
    [0, 1, 1, 0],     # ψ+
    [0, 1, -1, 0],    # ψ−
], dtype=complex)


def werner_purification(q: float) -> StateVector:
    """
    첫 물리 큐비트 쌍(SA0, SB0)의 축약 상태가 Werner 상태
    q|φ⁺⟩⟨φ⁺| + (1−q)I/4 가 되는 한쪽당 2큐비트 순수 상태

    정화 레지스터 |i⟩ (i = 2·i₁ + i₂) 의 i₁ 은 SA1, i₂ 는 SB1 이 가집니다.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q 는 [0,1] 범위여야 합니다: {q}")
    weights = np.array([(1 + 3 * q) / 4, (1 - q) / 4, (1 - q) / 4, (1 - q) / 4])
    tensor = np.zeros((2, 2, 2, 2), dtype=complex)      # (SA0, SA1, SB0, SB1)
    for i, weight in enumerate(weights):
        pair = _BELL_BASIS[i].reshape(2, 2)              # (SA0, SB0)
        tensor[:, i >> 1, :, i & 1] += np.sqrt(weight) * pair
    return StateVector(tensor.reshape(-1), physical_labels(2, 2))
