# -*- coding: utf-8 -*-

"""
증명자가 만든 두 큐비트 쌍과 한쪽 큐비트 핸들

각 쪽은 자기 큐비트(PairQubit)만 측정할 수 있고, 측정 난수는 그 쪽이 직접 넘깁니다.
측정 기저 라벨은 테스트 라운드와 준비 라운드가 같은 집합을 씁니다:
- Alice "X", "Y", "Z", "D", "E+", "E-", "F" / Bob "X", "Y", "Z" (Bob Y = −Y)
- 준비 라운드의 θ=kπ/4 방향은 X, E+, Y, E- 중 하나에 부호를 붙인 것 (부호는 Alice 가 결과에 곱함),
  dummy 는 "Z"
"""

from __future__ import annotations

import numpy as np

from qstate import PAULI_Z, Operator, StateVector, eigenvector, projective_measure, remove_qubit
from mbqc import ProtocolViolation
from selftest import Side, observable_matrix

PAIR_LABELS = ("alice", "bob")
PREP_AXES = ("X", "E+", "Y", "E-")


def theta_basis(k: int) -> tuple[str, int]:
    """
    θ = kπ/4 측정 → (Alice 축 라벨, 부호)

    cos(kπ/4)X + sin(kπ/4)Y = 부호 · 축 관측량 (k ≥ 4 이면 부호 −1)
    """
    k = int(k) % 8
    return PREP_AXES[k % 4], (1 if k < 4 else -1)


def basis_observable(basis: str, side: Side | str) -> np.ndarray:
    """기저 라벨 → 2×2 ±1 관측량"""
    return observable_matrix(basis, side).matrix


def check_outcome(outcome, who: str) -> int:
    if isinstance(outcome, bool) or not isinstance(outcome, (int, np.integer)) or int(outcome) not in (1, -1):
        raise ProtocolViolation(f"{who}: 측정 결과가 ±1 이 아닙니다: {outcome!r}")
    return int(outcome)


class SharedPair:
    """0번 큐비트는 Alice 장치, 1번 큐비트는 Bob"""

    def __init__(self, state: StateVector):
        if not isinstance(state, StateVector) or state.num_qubits != 2:
            raise ProtocolViolation(f"두 큐비트 StateVector 가 아닌 쌍: {type(state).__name__}")
        self.state = state.relabel(PAIR_LABELS)
        self._eigvecs: dict = {}

    def measure(self, index: int, observable: np.ndarray, rng: np.random.Generator) -> int:
        if index in self._eigvecs:
            raise ProtocolViolation(f"{PAIR_LABELS[index]} 큐비트는 이미 측정되었습니다")
        op = Operator(observable)
        outcome, post, _ = projective_measure(self.state, op, [index], rng)
        self.state = post
        self._eigvecs[index] = eigenvector(op, outcome)
        return outcome

    def is_measured(self, index: int) -> bool:
        return index in self._eigvecs

    def residual(self, index: int, rng: np.random.Generator) -> StateVector:
        """
        상대 큐비트를 떼어낸 뒤의 index 쪽 단일 큐비트 상태

        상대가 측정하지 않았으면 계산 기저에서 측정해 버린 것으로 봅니다.
        """
        other = 1 - index
        if other not in self._eigvecs:
            self.measure(other, PAULI_Z, rng)
        return remove_qubit(self.state, PAIR_LABELS[other], self._eigvecs[other])

    @property
    def alice(self) -> "PairQubit":
        return PairQubit(self, 0)

    @property
    def bob(self) -> "PairQubit":
        return PairQubit(self, 1)


class PairQubit:
    def __init__(self, pair: SharedPair, index: int):
        self._pair = pair
        self.index = index

    def measure(self, observable: np.ndarray, rng: np.random.Generator) -> int:
        return self._pair.measure(self.index, observable, rng)

    def residual(self, rng: np.random.Generator) -> StateVector:
        return self._pair.residual(self.index, rng)
