#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
밀집(dense) 복소 상태벡터 엔진 (state.py)

프로토콜 전체에서 쓰는 유일한 양자 상태 표현입니다.

주요 기능:
1️⃣ StateVector / Operator / DensityMatrix 값 객체 (생성 후 불변)
2️⃣ tensor / apply / partial_trace 다중선형대수 연산
3️⃣ ±1 스펙트럼 관측량의 사영 측정 (Born 확률 샘플링)
4️⃣ 기댓값 계산

규약:
- 큐비트 순서는 big-endian (첫 번째 라벨이 최상위 비트)
- 난수는 호출자가 넘겨주는 numpy Generator만 사용 (전역 상태 없음)
- 허용오차: 대수 항등식 1e-12, 정규화된 양 1e-10
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)


# =============================================================================
# 허용오차 및 기본 행렬
# =============================================================================

ATOL_ALGEBRAIC = 1e-12
ATOL_NORMALIZED = 1e-10

SQRT_HALF = 1.0 / np.sqrt(2.0)

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = SQRT_HALF * np.array([[1, 1], [1, -1]], dtype=complex)
CZ = np.diag([1, 1, 1, -1]).astype(complex)


class QStateError(ValueError):
    """상태/연산자 차원 불일치, 잘못된 관측량, 잘못된 대상 큐비트 등"""


Target = Union[int, str]


def _as_complex_array(values) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise QStateError("NaN/Inf 진폭은 허용되지 않습니다")
    return arr


def _num_qubits_for(length: int) -> int:
    n = int(length).bit_length() - 1
    if length < 1 or (1 << n) != length:
        raise QStateError(f"길이 {length}는 2의 거듭제곱이 아닙니다")
    return n


def _default_labels(n: int, prefix: str = "q") -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(n))


# =============================================================================
# 값 객체
# =============================================================================

@dataclass(frozen=True, eq=False)
class StateVector:
    """
    순수 상태 |ψ⟩ (2^n 진폭, 라벨이 붙은 큐비트 레지스터)

    Args:
        amplitudes: 길이 2^n 복소 배열 (big-endian)
        labels: 큐비트 논리 이름 (중복 불가)
    """
    amplitudes: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        amps = _as_complex_array(self.amplitudes).reshape(-1)
        n = _num_qubits_for(amps.size)
        labels = tuple(self.labels) if self.labels else _default_labels(n)
        if len(labels) != n:
            raise QStateError(f"라벨 {len(labels)}개, 큐비트 {n}개")
        if len(set(labels)) != n:
            raise QStateError(f"중복 라벨: {labels}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > ATOL_NORMALIZED:
            raise QStateError(f"정규화되지 않은 상태 (norm²={norm:.12g})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_amplitudes(cls, amplitudes, labels: Sequence[str] = (), normalize: bool = True) -> "StateVector":
        amps = _as_complex_array(amplitudes).reshape(-1)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm <= ATOL_ALGEBRAIC:
                raise QStateError("영벡터는 정규화할 수 없습니다")
            amps = amps / norm
        return cls(amps, tuple(labels))

    @property
    def num_qubits(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def resolve(self, targets: Iterable[Target]) -> tuple[int, ...]:
        """라벨 또는 정수 인덱스 목록 → 레지스터 인덱스 (범위/중복 검사)"""
        return _resolve(self.labels, targets)

    def relabel(self, labels: Sequence[str]) -> "StateVector":
        return StateVector(self.amplitudes, tuple(labels))

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.labels)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True, eq=False)
class Operator:
    """
    2^d × 2^d 행렬 연산자

    hermitian / unitary 플래그는 생성 시 행렬에서 판정됩니다.
    """
    matrix: np.ndarray
    name: str = ""
    hermitian: bool = field(init=False)
    unitary: bool = field(init=False)

    def __post_init__(self):
        mat = _as_complex_array(self.matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise QStateError(f"정방행렬이 아닙니다: {mat.shape}")
        _num_qubits_for(mat.shape[0])
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "hermitian", bool(np.allclose(mat, mat.conj().T, atol=ATOL_ALGEBRAIC, rtol=0)))
        identity = np.eye(mat.shape[0])
        object.__setattr__(
            self, "unitary",
            bool(np.allclose(mat @ mat.conj().T, identity, atol=ATOL_NORMALIZED, rtol=0)),
        )

    @property
    def dim_qubits(self) -> int:
        return _num_qubits_for(self.matrix.shape[0])

    @property
    def is_observable(self) -> bool:
        """Hermitian 이고 O² = I (고유값 ±1)"""
        if not self.hermitian:
            return False
        identity = np.eye(self.matrix.shape[0])
        return bool(np.allclose(self.matrix @ self.matrix, identity, atol=ATOL_NORMALIZED, rtol=0))

    def dagger(self) -> "Operator":
        return Operator(self.matrix.conj().T, f"{self.name}†" if self.name else "")

    def __matmul__(self, other: "Operator") -> "Operator":
        return Operator(self.matrix @ other.matrix)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """밀도행렬 ρ (trace 1, Hermitian, 양의 준정부호)"""
    matrix: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        mat = _as_complex_array(self.matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise QStateError(f"정방행렬이 아닙니다: {mat.shape}")
        n = _num_qubits_for(mat.shape[0])
        labels = tuple(self.labels) if self.labels else _default_labels(n)
        if len(labels) != n:
            raise QStateError(f"라벨 {len(labels)}개, 큐비트 {n}개")
        if abs(np.trace(mat) - 1.0) > ATOL_NORMALIZED:
            raise QStateError(f"trace가 1이 아닙니다: {np.trace(mat)}")
        if not np.allclose(mat, mat.conj().T, atol=ATOL_ALGEBRAIC, rtol=0):
            raise QStateError("Hermitian이 아닌 밀도행렬")
        if np.linalg.eigvalsh(mat).min() < -ATOL_NORMALIZED:
            raise QStateError("음의 고유값을 가진 밀도행렬")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def maximally_mixed(cls, num_qubits: int, labels: Sequence[str] = ()) -> "DensityMatrix":
        dim = 2 ** num_qubits
        return cls(np.eye(dim, dtype=complex) / dim, tuple(labels))

    @classmethod
    def mixture(cls, weighted: Iterable[tuple[float, Union[StateVector, "DensityMatrix"]]]) -> "DensityMatrix":
        """Σ w_i ρ_i (가중치 합은 1이어야 함)"""
        total = None
        labels: tuple[str, ...] = ()
        for weight, item in weighted:
            rho = item.density() if isinstance(item, StateVector) else item
            total = weight * rho.matrix if total is None else total + weight * rho.matrix
            labels = rho.labels
        if total is None:
            raise QStateError("빈 혼합")
        return cls(total, labels)

    @property
    def num_qubits(self) -> int:
        return len(self.labels)


class Measurement(NamedTuple):
    outcome: int
    post_state: StateVector
    probability: float


# =============================================================================
# 상태 생성
# =============================================================================

def ket(bits: str, labels: Sequence[str] = ()) -> StateVector:
    """계산 기저 상태, 예: ket("01") = |01⟩"""
    if not bits or set(bits) - {"0", "1"}:
        raise QStateError(f"잘못된 비트열: {bits!r}")
    amps = np.zeros(2 ** len(bits), dtype=complex)
    amps[int(bits, 2)] = 1.0
    return StateVector(amps, tuple(labels))


def plus_state(angle: float, labels: Sequence[str] = ()) -> StateVector:
    """|+_α⟩ = (|0⟩ + e^{iα}|1⟩)/√2"""
    return StateVector(SQRT_HALF * np.array([1.0, np.exp(1j * angle)]), tuple(labels))


def bell_pair(labels: Sequence[str] = ("A", "B")) -> StateVector:
    """|φ⁺⟩ = (|00⟩ + |11⟩)/√2"""
    return StateVector(np.array([SQRT_HALF, 0, 0, SQRT_HALF], dtype=complex), tuple(labels))


def xy_observable(angle: float) -> np.ndarray:
    """X-Y 평면 관측량 cos α X + sin α Y (+1 고유상태 |+_α⟩)"""
    return np.cos(angle) * PAULI_X + np.sin(angle) * PAULI_Y


# =============================================================================
# 다중선형대수
# =============================================================================

def _resolve(labels: Sequence[str], targets: Iterable[Target]) -> tuple[int, ...]:
    resolved = []
    for t in targets:
        if isinstance(t, (int, np.integer)) and not isinstance(t, bool):
            idx = int(t)
            if not 0 <= idx < len(labels):
                raise QStateError(f"대상 인덱스 {idx} 범위 밖 (큐비트 {len(labels)}개)")
        else:
            try:
                idx = labels.index(t)
            except ValueError:
                raise QStateError(f"알 수 없는 라벨 {t!r}") from None
        resolved.append(idx)
    if len(set(resolved)) != len(resolved):
        raise QStateError(f"대상 큐비트가 겹칩니다: {list(targets)}")
    return tuple(resolved)


def tensor(*items):
    """
    StateVector / Operator / DensityMatrix 의 텐서곱 (같은 종류끼리만)

    Returns:
        같은 종류의 결합 객체 (라벨은 순서대로 이어 붙임)
    """
    if not items:
        raise QStateError("tensor 인자가 없습니다")
    kinds = {type(item) for item in items}
    if len(kinds) != 1:
        raise QStateError(f"서로 다른 종류의 텐서곱: {sorted(k.__name__ for k in kinds)}")
    first = items[0]
    if isinstance(first, StateVector):
        amps = first.amplitudes
        for item in items[1:]:
            amps = np.kron(amps, item.amplitudes)
        return StateVector(amps, sum((item.labels for item in items), ()))
    if isinstance(first, Operator):
        mat = first.matrix
        for item in items[1:]:
            mat = np.kron(mat, item.matrix)
        return Operator(mat, "⊗".join(item.name for item in items if item.name))
    if isinstance(first, DensityMatrix):
        mat = first.matrix
        for item in items[1:]:
            mat = np.kron(mat, item.matrix)
        return DensityMatrix(mat, sum((item.labels for item in items), ()))
    raise QStateError(f"지원하지 않는 타입: {type(first).__name__}")


def apply_array(matrix: np.ndarray, amplitudes: np.ndarray, num_qubits: int, targets: Sequence[int]) -> np.ndarray:
    """
    임의 행렬(비유니터리 포함)을 대상 큐비트에 적용한 원시 진폭 배열

    사영연산자, (I ± σ) 같은 비정규 항을 다루는 폐형식 계산에서 사용합니다.
    """
    k = len(targets)
    if matrix.shape != (2 ** k, 2 ** k):
        raise QStateError(f"{k}큐비트 대상에 {matrix.shape} 행렬")
    psi = np.asarray(amplitudes, dtype=complex).reshape((2,) * num_qubits)
    psi = np.moveaxis(psi, list(targets), list(range(k)))
    shape = psi.shape
    psi = (matrix @ psi.reshape(2 ** k, -1)).reshape(shape)
    psi = np.moveaxis(psi, list(range(k)), list(targets))
    return psi.reshape(-1)


def apply(op: Union[Operator, np.ndarray], state: StateVector, targets: Iterable[Target]) -> StateVector:
    """유니터리 op 를 state 의 targets 에 적용"""
    matrix = op.matrix if isinstance(op, Operator) else np.asarray(op, dtype=complex)
    idx = state.resolve(targets)
    return StateVector(apply_array(matrix, state.amplitudes, state.num_qubits, idx), state.labels)


def controlled(matrix: np.ndarray) -> np.ndarray:
    """|0⟩⟨0|⊗I + |1⟩⟨1|⊗U (제어 큐비트가 첫 번째)"""
    dim = matrix.shape[0]
    out = np.zeros((2 * dim, 2 * dim), dtype=complex)
    out[:dim, :dim] = np.eye(dim)
    out[dim:, dim:] = matrix
    return out


def partial_trace(rho: Union[DensityMatrix, StateVector], keep: Iterable[Target]) -> DensityMatrix:
    """
    keep 에 없는 큐비트를 trace out (결과 라벨은 레지스터 순서 유지)
    """
    if isinstance(rho, StateVector):
        rho = rho.density()
    n = rho.num_qubits
    kept = sorted(_resolve(rho.labels, keep))
    traced = [i for i in range(n) if i not in kept]
    dk, dt = 2 ** len(kept), 2 ** len(traced)
    t = rho.matrix.reshape((2,) * (2 * n))
    perm = kept + traced + [n + i for i in kept] + [n + i for i in traced]
    t = t.transpose(perm).reshape(dk, dt, dk, dt)
    reduced = np.einsum("ajbj->ab", t)
    return DensityMatrix(reduced, tuple(rho.labels[i] for i in kept))


def remove_qubit(state: StateVector, target: Target, vector: np.ndarray) -> StateVector:
    """
    측정이 끝난 큐비트를 ⟨vector| 로 축약해 레지스터에서 제거 (재정규화)
    """
    (idx,) = state.resolve([target])
    psi = np.moveaxis(state.amplitudes.reshape((2,) * state.num_qubits), idx, 0)
    rest = np.tensordot(np.conj(np.asarray(vector, dtype=complex)), psi, axes=(0, 0)).reshape(-1)
    labels = state.labels[:idx] + state.labels[idx + 1:]
    return StateVector.from_amplitudes(rest, labels)


# =============================================================================
# 측정 / 기댓값
# =============================================================================

def _check_observable(observable: Operator, k: int) -> None:
    if observable.dim_qubits != k:
        raise QStateError(f"{observable.dim_qubits}큐비트 관측량을 {k}개 대상에 적용")
    if not observable.hermitian:
        raise QStateError(f"Hermitian이 아닌 관측량 {observable.name!r}")
    if not observable.is_observable:
        raise QStateError(f"관측량 {observable.name!r}의 스펙트럼이 ±1이 아닙니다")


def _plus_branch(state: StateVector, observable: Operator, idx: tuple[int, ...]) -> np.ndarray:
    proj = 0.5 * (np.eye(observable.matrix.shape[0]) + observable.matrix)
    return apply_array(proj, state.amplitudes, state.num_qubits, idx)


def outcome_probabilities(state: StateVector, observable: Operator, targets: Iterable[Target]) -> tuple[float, float]:
    """(Pr[+1], Pr[−1])"""
    idx = state.resolve(targets)
    _check_observable(observable, len(idx))
    branch = _plus_branch(state, observable, idx)
    p_plus = float(np.clip(np.vdot(branch, branch).real, 0.0, 1.0))
    return p_plus, 1.0 - p_plus


def projective_measure(
    state: StateVector,
    observable: Operator,
    targets: Iterable[Target],
    rng: np.random.Generator,
) -> Measurement:
    """
    ±1 관측량 사영 측정

    Born 확률로 결과를 뽑고(난수 1회 소비), 해당 고유공간으로 사영한 뒤 재정규화합니다.

    Returns:
        Measurement(outcome=±1, post_state, probability)
    """
    idx = state.resolve(targets)
    _check_observable(observable, len(idx))
    branch_plus = _plus_branch(state, observable, idx)
    p_plus = float(np.clip(np.vdot(branch_plus, branch_plus).real, 0.0, 1.0))
    if rng.random() < p_plus:
        outcome, branch, prob = 1, branch_plus, p_plus
    else:
        outcome, branch, prob = -1, state.amplitudes - branch_plus, 1.0 - p_plus
    post = StateVector(branch / np.sqrt(prob), state.labels)
    logger.debug("measure %s on %s -> %+d (p=%.6f)", observable.name, idx, outcome, prob)
    return Measurement(outcome, post, prob)


def expectation(state: StateVector, observable: Operator, targets: Iterable[Target] | None = None) -> float:
    """⟨ψ|O|ψ⟩ (허수 잔차 1e-10 이하만 허용)"""
    if not observable.hermitian:
        raise QStateError(f"Hermitian이 아닌 관측량 {observable.name!r}")
    if targets is None:
        if observable.dim_qubits != state.num_qubits:
            raise QStateError(f"차원 불일치: 관측량 {observable.dim_qubits}큐비트, 상태 {state.num_qubits}큐비트")
        idx = tuple(range(state.num_qubits))
    else:
        idx = state.resolve(targets)
        if observable.dim_qubits != len(idx):
            raise QStateError(f"차원 불일치: 관측량 {observable.dim_qubits}큐비트, 대상 {len(idx)}개")
    value = np.vdot(state.amplitudes, apply_array(observable.matrix, state.amplitudes, state.num_qubits, idx))
    if abs(value.imag) > ATOL_NORMALIZED:
        raise QStateError(f"기댓값의 허수부가 큽니다: {value.imag:.3g}")
    return float(value.real)


def eigenvector(observable: Operator, outcome: int) -> np.ndarray:
    """단일 큐비트 ±1 관측량의 outcome 고유벡터"""
    if outcome not in (1, -1):
        raise QStateError(f"결과는 ±1 이어야 합니다: {outcome}")
    _check_observable(observable, 1)
    values, vectors = np.linalg.eigh(observable.matrix)
    return vectors[:, int(np.argmin(np.abs(values - outcome)))]
