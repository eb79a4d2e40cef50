# -*- coding: utf-8 -*-

"""
추출 거리(ExtractionResult)와 교환 관계 잔차

주요 기능:
1️⃣ correlations / chi_actual: 배정·상태의 14개 상관과 최대 편차
2️⃣ extraction_distance: Φ̄(√2Π|ψ⟩) 와 두 갈래(R=0: Π_{σ*}, R=1: Π_σ) 이상 상태 사이 거리
   (갈래별 junk 는 부분 내적으로 닫힌 형태 최적화)
3️⃣ commutation_residuals: 반교환/상관 잔차 4개와 그 경계
4️⃣ sweep_frame: 스윕 결과 DataFrame (chi_actual, distance, eps_tilde_bound, sigma, outcome)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np
import pandas as pd

from qstate import PAULI_Z, SQRT_HALF, StateVector, apply_array
from isometry.assignment import OperatorAssignment
from isometry.circuit import kickback_stage, project_alice, swap_stage
from selftest import SETTINGS, Side, epsilon_bounds, ideal_correlation, observable_matrix

logger = logging.getLogger(__name__)

_PHI_PLUS = np.array([SQRT_HALF, 0, 0, SQRT_HALF], dtype=complex)
SWEEP_COLUMNS = ["chi_actual", "distance", "eps_tilde_bound", "sigma", "outcome"]


@dataclass(frozen=True, eq=False)
class ExtractionResult:
    extracted_state: StateVector
    distance: float
    distance_squared: float
    chi_actual: float
    sigma: str
    outcome: int
    branch_probability: float
    r1_population: float

    @property
    def eps_tilde_bound(self) -> float:
        return epsilon_bounds(self.chi_actual).eps_tilde

    def to_row(self) -> dict:
        return {
            "chi_actual": self.chi_actual,
            "distance": self.distance,
            "eps_tilde_bound": self.eps_tilde_bound,
            "sigma": self.sigma,
            "outcome": self.outcome,
        }


class CommutationResiduals(NamedTuple):
    anticomm_alice: float   # ‖{X_A, Z_A}ψ‖
    anticomm_bob: float     # ‖{X_B, Z_B}ψ‖
    diff_x: float           # ‖(X_A − X_B)ψ‖
    diff_z: float           # ‖(Z_A − Z_B)ψ‖


# =============================================================================
# 상관
# =============================================================================

def correlations(state: StateVector, assignment: OperatorAssignment) -> dict:
    """{setting: ⟨ψ|α_A ⊗ β_B|ψ⟩}"""
    n = state.num_qubits
    values = {}
    for s in SETTINGS:
        op = np.kron(assignment.alice[s.alpha], assignment.bob[s.beta])
        branch = apply_array(op, state.amplitudes, n, assignment.alice_targets + assignment.bob_targets)
        values[s] = float(np.vdot(state.amplitudes, branch).real)
    return values


def chi_actual(state: StateVector, assignment: OperatorAssignment) -> float:
    """14개 설정 중 최대 |⟨α⊗β⟩ − μ^{αβ}|"""
    return max(abs(value - ideal_correlation(s)) for s, value in correlations(state, assignment).items())


# =============================================================================
# 추출 거리
# =============================================================================

def ideal_targets(sigma: str, outcome: int) -> tuple[np.ndarray, np.ndarray]:
    """
    (Q_A, Q_B) 두 큐비트의 정규화된 이상 상태 (R=0 갈래, R=1 갈래)

    R=0: Π^a_Z ⊗ Π^a_{σ*} |φ⁺⟩,  R=1: Π^a_Z ⊗ Π^a_σ |φ⁺⟩
    """
    sig = observable_matrix(sigma, Side.ALICE).matrix
    eye = np.eye(2)
    proj_z = 0.5 * (eye + outcome * PAULI_Z)
    targets = []
    for matrix in (sig.conj(), sig):
        vec = np.kron(proj_z, 0.5 * (eye + outcome * matrix)) @ _PHI_PLUS
        targets.append(vec / np.linalg.norm(vec))
    return targets[0], targets[1]


def extraction_distance(
    state: StateVector,
    assignment: OperatorAssignment,
    sigma: str,
    outcome: int,
) -> ExtractionResult:
    """
    Alice 가 σ=a 를 얻은 갈래의 아이소메트리 출력과 이상 상태 사이 최소 거리

    출력 Ω = Σ_r Ω_r ⊗ |r⟩ 에 대해 junk 최적값은 v_r = (I ⊗ ⟨q_r|)Ω_r 이고
    거리² = Σ_r ‖Ω_r − v_r ⊗ q_r‖² 입니다 (뺄셈 상쇄 없이 잔차를 직접 계산).
    """
    projected, prob = project_alice(state, assignment, sigma, outcome)
    out = kickback_stage(swap_stage(projected, assignment, alice_outcome=outcome), assignment)
    n = assignment.physical_qubits
    amps = out.amplitudes.reshape(2 ** n, 4, 2)

    dist2 = 0.0
    for r, target in enumerate(ideal_targets(sigma, outcome)):
        omega = amps[:, :, r]
        v = omega @ target.conj()
        residual = omega - np.outer(v, target)
        dist2 += float(np.vdot(residual, residual).real)
    r1_population = float(np.vdot(amps[:, :, 1], amps[:, :, 1]).real)

    result = ExtractionResult(
        extracted_state=out,
        distance=float(np.sqrt(dist2)),
        distance_squared=dist2,
        chi_actual=chi_actual(state, assignment),
        sigma=sigma,
        outcome=outcome,
        branch_probability=prob,
        r1_population=r1_population,
    )
    logger.debug("extraction %s=%+d: distance=%.3g chi=%.3g", sigma, outcome, result.distance, result.chi_actual)
    return result


# =============================================================================
# 교환 관계
# =============================================================================

def commutation_residuals(state: StateVector, assignment: OperatorAssignment) -> CommutationResiduals:
    n = state.num_qubits
    psi = state.amplitudes
    at, bt = assignment.alice_targets, assignment.bob_targets

    def norm_of(vec: np.ndarray) -> float:
        return float(np.linalg.norm(vec))

    def anticomm(x: np.ndarray, z: np.ndarray, targets) -> float:
        return norm_of(apply_array(x @ z + z @ x, psi, n, targets))

    def difference(label: str) -> float:
        return norm_of(
            apply_array(assignment.alice[label], psi, n, at) - apply_array(assignment.bob[label], psi, n, bt)
        )

    return CommutationResiduals(
        anticomm(assignment.alice["X"], assignment.alice["Z"], at),
        anticomm(assignment.bob["X"], assignment.bob["Z"], bt),
        difference("X"),
        difference("Z"),
    )


def residual_bounds(chi: float) -> CommutationResiduals:
    """(2ε₁, 2ε₁ − 4ε₂, ε₂, ε₂)"""
    eps = epsilon_bounds(chi)
    return CommutationResiduals(2 * eps.eps1, 2 * eps.eps1 - 4 * eps.eps2, eps.eps2, eps.eps2)


# =============================================================================
# 스윕
# =============================================================================

def sweep_frame(results: Iterable[ExtractionResult]) -> pd.DataFrame:
    return pd.DataFrame([r.to_row() for r in results], columns=SWEEP_COLUMNS)
