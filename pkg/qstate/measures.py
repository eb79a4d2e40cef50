# -*- coding: utf-8 -*-

"""
거리/충실도 척도

- vector_distance: ‖|a⟩ − |b⟩‖₂
- fidelity: ⟨a|ρ|a⟩ (순수 상태 대 밀도행렬)
- trace_distance: ‖ρ − σ‖_tr (정규화하지 않은 규약, 최대값 2)
"""

from __future__ import annotations

from typing import Union

import numpy as np

from qstate.state import DensityMatrix, QStateError, StateVector


def _density(item: Union[StateVector, DensityMatrix]) -> DensityMatrix:
    if isinstance(item, StateVector):
        return item.density()
    if isinstance(item, DensityMatrix):
        return item
    raise QStateError(f"밀도행렬이 아닙니다: {type(item).__name__}")


def vector_distance(a: StateVector, b: StateVector) -> float:
    if a.dim != b.dim:
        raise QStateError(f"차원 불일치: {a.dim} vs {b.dim}")
    return float(np.linalg.norm(a.amplitudes - b.amplitudes))


def fidelity(a: StateVector, b: Union[StateVector, DensityMatrix]) -> float:
    """F = ⟨a|ρ|a⟩, [0, 1] 로 자름"""
    rho = _density(b)
    if rho.matrix.shape[0] != a.dim:
        raise QStateError(f"차원 불일치: {a.dim} vs {rho.matrix.shape[0]}")
    value = np.vdot(a.amplitudes, rho.matrix @ a.amplitudes).real
    return float(np.clip(value, 0.0, 1.0))


def trace_distance(rho: Union[StateVector, DensityMatrix], sigma: Union[StateVector, DensityMatrix]) -> float:
    """‖ρ − σ‖_tr = Σ|λ_i| (½ 을 곱하지 않음)"""
    r, s = _density(rho), _density(sigma)
    if r.matrix.shape != s.matrix.shape:
        raise QStateError(f"차원 불일치: {r.matrix.shape} vs {s.matrix.shape}")
    eigenvalues = np.linalg.eigvalsh(r.matrix - s.matrix)
    return float(np.sum(np.abs(eigenvalues)))
