# -*- coding: utf-8 -*-

"""
자가검증(self-testing) 측정 설정 14종과 이상적 상관값

- Alice 관측량: X, Y, Z, D, E+, E-, F
    D = (X+Z)/√2, E± = (±X+Y)/√2, F = (Y+Z)/√2
- Bob 관측량: X, Y, Z (Bob 쪽 Y 는 −Y 로 사용)
- 허용 조합 14개: XX XY XZ YY YZ ZZ DX DZ E+X E+Y E-X E-Y FY FZ
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from qstate import PAULI_X, PAULI_Y, PAULI_Z, SQRT_HALF, Operator


class Side(str, Enum):
    ALICE = "alice"
    BOB = "bob"


ALICE_AXES = ("X", "Y", "Z", "D", "E+", "E-", "F")
BOB_AXES = ("X", "Y", "Z")

# (x, y, z) 계수: 관측량 = x·X + y·Y + z·Z
_ALICE_COEFFS = {
    "X": (1.0, 0.0, 0.0),
    "Y": (0.0, 1.0, 0.0),
    "Z": (0.0, 0.0, 1.0),
    "D": (SQRT_HALF, 0.0, SQRT_HALF),
    "E+": (SQRT_HALF, SQRT_HALF, 0.0),
    "E-": (-SQRT_HALF, SQRT_HALF, 0.0),
    "F": (0.0, SQRT_HALF, SQRT_HALF),
}
_BOB_COEFFS = {
    "X": (1.0, 0.0, 0.0),
    "Y": (0.0, -1.0, 0.0),
    "Z": (0.0, 0.0, 1.0),
}

ADMISSIBLE = (
    ("X", "X"), ("X", "Y"), ("X", "Z"), ("Y", "Y"), ("Y", "Z"), ("Z", "Z"),
    ("D", "X"), ("D", "Z"), ("E+", "X"), ("E+", "Y"), ("E-", "X"), ("E-", "Y"),
    ("F", "Y"), ("F", "Z"),
)

# ⟨φ⁺| α ⊗ β |φ⁺⟩ (Bob Y = −Y 규약)
_IDEAL = {
    ("X", "X"): 1.0, ("Y", "Y"): 1.0, ("Z", "Z"): 1.0,
    ("X", "Y"): 0.0, ("X", "Z"): 0.0, ("Y", "Z"): 0.0,
    ("D", "X"): SQRT_HALF, ("D", "Z"): SQRT_HALF,
    ("E+", "X"): SQRT_HALF, ("E+", "Y"): SQRT_HALF,
    ("E-", "X"): -SQRT_HALF, ("E-", "Y"): SQRT_HALF,
    ("F", "Y"): SQRT_HALF, ("F", "Z"): SQRT_HALF,
}


@dataclass(frozen=True, order=True)
class MeasurementSetting:
    alpha: str
    beta: str

    def __post_init__(self):
        if (self.alpha, self.beta) not in ADMISSIBLE:
            raise ValueError(f"허용되지 않는 측정 설정: {self.alpha}{self.beta}")

    @property
    def name(self) -> str:
        return f"{self.alpha}{self.beta}"

    @classmethod
    def parse(cls, name: str) -> "MeasurementSetting":
        """'E+X' → MeasurementSetting('E+', 'X')"""
        return cls(name[:-1], name[-1])

    def __str__(self) -> str:
        return self.name


SETTINGS: tuple[MeasurementSetting, ...] = tuple(MeasurementSetting(a, b) for a, b in ADMISSIBLE)


def pauli_combination(x: float, y: float, z: float) -> np.ndarray:
    return x * PAULI_X + y * PAULI_Y + z * PAULI_Z


def observable_matrix(label: str, side: Side | str) -> Operator:
    """
    측정 라벨 → 2×2 관측량 (Hermitian, 유니터리, 고유값 ±1)

    Bob 은 X, Y, Z 만 허용되며 Bob 의 Y 는 −Y 를 돌려줍니다.
    """
    side = Side(side)
    table = _ALICE_COEFFS if side is Side.ALICE else _BOB_COEFFS
    if label not in table:
        raise ValueError(f"{side.value} 쪽에서 쓸 수 없는 관측량: {label!r}")
    return Operator(pauli_combination(*table[label]), f"{label}_{side.value[0].upper()}")


def ideal_correlation(setting: MeasurementSetting) -> float:
    """μ^{αβ} ∈ {1, 1/√2, 0, −1/√2}"""
    if not isinstance(setting, MeasurementSetting):
        setting = MeasurementSetting.parse(str(setting))
    return _IDEAL[(setting.alpha, setting.beta)]


def is_one_sided(setting: MeasurementSetting) -> bool:
    """|μ| = 1 인 설정 (XX, YY, ZZ): 한쪽 방향 편차만 가능"""
    return abs(abs(ideal_correlation(setting)) - 1.0) < 1e-12
