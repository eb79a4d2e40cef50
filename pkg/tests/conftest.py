from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from mbqc import build_brickwork, build_pattern, choose_tape, computation_angles
from selftest import SecurityParams

ROOT = Path(__file__).resolve().parents[1]
SETTINGS_PATH = ROOT / "config" / "settings.yaml"


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def settings_path() -> Path:
    return SETTINGS_PATH


@pytest.fixture
def desk_params() -> SecurityParams:
    """4×9 brickwork (m=36) 에서 정직한 1단계가 수락되는 작은 파라미터"""
    return SecurityParams(p=0.5, epsilon=0.5, delta_frac=0.25, c=1, m=36, n_tilde=89)


@pytest.fixture
def graph():
    return build_brickwork(4, 9)


def make_pattern(graph, rng, delta_frac=0.25, computation="identity"):
    tape = choose_tape(graph, delta_frac, rng)
    return build_pattern(graph, tape, rng, computation_angles(graph, computation, rng))


@pytest.fixture
def pattern(graph, rng):
    return make_pattern(graph, rng)


@pytest.fixture
def computing_pattern(graph, rng):
    """Δ = 0.125: 계산 행 하나, 출력 꼭짓점 하나"""
    return make_pattern(graph, rng, delta_frac=0.125)
