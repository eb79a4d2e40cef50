# -*- coding: utf-8 -*-

"""
trap/dummy 배치 (tape 방식과 단일 trap 방식)

tape 방식:
1️⃣ 연속된 행 집합 R (|R| = max(1, round(2Δn)), 시작 행은 n 개 중 균등)
2️⃣ 색 C ∈ {0, 1} 균등 선택, R 안의 색 C 꼭짓점이 trap
3️⃣ R 의 나머지 꼭짓점과 R 바로 위/아래 행 전체가 dummy
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from mbqc.brickwork import BrickworkGraph, PatternError, Vertex, colour

logger = logging.getLogger(__name__)


class Role(str, Enum):
    COMPUTATION = "computation"
    TRAP = "trap"
    DUMMY = "dummy"


@dataclass(frozen=True)
class TapeAssignment:
    rows: tuple[int, ...]       # R
    traps: frozenset
    dummies: frozenset
    colour: int

    def __post_init__(self):
        if self.traps & self.dummies:
            raise PatternError("trap 과 dummy 가 겹칩니다")

    def role(self, v: Vertex) -> Role:
        if v in self.traps:
            return Role.TRAP
        if v in self.dummies:
            return Role.DUMMY
        return Role.COMPUTATION

    def roles(self, graph: BrickworkGraph) -> dict:
        return {v: self.role(v) for v in graph.vertices()}

    def computation_vertices(self, graph: BrickworkGraph) -> list[Vertex]:
        return [v for v in graph.vertices() if self.role(v) is Role.COMPUTATION]

    def computation_rows(self, graph: BrickworkGraph) -> list[int]:
        return sorted({v[0] for v in self.computation_vertices(graph)})


def tape_size(rows: int, delta_frac: float) -> int:
    """round(2Δn), 동점은 올림, 최소 1"""
    return max(1, int(math.floor(2.0 * delta_frac * rows + 0.5)))


def choose_tape(graph: BrickworkGraph, delta_frac: float, rng: np.random.Generator) -> TapeAssignment:
    """
    Raises:
        PatternError: Δ 범위 밖, 또는 |R| + 2 > n
    """
    if not 0.0 < delta_frac < 0.5:
        raise PatternError(f"delta_frac 는 (0, 1/2) 범위여야 합니다: {delta_frac}")
    n = graph.rows
    size = tape_size(n, delta_frac)
    if size + 2 > n:
        raise PatternError(f"|R|={size} 와 dummy 두 행이 {n}행에 들어가지 않습니다")

    start = int(rng.integers(n))
    chosen = int(rng.integers(2))
    tape_rows = tuple((start + k) % n for k in range(size))
    border_rows = ((start - 1) % n, (start + size) % n)

    traps, dummies = set(), set()
    for v in graph.vertices():
        if v[0] in tape_rows:
            (traps if colour(v) == chosen else dummies).add(v)
        elif v[0] in border_rows:
            dummies.add(v)
    tape = TapeAssignment(tape_rows, frozenset(traps), frozenset(dummies), chosen)
    logger.debug("tape R=%s C=%d: trap %d개, dummy %d개", tape_rows, chosen, len(traps), len(dummies))
    return tape


def choose_single_trap(graph: BrickworkGraph, rng: np.random.Generator) -> TapeAssignment:
    """
    trap 하나를 균등하게 고르고, 그 행의 나머지와 수직 간선으로 이어진 행을 dummy 로 둠
    """
    vertices = graph.vertices()
    trap = vertices[int(rng.integers(len(vertices)))]
    dummy_rows = {trap[0]}
    partner = graph.vertical_partner(trap)
    if partner is not None:
        dummy_rows.add(partner[0])
    dummies = {v for v in vertices if v[0] in dummy_rows and v != trap}
    return TapeAssignment((trap[0],), frozenset({trap}), frozenset(dummies), colour(trap))
