# -*- coding: utf-8 -*-

"""
원통형 brickwork 그래프와 8분 각도(AngleOctant)

꼭짓점은 (row, col), 0부터 셉니다.
- 수평 간선: ((i, j), (i, j+1))
- 수직 간선: j ≡ 2 (mod 8) 열에서 행 (2k, 2k+1), j ≡ 6 (mod 8) 열에서 행 (2k+1, 2k+2)
  원통형이면 (n−1, 0) 도 j ≡ 6 열에서 연결
열 수는 w ≡ 1 (mod 4) 여야 하며 마지막(출력) 열에는 수직 간선이 없습니다.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

Vertex = tuple[int, int]
Edge = tuple[Vertex, Vertex]

OCTANTS = 8


class PatternError(ValueError):
    """그래프/패턴 구성 오류 (설정 오류이며 거절(Reject)이 아님)"""


@dataclass(frozen=True, order=True)
class AngleOctant:
    """각도 kπ/4, k 는 mod 8 로 정규화"""
    k: int

    def __post_init__(self):
        if int(self.k) != self.k:
            raise ValueError(f"8분 각도는 정수여야 합니다: {self.k}")
        object.__setattr__(self, "k", int(self.k) % OCTANTS)

    @property
    def radians(self) -> float:
        return self.k * math.pi / 4.0

    def __add__(self, other) -> "AngleOctant":
        return AngleOctant(self.k + int(other))

    __radd__ = __add__

    def __sub__(self, other) -> "AngleOctant":
        return AngleOctant(self.k - int(other))

    def __neg__(self) -> "AngleOctant":
        return AngleOctant(-self.k)

    def __int__(self) -> int:
        return self.k

    def __index__(self) -> int:
        return self.k

    def shifted_by_pi(self, bit: int) -> "AngleOctant":
        return AngleOctant(self.k + 4 * (bit & 1))

    def __str__(self) -> str:
        return f"{self.k}π/4"


def _edge(u: Vertex, v: Vertex) -> Edge:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class BrickworkGraph:
    rows: int
    cols: int
    cylindrical: bool
    edges: frozenset
    _adjacency: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        adjacency = {v: set() for v in self.vertices()}
        for u, v in self.edges:
            adjacency[u].add(v)
            adjacency[v].add(u)
        self._adjacency.update({v: frozenset(nbrs) for v, nbrs in adjacency.items()})

    @property
    def num_vertices(self) -> int:
        return self.rows * self.cols

    def vertices(self) -> list[Vertex]:
        """행 우선 순서"""
        return [(i, j) for i in range(self.rows) for j in range(self.cols)]

    def measurement_order(self) -> list[Vertex]:
        """열 우선 순서 (출력 열이 마지막)"""
        return [(i, j) for j in range(self.cols) for i in range(self.rows)]

    def column(self, j: int) -> list[Vertex]:
        return [(i, j) for i in range(self.rows)]

    def neighbours(self, v: Vertex) -> frozenset:
        return self._adjacency[v]

    def degree(self, v: Vertex) -> int:
        return len(self._adjacency[v])

    def vertical_partner(self, v: Vertex) -> Vertex | None:
        for u in self._adjacency[v]:
            if u[1] == v[1]:
                return u
        return None

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return _edge(u, v) in self.edges

    def edges_within(self, vertices) -> list[Edge]:
        keep = set(vertices)
        return sorted(e for e in self.edges if e[0] in keep and e[1] in keep)

    def output_column(self) -> int:
        return self.cols - 1

    def iter_edges(self) -> Iterator[Edge]:
        return iter(sorted(self.edges))


def colour(v: Vertex) -> int:
    """(i + j) mod 2"""
    return (v[0] + v[1]) % 2


def _vertical_pairs(rows: int, j: int, cylindrical: bool) -> list[tuple[int, int]]:
    if j % 8 == 2:
        return [(2 * k, 2 * k + 1) for k in range(rows // 2)]
    if j % 8 == 6:
        pairs = [(2 * k + 1, 2 * k + 2) for k in range(rows // 2 - 1)]
        if cylindrical:
            pairs.append((rows - 1, 0))
        return pairs
    return []


def build_brickwork(rows: int, cols: int, cylindrical: bool = True) -> BrickworkGraph:
    """
    brickwork 그래프 생성

    Raises:
        PatternError: 행이 홀수이거나 4 미만, 열이 w ≡ 1 (mod 8) 을 만족하지 않음

    w ≡ 1 (mod 8) 이면 세로 간선 두 종류(j ≡ 2, 6 mod 8)가 벽돌마다 완결되고
    마지막 출력 열에는 세로 간선이 없습니다.
    """
    if rows < 4 or rows % 2:
        raise PatternError(f"행 수는 4 이상의 짝수여야 합니다: {rows}")
    if cols < 1 or cols % 8 != 1:
        raise PatternError(f"열 수는 w ≡ 1 (mod 8) 이어야 합니다 (1, 9, 17, ...): {cols}")

    edges = set()
    for i in range(rows):
        for j in range(cols - 1):
            edges.add(_edge((i, j), (i, j + 1)))
    for j in range(cols - 1):
        for a, b in _vertical_pairs(rows, j, cylindrical):
            edges.add(_edge((a, j), (b, j)))
    return BrickworkGraph(rows, cols, cylindrical, frozenset(edges))


def build_cylindrical_brickwork(rows: int, cols: int) -> BrickworkGraph:
    return build_brickwork(rows, cols, cylindrical=True)
