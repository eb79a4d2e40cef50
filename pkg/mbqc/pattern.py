# -*- coding: utf-8 -*-

"""
블라인드 측정 패턴(BrickworkPattern)과 각도 함수 C_G

주요 기능:
1️⃣ build_pattern: tape 배치 위에 φ, θ, r, d, x 와 흐름(flow) 의존 집합을 채움
2️⃣ with_prepared_labels: 1단계 원격 준비가 정한 θ(Bob 쪽 각도)와 dummy 비트로 교체
3️⃣ compute_delta:
   - 계산 큐비트: δ = (−1)^{s^X}φ + θ + (s^Z ⊕ r ⊕ x)π
   - trap:        δ = θ + (r ⊕ x)π
   - dummy:       δ 균등 난수

흐름 f(i) 는 오른쪽 이웃이며, 의존 집합은 계산 부분그래프에서만 계산합니다.
  S^X_(r,c) = {(r, c−1)}
  S^Z_(r,c) = {(r, c−2)} ∪ {(r', c−1) : (r', c) 가 (r, c) 의 수직 이웃}
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from mbqc.brickwork import OCTANTS, AngleOctant, BrickworkGraph, PatternError, Vertex, build_brickwork, colour
from mbqc.tape import Role, TapeAssignment

logger = logging.getLogger(__name__)

COMPUTATIONS = ("identity", "random")


@dataclass(frozen=True)
class VertexSpec:
    """꼭짓점별 Alice 비밀 (각도는 8분 정수)"""
    role: Role
    phi: int = 0
    theta: int = 0
    r: int = 0
    d: int = 0
    x: int = 0


@dataclass(frozen=True, eq=False)
class BrickworkPattern:
    graph: BrickworkGraph
    tape: TapeAssignment
    specs: dict
    s_x: dict
    s_z: dict

    def spec(self, v: Vertex) -> VertexSpec:
        return self.specs[v]

    def role(self, v: Vertex) -> Role:
        return self.specs[v].role

    @property
    def order(self) -> list[Vertex]:
        return self.graph.measurement_order()

    def vertices_with(self, role: Role) -> list[Vertex]:
        return [v for v in self.graph.vertices() if self.specs[v].role is role]

    @property
    def traps(self) -> list[Vertex]:
        return self.vertices_with(Role.TRAP)

    @property
    def dummies(self) -> list[Vertex]:
        return self.vertices_with(Role.DUMMY)

    @property
    def computation(self) -> list[Vertex]:
        return self.vertices_with(Role.COMPUTATION)

    @property
    def output_vertices(self) -> list[Vertex]:
        last = self.graph.output_column()
        return [v for v in self.computation if v[1] == last]

    def is_output(self, v: Vertex) -> bool:
        return v[1] == self.graph.output_column() and self.specs[v].role is Role.COMPUTATION

    def to_dict(self, seed: int | None = None) -> dict:
        """패턴 파일 (그래프 크기, 역할, φ), θ·r·d 는 싣지 않음"""
        return {
            "rows": self.graph.rows,
            "cols": self.graph.cols,
            "cylindrical": self.graph.cylindrical,
            "roles": [self.specs[v].role.value for v in self.graph.vertices()],
            "phi": [self.specs[v].phi for v in self.graph.vertices()],
            "seed": seed,
        }

    def to_json(self, seed: int | None = None) -> str:
        return json.dumps(self.to_dict(seed), ensure_ascii=False)


# =============================================================================
# 흐름 의존 집합
# =============================================================================

def dependency_sets(graph: BrickworkGraph, roles: Mapping[Vertex, Role]) -> tuple[dict, dict]:
    def computing(v: Vertex) -> bool:
        return roles[v] is Role.COMPUTATION

    s_x, s_z = {}, {}
    for v in graph.vertices():
        row, col = v
        xs, zs = set(), set()
        if computing(v):
            if col >= 1:
                xs.add((row, col - 1))
            if col >= 2:
                zs.add((row, col - 2))
            partner = graph.vertical_partner(v)
            if col >= 1 and partner is not None and computing(partner):
                zs.add((partner[0], col - 1))
        s_x[v] = frozenset(xs)
        s_z[v] = frozenset(zs)
    return s_x, s_z


def _dummy_parity(graph: BrickworkGraph, v: Vertex, roles: Mapping[Vertex, Role], bits: Mapping[Vertex, int]) -> int:
    parity = 0
    for u in graph.neighbours(v):
        if roles[u] is Role.DUMMY:
            parity ^= bits.get(u, 0) & 1
    return parity


def _fill_compensation(graph: BrickworkGraph, specs: dict) -> dict:
    roles = {v: s.role for v, s in specs.items()}
    bits = {v: s.d for v, s in specs.items() if s.role is Role.DUMMY}
    out = {}
    for v, s in specs.items():
        x = 0 if s.role is Role.DUMMY else _dummy_parity(graph, v, roles, bits)
        out[v] = replace(s, x=x)
    return out


# =============================================================================
# 패턴 생성
# =============================================================================

def computation_angles(graph: BrickworkGraph, computation: str, rng: np.random.Generator | None = None) -> dict:
    """
    이름이 붙은 계산의 φ (꼭짓점 → 8분 정수)

    identity: 모두 0, random: 균등 8분 각도
    """
    if computation == "identity":
        return {v: 0 for v in graph.vertices()}
    if computation == "random":
        if rng is None:
            raise PatternError("random 계산에는 rng 가 필요합니다")
        return {v: int(rng.integers(OCTANTS)) for v in graph.vertices()}
    raise PatternError(f"알 수 없는 계산: {computation!r} (가능: {', '.join(COMPUTATIONS)})")


def build_pattern(
    graph: BrickworkGraph,
    tape: TapeAssignment,
    rng: np.random.Generator,
    phi: Mapping[Vertex, int] | None = None,
) -> BrickworkPattern:
    """
    Alice 의 비밀 θ, r (계산/trap), d (dummy) 를 rng 로 뽑아 패턴 구성

    trap/dummy 의 φ 는 0 으로 둡니다.
    """
    phi = phi or {}
    specs = {}
    for v in graph.vertices():
        role = tape.role(v)
        theta = int(rng.integers(OCTANTS))
        r = int(rng.integers(2))
        d = int(rng.integers(2)) if role is Role.DUMMY else 0
        angle = int(phi.get(v, 0)) % OCTANTS if role is Role.COMPUTATION else 0
        if role is Role.DUMMY:
            theta, r = 0, 0
        specs[v] = VertexSpec(role, phi=angle, theta=theta, r=r, d=d)
    specs = _fill_compensation(graph, specs)
    s_x, s_z = dependency_sets(graph, {v: s.role for v, s in specs.items()})
    pattern = BrickworkPattern(graph, tape, specs, s_x, s_z)
    logger.debug(
        "pattern %dx%d: 계산 %d, trap %d, dummy %d",
        graph.rows, graph.cols, len(pattern.computation), len(pattern.traps), len(pattern.dummies),
    )
    return pattern


def with_prepared_labels(
    pattern: BrickworkPattern,
    thetas: Mapping[Vertex, int],
    dummy_bits: Mapping[Vertex, int],
) -> BrickworkPattern:
    """원격 준비 결과(θ: Bob 쪽 각도, d: dummy 비트)로 패턴을 갱신하고 x 를 다시 계산"""
    specs = {}
    for v, s in pattern.specs.items():
        if s.role is Role.DUMMY:
            if v not in dummy_bits:
                raise PatternError(f"dummy {v} 의 준비 비트가 없습니다")
            specs[v] = replace(s, d=int(dummy_bits[v]) & 1)
        else:
            if v not in thetas:
                raise PatternError(f"{v} 의 준비 각도가 없습니다")
            specs[v] = replace(s, theta=int(thetas[v]) % OCTANTS)
    specs = _fill_compensation(pattern.graph, specs)
    return replace(pattern, specs=specs)


def pattern_from_dict(data: Mapping, rng: np.random.Generator) -> BrickworkPattern:
    """to_dict 로 저장한 패턴 파일을 다시 구성 (θ, r, d 는 rng 로 새로 뽑음)"""
    graph = build_brickwork(int(data["rows"]), int(data["cols"]), bool(data.get("cylindrical", True)))
    roles = [Role(x) for x in data["roles"]]
    vertices = graph.vertices()
    if len(roles) != len(vertices):
        raise PatternError(f"역할 {len(roles)}개, 꼭짓점 {len(vertices)}개")
    traps = frozenset(v for v, role in zip(vertices, roles) if role is Role.TRAP)
    dummies = frozenset(v for v, role in zip(vertices, roles) if role is Role.DUMMY)
    tape_rows = tuple(sorted({v[0] for v in traps}))
    trap_colour = colour(next(iter(traps))) if traps else 0
    tape = TapeAssignment(tape_rows, traps, dummies, trap_colour)
    phi = dict(zip(vertices, (int(x) for x in data.get("phi", [0] * len(vertices)))))
    return build_pattern(graph, tape, rng, phi)


# =============================================================================
# 각도 함수
# =============================================================================

def _parity(results: Mapping[Vertex, int], vertices, target: Vertex) -> int:
    parity = 0
    for u in vertices:
        if u not in results:
            raise PatternError(f"{target} 의 의존 꼭짓점 {u} 가 아직 측정되지 않았습니다")
        parity ^= results[u] & 1
    return parity


def compute_delta(
    v: Vertex,
    pattern: BrickworkPattern,
    results: Mapping[Vertex, int],
    rng: np.random.Generator | None = None,
) -> AngleOctant:
    """
    꼭짓점 v 의 측정 각도 δ

    Args:
        results: 지금까지 Alice 가 기록한 s_i = b_i ⊕ r_i
        rng: dummy 각도를 뽑을 Alice 난수 (dummy 에만 필요)
    """
    s = pattern.spec(v)
    if s.role is Role.DUMMY:
        if rng is None:
            raise PatternError(f"dummy {v} 의 δ 에는 rng 가 필요합니다")
        return AngleOctant(int(rng.integers(OCTANTS)))
    if s.role is Role.TRAP:
        return AngleOctant(s.theta).shifted_by_pi(s.r ^ s.x)
    sx = _parity(results, pattern.s_x[v], v)
    sz = _parity(results, pattern.s_z[v], v)
    signed_phi = -s.phi if sx else s.phi
    return AngleOctant(signed_phi + s.theta).shifted_by_pi(sz ^ s.r ^ s.x)
