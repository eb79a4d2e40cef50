import itertools
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import make_pattern
from mbqc import (
    AngleOctant,
    BrickworkRegister,
    FrontierOverflow,
    HonestBrickworkProver,
    MessageKind,
    PatternError,
    ProtocolViolation,
    Role,
    TapeAssignment,
    Transcript,
    branch_probability,
    build_brickwork,
    build_pattern,
    choose_single_trap,
    choose_tape,
    compute_delta,
    computation_angles,
    corrected_output,
    dependency_sets,
    fidelity_floor,
    ideal_inputs,
    input_trace_bound,
    is_correct_output,
    linear_fidelity_floor,
    p_error_bound,
    pattern_from_dict,
    plain_output_distribution,
    streaming_execute,
    tape_size,
    trace_bound_from_fidelity,
    verify_traps,
)
from mbqc.execute import vertex_label
from qstate import CZ, StateVector, apply, fidelity, partial_trace, plus_state, tensor
from selftest import SecurityParams, bound_report


def honest_run(pattern, seed=0):
    rng = np.random.default_rng(seed)
    bob = HonestBrickworkProver(pattern.graph, ideal_inputs(pattern), rng)
    transcript = streaming_execute(pattern, bob, np.random.default_rng(seed + 1))
    return bob, transcript


class ScriptedOutcomes:
    """projective_measure 가 소비하는 random() 만 대신함: 비트 0 → 0.0 (+1 고유값), 비트 1 → 1.0 (−1)"""

    def __init__(self, bits):
        self._values = iter([0.0 if b == 0 else 1.0 for b in bits])

    def random(self):
        return next(self._values)


def branch_deltas(pattern, bits, rng):
    results, deltas = {}, {}
    for v in pattern.order:
        deltas[v] = compute_delta(v, pattern, results, rng).k
        results[v] = bits[v] ^ pattern.spec(v).r
    return deltas


def neighbourhood_state(pattern, centre):
    """centre 와 두 단계 이웃까지의 준비 큐비트에 영역 안 간선의 CZ 를 모두 적용한 상태벡터"""
    graph = pattern.graph
    region = {centre} | set(graph.neighbours(centre))
    for u in list(region):
        region |= set(graph.neighbours(u))
    region = sorted(region)
    inputs = ideal_inputs(pattern)
    state = tensor(*(StateVector.from_amplitudes(inputs[v], (vertex_label(v),)) for v in region))
    for u, v in graph.edges_within(region):
        state = apply(CZ, state, [vertex_label(u), vertex_label(v)])
    return state


class TestBrickwork:
    def test_edges_of_4x9(self, graph):
        assert graph.num_vertices == 36
        assert len(graph.edges) == 36
        assert graph.has_edge((0, 2), (1, 2))
        assert graph.has_edge((2, 2), (3, 2))
        assert graph.has_edge((1, 6), (2, 6))
        assert graph.has_edge((3, 6), (0, 6))
        assert not graph.has_edge((1, 2), (2, 2))

    def test_open_boundary_drops_wraparound(self):
        graph = build_brickwork(4, 9, cylindrical=False)
        assert len(graph.edges) == 35
        assert not graph.has_edge((3, 6), (0, 6))

    @pytest.mark.parametrize("rows,cols", [(3, 9), (2, 9), (4, 8), (4, 7), (4, 5), (4, 13)])
    def test_invalid_shapes(self, rows, cols):
        with pytest.raises(PatternError):
            build_brickwork(rows, cols)

    def test_seventeen_columns_repeat_the_brick(self):
        graph = build_brickwork(4, 17)
        assert len(graph.edges) == 4 * 16 + 8
        assert graph.has_edge((0, 10), (1, 10))
        assert graph.has_edge((3, 14), (0, 14))

    def test_output_column_has_no_vertical_edges(self, graph):
        assert all(graph.vertical_partner(v) is None for v in graph.column(8))

    def test_measurement_order_is_column_major(self, graph):
        order = graph.measurement_order()
        assert order[:4] == [(0, 0), (1, 0), (2, 0), (3, 0)]
        assert order[-1] == (3, 8)

    def test_angle_octant(self):
        assert AngleOctant(9).k == 1
        assert AngleOctant(-1).k == 7
        assert AngleOctant(3).shifted_by_pi(1).k == 7
        assert AngleOctant(2).radians == pytest.approx(math.pi / 2)
        with pytest.raises(ValueError):
            AngleOctant(1.5)


class TestTape:
    def test_tape_size(self):
        assert tape_size(4, 0.25) == 2
        assert tape_size(4, 0.125) == 1
        assert tape_size(4, 0.01) == 1

    def test_tape_must_fit_with_border_rows(self, graph, rng):
        with pytest.raises(PatternError):
            choose_tape(graph, 0.4, rng)

    def test_traps_are_isolated(self, graph):
        for seed in range(20):
            tape = choose_tape(graph, 0.25, np.random.default_rng(seed))
            assert len(tape.traps) == 9
            for t in tape.traps:
                assert all(tape.role(u) is Role.DUMMY for u in graph.neighbours(t))
            assert tape.computation_rows(graph) == []

    def test_small_delta_leaves_one_computation_row(self, graph, rng):
        tape = choose_tape(graph, 0.125, rng)
        assert len(tape.computation_rows(graph)) == 1
        assert len(tape.computation_vertices(graph)) == 9

    def test_single_trap(self, graph):
        for seed in range(20):
            tape = choose_single_trap(graph, np.random.default_rng(seed))
            (trap,) = tape.traps
            assert all(tape.role(u) is Role.DUMMY for u in graph.neighbours(trap))

    def test_overlap_rejected(self):
        with pytest.raises(PatternError):
            TapeAssignment((0,), frozenset({(0, 0)}), frozenset({(0, 0)}), 0)


class TestPattern:
    def test_dependency_sets_on_full_computation(self, graph):
        roles = {v: Role.COMPUTATION for v in graph.vertices()}
        s_x, s_z = dependency_sets(graph, roles)
        assert s_x[(0, 3)] == {(0, 2)}
        assert s_z[(0, 3)] == {(0, 1)}
        assert s_z[(0, 2)] == {(0, 0), (1, 1)}
        assert s_x[(0, 0)] == frozenset()

    def test_dependencies_ignore_non_computation(self, pattern):
        for v in pattern.traps + pattern.dummies:
            assert not pattern.s_x[v] and not pattern.s_z[v]

    def test_dummy_secrets(self, pattern):
        for v in pattern.dummies:
            spec = pattern.spec(v)
            assert spec.theta == 0 and spec.r == 0 and spec.x == 0

    def test_trap_delta(self, pattern):
        for t in pattern.traps:
            s = pattern.spec(t)
            assert compute_delta(t, pattern, {}).k == (s.theta + 4 * (s.r ^ s.x)) % 8

    def test_dummy_delta_needs_rng(self, pattern):
        with pytest.raises(PatternError):
            compute_delta(pattern.dummies[0], pattern, {})

    def test_missing_dependency(self, computing_pattern):
        later = [v for v in computing_pattern.computation if v[1] == 3][0]
        with pytest.raises(PatternError):
            compute_delta(later, computing_pattern, {})

    def test_unknown_computation(self, graph):
        with pytest.raises(PatternError):
            computation_angles(graph, "shor")

    def test_round_trip_keeps_roles_and_phi(self, graph, rng):
        pattern = make_pattern(graph, rng, computation="random")
        restored = pattern_from_dict(pattern.to_dict(seed=3), np.random.default_rng(1))
        for v in graph.vertices():
            assert restored.role(v) is pattern.role(v)
            assert restored.spec(v).phi == pattern.spec(v).phi


class TestStreaming:
    def test_honest_execution_passes_traps(self, pattern):
        for seed in range(5):
            _, transcript = honest_run(pattern, seed)
            assert verify_traps(transcript, pattern).accepted

    def test_branch_probability_matches_oracle(self, computing_pattern):
        bob, transcript = honest_run(computing_pattern, 3)
        deltas = {tuple(m.payload["vertex"]): m.payload["delta"] for m in transcript.of_kind(MessageKind.ANGLE_INSTRUCTION)}
        bits = transcript.results_by_vertex()
        assert branch_probability(computing_pattern, deltas, bits) == pytest.approx(bob.branch_probability, rel=1e-9)

    def test_every_branch_matches_oracle(self, computing_pattern):
        pattern = computing_pattern
        free = pattern.computation
        fixed = {t: pattern.spec(t).r for t in pattern.traps}
        fixed.update({d: 0 for d in pattern.dummies})
        weight = 2 ** len(pattern.dummies)
        rng = np.random.default_rng(41)
        total, reachable = 0.0, 0
        for choice in itertools.product((0, 1), repeat=len(free)):
            bits = {**fixed, **dict(zip(free, choice))}
            p = branch_probability(pattern, branch_deltas(pattern, bits, rng), bits)
            total += weight * p
            if weight * p < 1e-12:
                continue
            reachable += 1
            bob = HonestBrickworkProver(pattern.graph, ideal_inputs(pattern), ScriptedOutcomes(bits[v] for v in pattern.order))
            transcript = streaming_execute(pattern, bob, rng)
            assert transcript.results_by_vertex() == bits
            assert_allclose(weight * bob.branch_probability, weight * p, rtol=0, atol=1e-10)
        assert_allclose(total, 1.0, rtol=0, atol=1e-10)
        # identity: 출력 비트만 결정적, 나머지 계산 결과는 각각 ½
        assert reachable == 2 ** (len(free) - len(pattern.output_vertices))

    def test_identity_output(self, computing_pattern):
        assert plain_output_distribution(computing_pattern) == {(0,): pytest.approx(1.0)}
        for seed in range(3):
            _, transcript = honest_run(computing_pattern, seed)
            output = corrected_output(transcript, computing_pattern)
            assert output == (0,)
            assert is_correct_output(computing_pattern, output)

    def test_vacuous_output_at_quarter_delta(self, pattern):
        assert plain_output_distribution(pattern) == {(): 1.0}

    def test_register_stays_within_frontier(self, pattern):
        bob, _ = honest_run(pattern)
        assert bob.register.peak_live <= 2 * pattern.graph.rows + 2

    def test_frontier_overflow(self, pattern, rng):
        register = BrickworkRegister(pattern.graph, ideal_inputs(pattern), max_live=3)
        with pytest.raises(FrontierOverflow):
            register.measure((0, 0), AngleOctant(0), rng)

    def test_double_measurement(self, pattern, rng):
        register = BrickworkRegister(pattern.graph, ideal_inputs(pattern))
        register.measure((0, 0), AngleOctant(0), rng)
        with pytest.raises(ProtocolViolation):
            register.measure((0, 0), AngleOctant(0), rng)

    def test_flipped_trap_is_named(self, pattern):
        _, transcript = honest_run(pattern)
        t = pattern.traps[0]
        forged = Transcript()
        for m in transcript.messages:
            payload = dict(m.fields)
            if m.kind is MessageKind.RESULT_REPORT and tuple(payload["vertex"]) == t:
                payload["bit"] ^= 1
            forged.record(m.kind, m.round, m.direction, **payload)
        verdict = verify_traps(forged, pattern)
        assert not verdict
        assert verdict.reason == "trap_failed"
        assert str(t) in verdict.detail

    def test_verify_needs_traps(self, graph, rng):
        tape = TapeAssignment((), frozenset(), frozenset(), 0)
        pattern = build_pattern(graph, tape, rng)
        with pytest.raises(PatternError):
            verify_traps(Transcript(), pattern)

    def test_missing_trap_report(self, pattern):
        with pytest.raises(ProtocolViolation):
            verify_traps(Transcript(), pattern)


class TestTrapIsolation:
    @pytest.mark.parametrize("delta_frac", [0.25, 0.125])
    def test_trap_reduces_to_compensated_plus_state(self, graph, delta_frac):
        rng = np.random.default_rng(23)
        for _ in range(3):
            pattern = make_pattern(graph, rng, delta_frac=delta_frac, computation="random")
            assert any(pattern.spec(d).d for d in pattern.dummies)
            for t in pattern.traps:
                s = pattern.spec(t)
                reduced = partial_trace(neighbourhood_state(pattern, t), [vertex_label(t)])
                assert_allclose(np.trace(reduced.matrix @ reduced.matrix).real, 1.0, atol=1e-10)
                expected = plus_state(AngleOctant(s.theta).shifted_by_pi(s.x).radians)
                assert_allclose(fidelity(expected, reduced), 1.0, atol=1e-10)

    def test_trap_angle_gives_reported_bit(self, pattern):
        for t in pattern.traps:
            s = pattern.spec(t)
            reduced = partial_trace(neighbourhood_state(pattern, t), [vertex_label(t)])
            delta = compute_delta(t, pattern, {})
            # b = r 인 고유상태 |±_δ⟩
            eigenstate = plus_state(delta.shifted_by_pi(s.r).radians)
            assert_allclose(fidelity(eigenstate, reduced), 1.0, atol=1e-10)


class TestTranscript:
    def test_phase_order(self):
        t = Transcript()
        t.record(MessageKind.ANGLE_INSTRUCTION, 0, "alice->bob", vertex=(0, 0), delta=1)
        with pytest.raises(ProtocolViolation):
            t.record(MessageKind.REQUEST_PAIR, 1, "alice->bob")

    def test_rounds_do_not_decrease_per_direction(self):
        t = Transcript()
        t.record(MessageKind.REQUEST_PAIR, 3, "alice->bob")
        t.record(MessageKind.PAIR_DELIVERED, 3, "bob->alice")
        with pytest.raises(ProtocolViolation):
            t.record(MessageKind.MEASURE_INSTRUCTION, 2, "alice->bob", basis="X")

    def test_duplicate_message(self):
        t = Transcript()
        t.record(MessageKind.REQUEST_PAIR, 0, "alice->bob")
        with pytest.raises(ProtocolViolation):
            t.record(MessageKind.REQUEST_PAIR, 0, "alice->bob")

    def test_closed_transcript_is_final(self):
        t = Transcript()
        t.close(False, 0, "trap_failed")
        assert t.verdict == "reject"
        with pytest.raises(ProtocolViolation):
            t.record(MessageKind.REQUEST_PAIR, 1, "alice->bob")

    def test_jsonl_round_trip(self, pattern):
        _, transcript = honest_run(pattern)
        transcript.close(True, transcript.next_round())
        restored = Transcript.from_jsonl(transcript.to_jsonl())
        assert restored.digest() == transcript.digest()
        assert restored.verdict == "accept"
        assert restored.results_by_vertex() == transcript.results_by_vertex()

    def test_write_jsonl(self, tmp_path, pattern):
        _, transcript = honest_run(pattern)
        path = transcript.write_jsonl(tmp_path / "t" / "transcript.jsonl")
        lines = path.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 2 * 36
        assert '"type": "angle_instruction"' in lines[0]


class TestErrorBounds:
    def test_fidelity_floor_example(self):
        assert fidelity_floor(0.1, 4) == pytest.approx(0.995 ** 8)
        assert fidelity_floor(0.1, 4) >= linear_fidelity_floor(0.1, 4)

    def test_fidelity_chain(self):
        for eps in np.linspace(0.0, 1.0, 21):
            for m in (1, 2, 8, 36, 64):
                floor = fidelity_floor(eps, m)
                assert floor >= linear_fidelity_floor(eps, m) - 1e-12
                assert trace_bound_from_fidelity(floor) <= input_trace_bound(eps, m) + 1e-10

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            fidelity_floor(-0.1, 4)
        with pytest.raises(ValueError):
            input_trace_bound(0.1, 0)
        with pytest.raises(ValueError):
            trace_bound_from_fidelity(1.5)

    def test_p_error_uses_report_confidence(self, desk_params):
        report = bound_report(desk_params, ideal=True)
        assert p_error_bound(desk_params, report) == pytest.approx(1.0 - report.confidence * 0.25)

    def test_p_error_is_clipped(self):
        params = SecurityParams(p=0.5, epsilon=0.5, delta_frac=0.25, c=1, m=36, n_tilde=89)
        assert p_error_bound(params, bound_report(params)) == 1.0
