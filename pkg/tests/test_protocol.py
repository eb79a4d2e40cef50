import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import make_pattern
from mbqc import (
    AngleOctant,
    MessageKind,
    PatternError,
    ProtocolViolation,
    Role,
    Transcript,
    build_brickwork,
    is_correct_output,
    p_error_bound,
)
from mbqc.execute import REASON_TRAP
from protocol import (
    PAIR_LABELS,
    REASON_VIOLATION,
    ClassicalCheatStrategy,
    DepolarizingStrategy,
    FlipAllStrategy,
    HonestStrategy,
    PreparedInput,
    RoundKind,
    SharedPair,
    SingleVertexDeviateStrategy,
    basis_observable,
    blindness_audit,
    bob_view,
    default_vertex_roles,
    delivered_view,
    delta_distribution,
    empirical_view,
    make_strategy,
    plan_rounds,
    prepared_input_marginal,
    prepared_pattern,
    remote_prepare_round,
    run_phase_one,
    run_phase_two,
    theta_basis,
    transcript_audit,
    vertex_roles,
)
from qstate import DensityMatrix, bell_pair, fidelity, ket, party_stream, plus_state, trace_distance, xy_observable
from selftest import ALICE_AXES, REASON_DEVIATION, SETTINGS, SecurityParams, Side, bound_report

SEED = 20240917


def honest_pair(trial=0):
    device = HonestStrategy(Side.ALICE).bind(party_stream(SEED, "alice_device", trial))
    bob = HonestStrategy(Side.BOB).bind(party_stream(SEED, "bob", trial))
    return device, bob


def direct_inputs(pattern, rng):
    """1단계를 건너뛰고 정직한 쌍으로 꼭짓점마다 원격 준비"""
    inputs = {}
    for v, kind in vertex_roles(pattern):
        label, residual = remote_prepare_round(kind, rng, bell_pair(PAIR_LABELS))
        inputs[v] = PreparedInput(v, kind, label, residual)
    return inputs


class RecordingBob(HonestStrategy):
    def __init__(self):
        super().__init__(Side.BOB)
        self.pairs = 0
        self.bases = []

    def on_prepare_pair(self, round_index):
        self.pairs += 1
        return super().on_prepare_pair(round_index)

    def on_measure(self, round_index, basis, qubit):
        self.bases.append(basis)
        return super().on_measure(round_index, basis, qubit)


class RecordingDevice(HonestStrategy):
    def __init__(self):
        super().__init__(Side.ALICE)
        self.bases = []

    def on_measure(self, round_index, basis, qubit):
        self.bases.append(basis)
        return super().on_measure(round_index, basis, qubit)


class ZeroReportingDevice(HonestStrategy):
    def on_measure(self, round_index, basis, qubit):
        return 0


class TestPairs:
    def test_pair_must_be_two_qubits(self):
        with pytest.raises(ProtocolViolation):
            SharedPair(ket("0"))

    def test_each_qubit_measured_once(self, rng):
        shared = SharedPair(bell_pair())
        shared.alice.measure(np.diag([1.0, -1.0]), rng)
        with pytest.raises(ProtocolViolation):
            shared.alice.measure(np.diag([1.0, -1.0]), rng)


class TestRemotePreparation:
    def test_angle_label_and_residual(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            label, residual = remote_prepare_round(Role.COMPUTATION, rng, bell_pair(PAIR_LABELS), theta=1)
            assert label in (1, 5)
            expected = plus_state(AngleOctant(-label).radians)
            assert fidelity(expected, residual) == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("k", range(8))
    def test_theta_bases_reuse_test_axes(self, k):
        axis, sign = theta_basis(k)
        assert axis in ALICE_AXES
        assert_allclose(sign * basis_observable(axis, Side.ALICE), xy_observable(k * math.pi / 4), atol=1e-12)

    def test_device_sees_only_test_axes(self):
        params = SecurityParams(p=0.01, epsilon=0.5, delta_frac=0.25, c=1, m=10, n_tilde=50)
        device = RecordingDevice().bind(party_stream(SEED, "alice_device", 0))
        bob = HonestStrategy(Side.BOB).bind(party_stream(SEED, "bob", 0))
        result = run_phase_one(params, device, bob, party_stream(SEED, "alice"))
        assert len(device.bases) == result.rounds
        assert set(device.bases) <= set(ALICE_AXES)

    def test_dummy_label_and_residual(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            label, residual = remote_prepare_round(Role.DUMMY, rng, bell_pair(PAIR_LABELS))
            assert label in (0, 1)
            assert fidelity(ket(str(label)), residual) == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("kind", [Role.COMPUTATION, Role.TRAP, Role.DUMMY])
    def test_marginal_is_maximally_mixed(self, kind):
        marginal = prepared_input_marginal(kind)
        assert trace_distance(marginal, DensityMatrix.maximally_mixed(1)) < 1e-12

    def test_product_pair_leaks_dummy_bit(self):
        marginal = prepared_input_marginal(Role.COMPUTATION, ket("00", PAIR_LABELS))
        assert trace_distance(marginal, DensityMatrix.maximally_mixed(1)) == pytest.approx(1.0)


class TestPlan:
    def test_round_counts(self, rng):
        params = SecurityParams(p=0.5, epsilon=0.5, delta_frac=0.25, c=1, m=10, n_tilde=50)
        plan = plan_rounds(params, default_vertex_roles(10), rng)
        assert len(plan) == 710
        tests = [r for r in plan if r.kind is RoundKind.TEST]
        assert len(tests) == 700
        for s in SETTINGS:
            assert sum(1 for r in tests if r.setting == s) == 50

    def test_uniform_draw_keeps_total(self, rng):
        params = SecurityParams(p=0.5, epsilon=0.5, delta_frac=0.25, c=1, m=10, n_tilde=50)
        plan = plan_rounds(params, default_vertex_roles(10), rng, setting_draw="uniform")
        assert sum(1 for r in plan if r.kind is RoundKind.TEST) == 700

    def test_plan_validation(self, rng):
        params = SecurityParams(p=0.5, epsilon=0.5, delta_frac=0.25, c=1, m=10, n_tilde=50)
        with pytest.raises(ValueError):
            plan_rounds(params, default_vertex_roles(9), rng)
        with pytest.raises(ValueError):
            plan_rounds(params, default_vertex_roles(10), rng, setting_draw="lottery")


class TestPhaseOne:
    def test_round_count_in_transcript(self):
        params = SecurityParams(p=0.01, epsilon=0.5, delta_frac=0.25, c=1, m=10, n_tilde=50)
        device, bob = honest_pair()
        result = run_phase_one(params, device, bob, party_stream(SEED, "alice"))
        assert result.rounds == 710
        assert len(result.transcript.of_kind(MessageKind.REQUEST_PAIR)) == 710

    def test_honest_accepts(self, desk_params):
        device, bob = honest_pair()
        result = run_phase_one(desk_params, device, bob, party_stream(SEED, "alice"))
        assert result.accepted
        assert len(result.inputs) == desk_params.m
        assert result.ledger.max_deviation() <= desk_params.epsilon
        assert result.transcript.verdict is None

    def test_roles_are_hidden_from_bob(self, desk_params):
        device, _ = honest_pair()
        bob = RecordingBob().bind(party_stream(SEED, "bob"))
        run_phase_one(desk_params, device, bob, party_stream(SEED, "alice"))
        assert bob.pairs == desk_params.N
        assert len(bob.bases) == desk_params.test_rounds
        assert set(bob.bases) <= {"X", "Y", "Z"}

    def test_classical_cheat_aborts(self, desk_params):
        device, _ = honest_pair()
        bob = ClassicalCheatStrategy(Side.BOB).bind(party_stream(SEED, "bob"))
        result = run_phase_one(desk_params, device, bob, party_stream(SEED, "alice"))
        assert not result.accepted
        assert result.verdict.reason == REASON_DEVIATION
        assert result.inputs is None
        assert result.transcript.verdict == "reject"

    def test_malformed_outcome_aborts(self, desk_params):
        device = ZeroReportingDevice(Side.ALICE).bind(party_stream(SEED, "alice_device"))
        _, bob = honest_pair()
        result = run_phase_one(desk_params, device, bob, party_stream(SEED, "alice"))
        assert result.verdict.reason == REASON_VIOLATION
        assert result.inputs is None

    def test_transcript_is_reproducible(self, desk_params):
        digests = []
        for _ in range(2):
            device, bob = honest_pair(trial=3)
            result = run_phase_one(desk_params, device, bob, party_stream(SEED, "alice", 3))
            digests.append(result.transcript.digest())
        assert digests[0] == digests[1]


class TestPhaseTwo:
    def test_end_to_end_honest(self, graph, desk_params):
        alice_rng = party_stream(SEED, "alice")
        pattern = make_pattern(graph, alice_rng, delta_frac=0.125)
        device, bob = honest_pair()
        one = run_phase_one(desk_params, device, bob, alice_rng, vertex_roles=vertex_roles(pattern))
        assert one.accepted
        two = run_phase_two(one.inputs, pattern, bob, alice_rng, one.transcript)
        assert two.accepted
        assert two.outputs == (0,)
        assert two.transcript.verdict == "accept"

    def test_flip_all_is_rejected(self, pattern, rng):
        bob = FlipAllStrategy(Side.BOB).bind(np.random.default_rng(1))
        two = run_phase_two(direct_inputs(pattern, rng), pattern, bob, rng)
        assert not two.accepted
        assert two.verdict.reason == REASON_TRAP
        assert two.outputs is None

    def test_prepared_pattern_uses_bob_angles(self, pattern, rng):
        inputs = direct_inputs(pattern, rng)
        prepared = prepared_pattern(pattern, inputs)
        for v, item in inputs.items():
            if item.kind is Role.DUMMY:
                assert prepared.spec(v).d == item.label
            else:
                assert prepared.spec(v).theta == (-item.label) % 8

    def test_role_mismatch(self, pattern, rng):
        inputs = direct_inputs(pattern, rng)
        v = pattern.traps[0]
        inputs[v] = PreparedInput(v, Role.COMPUTATION, inputs[v].label, inputs[v].bob_state)
        with pytest.raises(PatternError):
            prepared_pattern(pattern, inputs)

    def test_single_vertex_error_rate_within_bound(self, graph):
        params = SecurityParams(p=0.9, epsilon=0.01, delta_frac=0.125, c=1, m=36, n_tilde=10_000_000)
        bound = p_error_bound(params, bound_report(params, ideal=True))
        assert bound < 1.0

        rng = np.random.default_rng(99)
        trials, rejected, incorrect, traps = 400, 0, 0, 0
        for _ in range(trials):
            pattern = make_pattern(graph, rng, delta_frac=0.125)
            traps += len(pattern.traps)
            bob = SingleVertexDeviateStrategy(Side.BOB).bind(rng)
            two = run_phase_two(direct_inputs(pattern, rng), pattern, bob, rng)
            if not two.accepted:
                rejected += 1
            elif not is_correct_output(two.pattern, two.outputs):
                incorrect += 1

        # 뒤집힌 꼭짓점이 trap 일 때만 거절
        trap_share = traps / (trials * len(graph.vertices()))
        sigma = math.sqrt(trap_share * (1 - trap_share) / trials)
        assert abs(rejected / trials - trap_share) < 4 * sigma

        incorrect_rate = incorrect / trials
        assert incorrect > 0
        assert incorrect_rate <= bound + 3 * math.sqrt(bound * (1 - bound) / trials)


class TestBlindness:
    def test_views_are_maximally_mixed(self, pattern):
        mixed = DensityMatrix.maximally_mixed(4)
        for v in pattern.order:
            assert trace_distance(bob_view(pattern, v), mixed) < 1e-12

    def test_delta_is_uniform(self, computing_pattern):
        for v in computing_pattern.order:
            np.testing.assert_allclose(delta_distribution(computing_pattern, v), np.full(8, 1 / 8), atol=1e-12)

    def test_computation_angles_are_hidden(self, graph):
        rng = np.random.default_rng(8)
        a = make_pattern(graph, rng, delta_frac=0.125, computation="random")
        b = make_pattern(graph, rng, delta_frac=0.125, computation="random")
        assert blindness_audit(a, b) <= 1e-12

    def test_trap_placement_is_hidden(self, graph):
        a = make_pattern(graph, np.random.default_rng(1))
        b = make_pattern(graph, np.random.default_rng(2))
        assert blindness_audit(a, b) <= 1e-12

    def test_nonzero_results_stay_blind(self, computing_pattern):
        results = {v: (v[0] + v[1]) % 2 for v in computing_pattern.graph.vertices()}
        other = make_pattern(computing_pattern.graph, np.random.default_rng(3), delta_frac=0.125, computation="random")
        assert blindness_audit(computing_pattern, other, results) <= 1e-12

    def test_shape_mismatch(self, pattern):
        small = make_pattern(build_brickwork(4, 17), np.random.default_rng(0))
        with pytest.raises(ValueError):
            blindness_audit(pattern, small)


AUDIT_RUNS = 400


def protocol_runs(bob_spec, computation, seed, runs=AUDIT_RUNS):
    """전략의 쌍으로 원격 준비한 뒤 2단계까지 실행한 (대화록, 전달된 입력) 목록"""
    graph = build_brickwork(4, 9)
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(runs):
        pattern = make_pattern(graph, rng, delta_frac=0.125, computation=computation)
        bob = make_strategy(bob_spec, Side.BOB).bind(rng)
        inputs = {}
        for i, (v, kind) in enumerate(vertex_roles(pattern)):
            label, residual = remote_prepare_round(kind, rng, bob.on_prepare_pair(i))
            inputs[v] = PreparedInput(v, kind, label, residual)
        two = run_phase_two(inputs, pattern, bob, rng)
        out.append((two.transcript, inputs))
    return out


CHEAT = {"name": "classical_cheat", "report": 1, "entangle": False}


@pytest.fixture(scope="module")
def honest_runs():
    return {
        "identity": protocol_runs("honest", "identity", seed=31),
        "random": protocol_runs("honest", "random", seed=32),
    }


@pytest.fixture(scope="module")
def cheat_runs():
    return {
        "identity": protocol_runs(CHEAT, "identity", seed=33),
        "random": protocol_runs(CHEAT, "random", seed=34),
    }


class TestTranscriptAudit:
    def test_delivered_view_reads_transcript(self, honest_runs):
        transcript, inputs = honest_runs["identity"][0]
        views = delivered_view(transcript, inputs)
        assert len(views) == 36
        for m in transcript.of_kind(MessageKind.ANGLE_INSTRUCTION):
            v = tuple(m.payload["vertex"])
            qubit = inputs[v].bob_state.density().matrix
            block = views[v].reshape(8, 2, 8, 2)[m.payload["delta"], :, m.payload["delta"], :]
            assert_allclose(block, qubit, atol=1e-12)

    def test_honest_views_match_exact_view(self, honest_runs):
        runs = honest_runs["identity"]
        empirical = empirical_view(runs)
        pattern = make_pattern(build_brickwork(4, 9), np.random.default_rng(0), delta_frac=0.125)
        distances = [0.5 * trace_distance(empirical[v], bob_view(pattern, v)) for v in pattern.order]
        assert np.mean(distances) < 0.25

    def test_honest_computation_is_hidden(self, honest_runs):
        assert transcript_audit(honest_runs["identity"], honest_runs["random"]) < 0.3

    def test_classical_cheat_view_is_still_blind(self, cheat_runs):
        assert transcript_audit(cheat_runs["identity"], cheat_runs["random"]) < 0.3

    def test_audit_separates_delivered_states(self, honest_runs, cheat_runs):
        # 곱 상태 쌍이면 Bob 큐비트는 항상 |0⟩
        assert transcript_audit(honest_runs["identity"], cheat_runs["identity"]) > 0.4

    def test_missing_delivery(self, honest_runs):
        transcript, inputs = honest_runs["identity"][0]
        partial = dict(inputs)
        partial.pop(next(iter(partial)))
        with pytest.raises(ValueError):
            delivered_view(transcript, partial)

    def test_empty_runs(self):
        with pytest.raises(ValueError):
            empirical_view([])


class TestStrategies:
    def test_make_strategy(self):
        strategy = make_strategy({"name": "depolarizing", "q": 0.8}, Side.BOB)
        assert isinstance(strategy, DepolarizingStrategy)
        assert strategy.describe() == {"name": "depolarizing", "q": 0.8}
        assert isinstance(make_strategy("flip_all"), FlipAllStrategy)

    def test_strategies_do_not_share_state(self):
        a = make_strategy("honest").bind(np.random.default_rng(0))
        b = make_strategy("honest").bind(np.random.default_rng(0))
        assert a is not b and a.rng is not b.rng

    @pytest.mark.parametrize("spec", [{"name": "oracle"}, {"name": "depolarizing", "q": 2.0}, {"name": "honest", "x": 1}])
    def test_invalid_specs(self, spec):
        with pytest.raises(ValueError):
            make_strategy(spec)

    def test_depolarized_pairs_are_classical_at_zero(self):
        strategy = DepolarizingStrategy(Side.BOB, q=0.0).bind(np.random.default_rng(0))
        for _ in range(10):
            pair = strategy.on_prepare_pair(0)
            assert np.count_nonzero(np.abs(pair.amplitudes) > 1e-12) == 1

    def test_compute_requires_begin(self):
        strategy = HonestStrategy().bind(np.random.default_rng(0))
        with pytest.raises(RuntimeError):
            strategy.on_compute_measure(0, (0, 0), AngleOctant(0))

    def test_transcript_directions(self, desk_params):
        device, bob = honest_pair()
        result = run_phase_one(desk_params, device, bob, party_stream(SEED, "alice"))
        directions = {m.direction for m in result.transcript.messages}
        assert directions == {"alice->bob", "bob->alice", "alice->device", "device->alice"}
        assert isinstance(result.transcript, Transcript)
