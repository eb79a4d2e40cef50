import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qstate import SQRT_HALF, Operator, bell_pair, expectation
from selftest import (
    ADMISSIBLE,
    REASON_CONFIDENCE,
    REASON_DEVIATION,
    REASON_STATISTICS,
    SETTINGS,
    CorrelationLedger,
    MeasurementSetting,
    SecurityParams,
    Side,
    acceptance_check,
    azuma_delta,
    azuma_epsilon,
    azuma_tail,
    bound_report,
    chi_bound,
    confidence,
    confidence_with_flag,
    correlation_interval,
    correlation_martingale,
    epsilon_bounds,
    ideal_correlation,
    is_one_sided,
    ledger_from_records,
    observable_matrix,
    resource_estimate,
    sample_estimators,
    scaling_ratio,
    update_estimator,
    worst_case_prep_deviation,
)


def balanced_records(rounds: int):
    """설정마다 Ĉ 가 μ 에 가장 가깝도록 고른 (setting, a, b) 기록"""
    records = []
    for s in SETTINGS:
        plus = int(round(rounds * (1.0 + ideal_correlation(s)) / 2.0))
        records += [(s, 1, 1)] * plus + [(s, 1, -1)] * (rounds - plus)
    return records


class TestSettings:
    def test_fourteen_admissible_settings(self):
        assert len(SETTINGS) == 14
        assert {s.name for s in SETTINGS} == {a + b for a, b in ADMISSIBLE}

    def test_inadmissible_setting(self):
        with pytest.raises(ValueError):
            MeasurementSetting("D", "Y")

    def test_parse_two_character_alice_axis(self):
        s = MeasurementSetting.parse("E+Y")
        assert (s.alpha, s.beta) == ("E+", "Y")

    def test_ideal_correlations_match_bell_expectations(self):
        bell = bell_pair()
        for s in SETTINGS:
            alice = observable_matrix(s.alpha, Side.ALICE).matrix
            bob = observable_matrix(s.beta, Side.BOB).matrix
            value = expectation(bell, Operator(np.kron(alice, bob)))
            assert value == pytest.approx(ideal_correlation(s), abs=1e-12), s.name

    def test_correlation_values(self):
        assert ideal_correlation(MeasurementSetting("E-", "X")) == pytest.approx(-SQRT_HALF)
        assert ideal_correlation(MeasurementSetting("X", "Z")) == 0.0

    def test_one_sided_settings(self):
        assert {s.name for s in SETTINGS if is_one_sided(s)} == {"XX", "YY", "ZZ"}

    def test_bob_rejects_alice_only_axis(self):
        with pytest.raises(ValueError):
            observable_matrix("D", Side.BOB)

    def test_all_observables_are_reflections(self):
        for label in ("X", "Y", "Z", "D", "E+", "E-", "F"):
            assert observable_matrix(label, Side.ALICE).is_observable


class TestSecurityParams:
    def test_round_counts(self):
        params = SecurityParams(p=0.9, epsilon=0.1, delta_frac=0.25, c=1, m=10, n_tilde=50)
        assert params.rounds_per_setting == 50
        assert params.N == 710

    def test_fractional_c_rounds_up(self):
        params = SecurityParams(p=0.9, epsilon=0.1, delta_frac=0.25, c=1.5, m=0, n_tilde=3)
        assert params.rounds_per_setting == 5

    @pytest.mark.parametrize("field,value", [("epsilon", 0.0), ("p", 1.0), ("delta_frac", 0.5), ("c", 0.5), ("m", -1)])
    def test_invalid_fields(self, field, value):
        kwargs = dict(p=0.9, epsilon=0.1, delta_frac=0.25, c=1, m=10, n_tilde=50)
        kwargs[field] = value
        with pytest.raises(ValueError):
            SecurityParams(**kwargs)


class TestBounds:
    def test_azuma_delta(self):
        assert azuma_delta(100, 0, 0.4) == pytest.approx(math.exp(-2.0))

    def test_confidence_variants(self):
        delta = 0.01
        assert confidence(delta) == pytest.approx(0.99 ** 3 * 0.98 ** 11)
        assert confidence(delta, "per_qubit", m=2) == pytest.approx(0.99 ** 6 * 0.98 ** 22)

    def test_degenerate_confidence_is_flagged(self):
        assert confidence_with_flag(0.5) == (0.0, True)
        assert confidence_with_flag(0.1)[1] is False

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            confidence(0.1, "per_round")

    def test_tiny_confidence_is_finite(self):
        delta = azuma_delta(600, 16, 0.1)
        assert delta < 0.5
        value = confidence(delta)
        assert 0.0 < value < 1e-6

    def test_chi_bound(self):
        assert chi_bound(100, 0, 0.1) == pytest.approx(0.2)
        assert chi_bound(0, 10, 0.1) == pytest.approx(2.1)

    def test_epsilon_bounds_vanish_at_zero(self):
        assert epsilon_bounds(0.0) == (0.0, 0.0, 0.0)

    def test_eps_tilde_scales_like_fourth_root(self):
        chis = np.logspace(-8, -2, 13)
        ratios = np.array([epsilon_bounds(c).eps_tilde / c ** 0.25 for c in chis])
        assert ratios.max() < 25.0
        assert ratios.max() / ratios.min() < 2.0

    def test_worst_case_table(self):
        assert worst_case_prep_deviation(1.0) == -2.0
        assert worst_case_prep_deviation(-SQRT_HALF) == pytest.approx(1.0 + SQRT_HALF)
        assert worst_case_prep_deviation(0.0, pessimistic=True) == 2.0
        with pytest.raises(ValueError):
            worst_case_prep_deviation(0.5)

    def test_ideal_report(self):
        params = SecurityParams(p=0.9, epsilon=1e-3, delta_frac=0.25, c=1, m=16, n_tilde=10_000_000)
        report = bound_report(params, ideal=True)
        assert report.eps_tilde == 0.0
        assert report.p_error_bound == pytest.approx(1.0 - report.confidence * 0.25)

    def test_report_is_finite(self):
        params = SecurityParams(p=0.9, epsilon=1e-3, delta_frac=0.25, c=1, m=16, n_tilde=10_000_000)
        report = bound_report(params)
        assert all(math.isfinite(v) for v in report.to_dict().values())
        assert 0.0 <= report.p_error_bound <= 1.0
        assert '"eps_tilde"' in report.to_json()

    def test_desk_params_reach_confidence(self, desk_params):
        report = bound_report(desk_params)
        assert report.delta == pytest.approx(math.exp(-125 * 0.25 / 8))
        assert report.confidence >= desk_params.p


class TestResourceScaling:
    def test_estimate_reaches_target(self):
        for m in (4, 16, 64):
            est = resource_estimate(m, 0.9)
            delta = azuma_delta(est.n_tilde, m, est.epsilon)
            assert confidence(delta) >= 0.9
            assert confidence(delta, "per_qubit", m) >= 0.9

    def test_ratio_band(self):
        ratios = [scaling_ratio(m, resource_estimate(m).N) for m in (8, 16, 32, 64, 128)]
        changes = [abs(b - a) / a for a, b in zip(ratios, ratios[1:])]
        assert max(changes) < 0.25

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            resource_estimate(0)
        with pytest.raises(ValueError):
            resource_estimate(4, 1.0)


class TestLedger:
    def test_update_requires_begin_round(self):
        ledger = CorrelationLedger()
        with pytest.raises(ValueError):
            update_estimator(ledger, SETTINGS[0], 1, 1)

    def test_rejects_non_pm_one(self):
        ledger = CorrelationLedger()
        ledger.begin_round(SETTINGS[0])
        with pytest.raises(ValueError):
            update_estimator(ledger, SETTINGS[0], 0, 1)

    def test_running_mean(self):
        xx = MeasurementSetting("X", "X")
        ledger = ledger_from_records([(xx, 1, 1), (xx, 1, -1), (xx, -1, -1), (xx, 1, 1)])
        assert ledger.count(xx) == 4
        assert ledger.estimate(xx) == pytest.approx(0.5)
        assert ledger.deviation(xx) == pytest.approx(0.5)

    def test_pending_round_does_not_dilute_estimate(self):
        zz = MeasurementSetting("Z", "Z")
        ledger = ledger_from_records([(zz, 1, 1)])
        ledger.begin_round(zz)
        assert ledger.count(zz) == 2
        assert ledger.completed(zz) == 1
        assert ledger.estimate(zz) == 1.0
        assert ledger.deviation(zz) == 0.0

    def test_pending_rounds_are_not_statistics(self, desk_params):
        ledger = ledger_from_records(balanced_records(desk_params.n_tilde - 1))
        for s in SETTINGS:
            ledger.begin_round(s)
        verdict = acceptance_check(ledger, desk_params)
        assert verdict.reason == REASON_STATISTICS

    def test_snapshot_is_independent(self):
        ledger = ledger_from_records([(SETTINGS[0], 1, 1)])
        snap = ledger.snapshot()
        ledger.begin_round(SETTINGS[0])
        assert snap.count(SETTINGS[0]) == 1

    def test_frame_has_all_settings(self):
        df = CorrelationLedger().to_frame()
        assert len(df) == 14
        assert list(df.columns) == ["setting", "count", "product_sum", "estimate", "ideal", "deviation"]


class TestAcceptanceCheck:
    def test_accepts_balanced_statistics(self, desk_params):
        ledger = ledger_from_records(balanced_records(desk_params.n_tilde))
        assert acceptance_check(ledger, desk_params).accepted

    def test_confidence_checked_first(self):
        params = SecurityParams(p=0.9, epsilon=0.5, delta_frac=0.25, c=1, m=1, n_tilde=10)
        verdict = acceptance_check(ledger_from_records(balanced_records(10)), params)
        assert not verdict
        assert verdict.reason == REASON_CONFIDENCE

    def test_insufficient_statistics(self, desk_params):
        verdict = acceptance_check(CorrelationLedger(), desk_params)
        assert verdict.reason == REASON_STATISTICS

    def test_deviation(self, desk_params):
        records = [(s, 1, -1 if is_one_sided(s) else 1) for s in SETTINGS] * desk_params.n_tilde
        verdict = acceptance_check(ledger_from_records(records), desk_params)
        assert verdict.reason == REASON_DEVIATION


class TestConcentration:
    def test_estimator_tail_below_azuma(self):
        rng = np.random.default_rng(5)
        rounds, eps = 200, 0.15
        limit = 2.0 * math.exp(-rounds * eps ** 2 / 8.0)
        for s in SETTINGS:
            samples = sample_estimators(s, rounds, 10_000, rng)
            freq = np.mean(np.abs(samples - ideal_correlation(s)) > eps)
            assert freq <= limit + 3.0 * math.sqrt(limit * (1 - min(limit, 1.0)) / 10_000) + 1e-12
            assert abs(samples.mean() - ideal_correlation(s)) < 0.01

    def test_martingale_increments_bounded(self, rng):
        products = rng.choice([-1, 1], size=500)
        truth = rng.uniform(-1, 1, size=500)
        y = correlation_martingale(products, truth)
        assert y.shape == (501,)
        assert y[0] == 0.0
        assert np.abs(np.diff(y)).max() <= 2.0

    def test_azuma_tail_and_epsilon(self):
        assert azuma_tail(4.0, [2.0] * 8) == pytest.approx(math.exp(-16.0 / 64.0))
        eps = azuma_epsilon(400, 0.01)
        assert azuma_delta(400, 0, eps) == pytest.approx(0.01)

    def test_correlation_interval_upper_matches_chi(self):
        lower, upper = correlation_interval(100, 10, 0.2)
        assert lower < upper
        assert_allclose(upper, chi_bound(100, 10, 0.2))
