from selftest.settings import (
    ADMISSIBLE,
    ALICE_AXES,
    BOB_AXES,
    SETTINGS,
    MeasurementSetting,
    Side,
    ideal_correlation,
    is_one_sided,
    observable_matrix,
)
from selftest.bounds import (
    BoundReport,
    EpsilonBounds,
    ResourceEstimate,
    SecurityParams,
    azuma_delta,
    azuma_epsilon,
    azuma_tail,
    bound_report,
    chi_bound,
    confidence,
    confidence_with_flag,
    correlation_interval,
    epsilon_bounds,
    error_probability_bound,
    resource_estimate,
    scaling_ratio,
    worst_case_prep_deviation,
)
from selftest.ledger import (
    REASON_CONFIDENCE,
    REASON_DEVIATION,
    REASON_STATISTICS,
    CorrelationLedger,
    Verdict,
    acceptance_check,
    ledger_from_records,
    update_estimator,
)
from selftest.montecarlo import (
    correlation_martingale,
    joint_outcome_distribution,
    product_plus_probability,
    sample_estimators,
)
