from protocol.devices import PAIR_LABELS, PairQubit, SharedPair, basis_observable, check_outcome, theta_basis
from protocol.strategies import (
    STRATEGIES,
    ClassicalCheatStrategy,
    DepolarizingStrategy,
    FlipAllStrategy,
    HonestStrategy,
    MiscalibratedStrategy,
    ProverStrategy,
    SingleVertexDeviateStrategy,
    make_strategy,
)
from protocol.phase_one import (
    REASON_VIOLATION,
    SETTING_DRAWS,
    PhaseOneResult,
    PreparedInput,
    RoundKind,
    RoundRole,
    default_vertex_roles,
    plan_rounds,
    remote_prepare_round,
    run_phase_one,
)
from protocol.phase_two import PhaseTwoResult, prepared_pattern, run_phase_two, vertex_roles
from protocol.blindness import (
    blindness_audit,
    bob_view,
    delivered_view,
    delta_distribution,
    empirical_view,
    prepared_input_marginal,
    transcript_audit,
)
