from isometry.assignment import (
    OperatorAssignment,
    conjugated_assignment,
    detuned_bell,
    ideal_assignment,
    physical_labels,
    random_assignment,
    rotate_operator,
    rotated_assignment,
    werner_purification,
)
from isometry.circuit import (
    ANCILLA_LABELS,
    KICKBACK_LABEL,
    closed_form,
    full_isometry,
    kickback_stage,
    project_alice,
    swap_stage,
)
from isometry.extraction import (
    SWEEP_COLUMNS,
    CommutationResiduals,
    ExtractionResult,
    chi_actual,
    commutation_residuals,
    correlations,
    extraction_distance,
    ideal_targets,
    residual_bounds,
    sweep_frame,
)
