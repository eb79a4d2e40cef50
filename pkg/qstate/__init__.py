from qstate.state import (
    ATOL_ALGEBRAIC,
    ATOL_NORMALIZED,
    CZ,
    HADAMARD,
    I2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    SQRT_HALF,
    DensityMatrix,
    Measurement,
    Operator,
    QStateError,
    StateVector,
    apply,
    apply_array,
    bell_pair,
    controlled,
    eigenvector,
    expectation,
    ket,
    outcome_probabilities,
    partial_trace,
    plus_state,
    projective_measure,
    remove_qubit,
    tensor,
    xy_observable,
)
from qstate.measures import fidelity, trace_distance, vector_distance
from qstate.rng import party_stream, random_reflection, random_state, random_unitary
