from mbqc.brickwork import (
    OCTANTS,
    AngleOctant,
    BrickworkGraph,
    PatternError,
    Vertex,
    build_brickwork,
    build_cylindrical_brickwork,
    colour,
)
from mbqc.tape import Role, TapeAssignment, choose_single_trap, choose_tape, tape_size
from mbqc.pattern import (
    COMPUTATIONS,
    BrickworkPattern,
    VertexSpec,
    build_pattern,
    compute_delta,
    computation_angles,
    dependency_sets,
    pattern_from_dict,
    with_prepared_labels,
)
from mbqc.transcript import Message, MessageKind, ProtocolViolation, Transcript
from mbqc.execute import (
    REASON_TRAP,
    BrickworkRegister,
    ComputeProver,
    FrontierOverflow,
    HonestBrickworkProver,
    alice_results,
    corrected_output,
    ideal_inputs,
    streaming_execute,
    verify_traps,
)
from mbqc.oracle import branch_probability, graph_state, is_correct_output, plain_output_distribution
from mbqc.bounds import (
    fidelity_floor,
    input_trace_bound,
    linear_fidelity_floor,
    p_error_bound,
    trace_bound_from_fidelity,
)
