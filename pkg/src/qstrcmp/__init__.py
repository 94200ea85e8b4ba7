"""Grover-based quantum string comparison: reduced and full-register
state-vector backends plus an audit of the protocol's correctness claims."""

__version__ = "0.1.0"

from .statevector import (
    DimensionMismatch,
    MarkedSet,
    RegisterConfig,
    StateVector,
    apply_diffusion,
    apply_phase_flip,
    grover_iterate,
    measurement_distribution,
    sample_measurement,
    uniform_state,
)
from .protocol import (
    CombinedInputState,
    ComparisonInstance,
    ComparisonTranscript,
    Mode,
    OracleSpec,
    Verdict,
    build_sub_oracle,
    combine_sub_oracles,
    compare,
    default_iterations,
    prepare_combined_state,
)
from .joint import (
    JointState,
    SupportViolation,
    apply_joint_diffusion,
    apply_joint_oracle,
    extract_first_register,
    prepare_joint,
    run_joint_protocol,
    validate_backends,
)
from .analysis import (
    ClaimReport,
    ancilla_count,
    audit_claims,
    false_equal_probability,
    marked_count,
    success_probability,
)
