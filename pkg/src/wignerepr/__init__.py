"""Discrete Wigner functions of qubits, measurement collapse and EPR scenarios."""

from .collapse import (
    classic_collapse,
    joint_prob,
    marginal,
    mix_from_probs,
    quantum_collapse,
    sample_outcome,
)
from .distributions import CollapseEvent, JointDistribution, ObservableId
from .epr import (
    Scenario,
    ScenarioTrace,
    classical_epr_initial,
    mlocality_check,
    no_communication_check,
    run_scenario,
)
from .errors import (
    ConsistencyError,
    DomainError,
    ImpossibleOutcomeError,
    UnsupportedArityError,
    ValidationError,
    WignerError,
)
from .phasespace import (
    WignerFunction,
    inner_product,
    line_marginal,
    phase_point_operator,
    phase_points,
    reconstruct,
    single_qubit_phase_point,
    wigner,
)
from .qstate import (
    DensityMatrix,
    basis_state_p,
    basis_state_q,
    bell_state,
    density_from_vector,
    maximally_mixed,
    partial_transpose,
    purity,
    tensor,
    validate_density,
)

__version__ = "0.1.0"
