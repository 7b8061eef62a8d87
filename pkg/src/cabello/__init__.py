"""Nonlocality without inequalities for two-qubit pure states.

The package proves, constructs and measures everything around one
four-observable argument: closed-form joint probabilities validated
against a Born-rule matrix oracle, the exact solver for the two zero
conditions, explicit witnesses for every non-maximally-entangled state,
the no-go at maximal entanglement, the local-hidden-variable bound by
strategy enumeration, and numerical maximization of the success gap
q4 - q1 over states and settings.
"""

from .cabello_engine import (
    CabelloProbs,
    ConditionVerdict,
    ConstraintSolution,
    NogoReport,
    NogoSweepReport,
    Settings,
    cabello_probs,
    check_conditions,
    closed_form_joint,
    nogo_sweep,
    nogo_verify,
    solve_constraints,
    witness_settings,
)
from .lhv import (
    DeterministicStrategy,
    LocalBoundReport,
    SampleStats,
    StrategyRow,
    all_strategies,
    local_bound_check,
    mixture_probs,
    quantum_violation,
    sample_probs,
)
from .optimizer import (
    GapObjective,
    HardyOptimum,
    OptimumRecord,
    gap_general,
    gap_gradient,
    gap_gradient_fd,
    gap_symmetric,
    hardy_global_max,
    hardy_max,
    hardy_max_brute,
    maximize_gap,
    stationarity_residual,
    sweep,
)
from .quantum_core import (
    OUTCOME_PAIRS,
    ComplexMatrix,
    Direction,
    DomainError,
    NumericalConsistencyError,
    Outcome,
    SchmidtState,
    density_matrix,
    density_matrix_pauli,
    is_density_matrix,
    is_hermitian,
    is_projector_matrix,
    joint_probability_oracle,
    outcome_distribution,
    projector,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # quantum_core
    "DomainError",
    "NumericalConsistencyError",
    "Outcome",
    "SchmidtState",
    "Direction",
    "ComplexMatrix",
    "OUTCOME_PAIRS",
    "density_matrix",
    "density_matrix_pauli",
    "projector",
    "joint_probability_oracle",
    "outcome_distribution",
    "is_hermitian",
    "is_projector_matrix",
    "is_density_matrix",
    # cabello_engine
    "Settings",
    "CabelloProbs",
    "ConditionVerdict",
    "ConstraintSolution",
    "NogoReport",
    "NogoSweepReport",
    "closed_form_joint",
    "cabello_probs",
    "check_conditions",
    "solve_constraints",
    "witness_settings",
    "nogo_verify",
    "nogo_sweep",
    # optimizer
    "GapObjective",
    "OptimumRecord",
    "HardyOptimum",
    "gap_general",
    "gap_symmetric",
    "gap_gradient",
    "gap_gradient_fd",
    "stationarity_residual",
    "maximize_gap",
    "hardy_max",
    "hardy_max_brute",
    "hardy_global_max",
    "sweep",
    # lhv
    "DeterministicStrategy",
    "StrategyRow",
    "LocalBoundReport",
    "SampleStats",
    "all_strategies",
    "local_bound_check",
    "mixture_probs",
    "quantum_violation",
    "sample_probs",
]
