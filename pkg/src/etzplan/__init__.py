"""etzplan: ETZ variance decomposition and phase-transition planning.

From the summary statistics a trial publication reports, this package
decomposes outcome variability into intercept / measurement-error /
trajectory components, builds directed confidence sets for two-endpoint
transition and designation decisions, computes Confidently Bounded
Quantiles for confirmatory-study planning, and simulates replications of
the feeder study under a random-coefficients model.
"""

from .cbq import (
    ConfidentEfficacy,
    DecisionReport,
    DiscountPlan,
    Phase3Design,
    cbq_closed_form,
    cbq_monte_carlo,
    classical_sample_size,
    complete_discount_plan,
    confident_efficacy,
    min_n_for_positive_cbq,
    transition_assessment,
)
from .confset import (
    DesignationDecision,
    DirectedInterval,
    EndpointEstimate,
    IntervalKind,
    Outcome,
    PartitionConfig,
    Quadrant,
    TransitionDecision,
    allowance_d,
    combined_lower_bound,
    designate_endpoint,
    directed_diff_interval,
    joint_critical_bound,
    transition_decision,
)
from .errors import (
    BracketError,
    Conflict,
    DecompositionError,
    DomainError,
    EtzError,
    InfeasiblePlan,
    NotApplicable,
    NotFound,
    ParseError,
    TooLarge,
)
from .etz import (
    ArmSummary,
    Direction,
    EtzComponents,
    StudySummary,
    VarianceTriple,
    change_variance_from_se,
    compose_variances,
    decompose_etz,
    pooled_change_sd,
    variances_from_r_matrix,
)
from .ingest import (
    ScenarioRecord,
    ScenarioStore,
    parse_scenario_record,
    parse_study_summary,
    serialize_scenario_record,
    serialize_study_summary,
    study_to_variance_triple,
)
from .simprofile import (
    FixedEffects,
    ProfileRow,
    ReplicabilityMetrics,
    SimConfig,
    SimulatedStudy,
    empirical_variance_triple,
    etz_to_random_coefficients,
    profile_table,
    replicability_metrics,
    simulate_profile_rows,
    simulate_study,
    study_fixed_effects,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "EtzError",
    "DomainError",
    "BracketError",
    "DecompositionError",
    "NotApplicable",
    "InfeasiblePlan",
    "ParseError",
    "NotFound",
    "Conflict",
    "TooLarge",
    # variance decomposition
    "VarianceTriple",
    "EtzComponents",
    "ArmSummary",
    "StudySummary",
    "Direction",
    "decompose_etz",
    "compose_variances",
    "variances_from_r_matrix",
    "change_variance_from_se",
    "pooled_change_sd",
    # directed confidence sets
    "EndpointEstimate",
    "PartitionConfig",
    "DirectedInterval",
    "IntervalKind",
    "Quadrant",
    "Outcome",
    "TransitionDecision",
    "DesignationDecision",
    "allowance_d",
    "directed_diff_interval",
    "joint_critical_bound",
    "transition_decision",
    "combined_lower_bound",
    "designate_endpoint",
    # decision pipeline
    "DiscountPlan",
    "ConfidentEfficacy",
    "Phase3Design",
    "DecisionReport",
    "complete_discount_plan",
    "confident_efficacy",
    "cbq_closed_form",
    "cbq_monte_carlo",
    "min_n_for_positive_cbq",
    "classical_sample_size",
    "transition_assessment",
    # simulator
    "FixedEffects",
    "SimConfig",
    "SimulatedStudy",
    "ProfileRow",
    "ReplicabilityMetrics",
    "etz_to_random_coefficients",
    "simulate_study",
    "empirical_variance_triple",
    "profile_table",
    "replicability_metrics",
    "simulate_profile_rows",
    "study_fixed_effects",
    # documents and persistence
    "ScenarioRecord",
    "ScenarioStore",
    "parse_study_summary",
    "serialize_study_summary",
    "parse_scenario_record",
    "serialize_scenario_record",
    "study_to_variance_triple",
]
