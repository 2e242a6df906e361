"""epidss: decision support for epidemic preparedness.

Causal Bayesian inference over discrete networks, evidence grading and
discounting, SIR trajectory ensembles discretized into table rows, risk
and bias measures, expert consensus pooling, and a scenario service.
"""

from . import admiralty, bayes, consensus, epi, preparedness, risk
from .admiralty import (
    AdmiraltyGrade,
    GradedEvidence,
    SystemState,
    classify_states,
    discount_to_likelihood,
    grade_weight,
)
from .bayes import (
    CausalNetwork,
    ConditionalTable,
    Evidence,
    Posterior,
    Variable,
    apply_soft_evidence,
    joint_probability,
    load_network,
    posterior_exact,
    posterior_sampled,
    save_network,
    validate_network,
)
from .consensus import ExpertPosterior, conflict, pool
from .epi import (
    ParamPrior,
    SirParams,
    TrajectoryEnsemble,
    discretize_to_cpt,
    export_ensemble,
    sample_ensemble,
    simulate_sir,
)
from .preparedness import (
    EpiSubIndexes,
    SeverityAssessment,
    WhoLevel,
    default_outbreak_network,
    epi_index,
    severity_stage,
    who_level,
)
from .risk import (
    BiasReport,
    CostModel,
    RiskAssessment,
    bias_estimate,
    risk_score,
    sequential_adjust,
    tail_risk,
)

__version__ = "0.1.0"

__all__ = [
    "AdmiraltyGrade",
    "BiasReport",
    "CausalNetwork",
    "ConditionalTable",
    "CostModel",
    "EpiSubIndexes",
    "Evidence",
    "ExpertPosterior",
    "GradedEvidence",
    "ParamPrior",
    "Posterior",
    "RiskAssessment",
    "SeverityAssessment",
    "SirParams",
    "SystemState",
    "TrajectoryEnsemble",
    "Variable",
    "WhoLevel",
    "admiralty",
    "apply_soft_evidence",
    "bayes",
    "bias_estimate",
    "classify_states",
    "conflict",
    "consensus",
    "default_outbreak_network",
    "discount_to_likelihood",
    "discretize_to_cpt",
    "epi",
    "epi_index",
    "export_ensemble",
    "grade_weight",
    "joint_probability",
    "load_network",
    "pool",
    "posterior_exact",
    "posterior_sampled",
    "preparedness",
    "risk",
    "risk_score",
    "sample_ensemble",
    "save_network",
    "sequential_adjust",
    "severity_stage",
    "simulate_sir",
    "tail_risk",
    "validate_network",
    "who_level",
]
