"""Causal network representation and probabilistic inference."""

from .network import (
    CausalNetwork,
    ConditionalTable,
    ContradictoryEvidenceError,
    Evidence,
    ValidationReport,
    Variable,
    ZeroProbabilityEvidenceError,
    joint_probability,
    merge_evidence,
    validate_network,
)
from .inference import (
    Posterior,
    SamplingError,
    apply_soft_evidence,
    elimination_width,
    evidence_probability,
    merge_sampled_posteriors,
    posterior_exact,
    posterior_sampled,
)
from .serialize import (
    NetworkFormatError,
    dumps_network,
    load_network,
    loads_network,
    network_from_document,
    network_to_document,
    save_network,
)

__all__ = [
    "CausalNetwork",
    "ConditionalTable",
    "ContradictoryEvidenceError",
    "Evidence",
    "NetworkFormatError",
    "Posterior",
    "SamplingError",
    "ValidationReport",
    "Variable",
    "ZeroProbabilityEvidenceError",
    "apply_soft_evidence",
    "dumps_network",
    "elimination_width",
    "evidence_probability",
    "joint_probability",
    "load_network",
    "loads_network",
    "merge_evidence",
    "merge_sampled_posteriors",
    "network_from_document",
    "network_to_document",
    "posterior_exact",
    "posterior_sampled",
    "save_network",
    "validate_network",
]
