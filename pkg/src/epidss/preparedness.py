"""Outbreak-risk template network, preparedness levels and staging scales.

The template ships as a bundled network document so its tables can be
edited without code changes. Its structure: imported cases feed local
transmission (modulated by testing capacity), local feeds community
transmission, and outbreak risk depends on community transmission plus
the transmissibility (1-5) and severity (1-7) scales. The table numbers
are monotone shipped defaults with no empirical provenance; replace them
with discretized model output or local estimates for real use.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from typing import Sequence

import numpy as np

from .bayes import (
    CausalNetwork,
    ConditionalTable,
    Evidence,
    Variable,
    ZeroProbabilityEvidenceError,
    evidence_probability,
    loads_network,
)
from .epi import TrajectoryEnsemble, discretize_to_cpt

TEMPLATE_RESOURCE = "outbreak_network.json"

TRANSMISSIBILITY_RANGE = (1, 5)
SEVERITY_RANGE = (1, 7)
COARSE_LABELS = ("low_moderate", "moderate_high")

_SCORE_WEIGHTS = {"community": 0.55, "transmissibility": 0.25, "severity": 0.20}


class WhoLevel(Enum):
    """Strategic preparedness ladder, most serious first."""

    COMMUNITY_TRANSMISSION = "community_transmission"
    LOCAL_TRANSMISSION = "local_transmission"
    IMPORTED_CASES = "imported_cases"
    HIGH_RISK_IMPORTED = "high_risk_imported"
    PREPAREDNESS = "preparedness"


def _risk_row(community: bool, transmissibility: int, severity: int) -> tuple[float, ...]:
    """Distribution over (low, medium, high) from a monotone pressure score.

    The score in [0, 1] mixes community transmission with the two scales;
    (1-s)^2, 2s(1-s), s^2 spreads it over three ordered states so that a
    higher score strictly raises the high-risk mass.
    """
    score = (
        _SCORE_WEIGHTS["community"] * (1.0 if community else 0.0)
        + _SCORE_WEIGHTS["transmissibility"] * (transmissibility - 1) / 4.0
        + _SCORE_WEIGHTS["severity"] * (severity - 1) / 6.0
    )
    return ((1 - score) ** 2, 2 * score * (1 - score), score**2)


def build_outbreak_template() -> CausalNetwork:
    """Construct the template in code (the bundled document's source)."""
    transmissibility_states = tuple(str(i) for i in range(1, 6))
    severity_states = tuple(str(i) for i in range(1, 8))

    variables = [
        Variable("ImportedCases", ("none", "few", "many")),
        Variable("TestingCapacity", ("low", "high")),
        Variable("LocalTransmission", ("yes", "no")),
        Variable("CommunityTransmission", ("yes", "no")),
        Variable("Transmissibility", transmissibility_states),
        Variable("Severity", severity_states),
        Variable("OutbreakRisk", ("low", "medium", "high")),
    ]
    edges = [
        ("ImportedCases", "LocalTransmission"),
        ("TestingCapacity", "LocalTransmission"),
        ("LocalTransmission", "CommunityTransmission"),
        ("CommunityTransmission", "OutbreakRisk"),
        ("Transmissibility", "OutbreakRisk"),
        ("Severity", "OutbreakRisk"),
    ]

    local_rows = {}
    base_by_imported = {"none": 0.05, "few": 0.35, "many": 0.7}
    for imported, capacity in itertools.product(("none", "few", "many"), ("low", "high")):
        p_yes = base_by_imported[imported]
        if capacity == "low":
            p_yes *= 0.8  # weak testing detects less of what is there
        local_rows[(imported, capacity)] = (p_yes, 1.0 - p_yes)

    risk_rows = {}
    for community, t, s in itertools.product(
        ("yes", "no"), transmissibility_states, severity_states
    ):
        risk_rows[(community, t, s)] = _risk_row(community == "yes", int(t), int(s))

    cuts = [
        ConditionalTable("ImportedCases", (), {(): (0.5, 0.3, 0.2)}),
        ConditionalTable("TestingCapacity", (), {(): (0.4, 0.6)}),
        ConditionalTable(
            "LocalTransmission", ("ImportedCases", "TestingCapacity"), local_rows
        ),
        ConditionalTable(
            "CommunityTransmission",
            ("LocalTransmission",),
            {("yes",): (0.6, 0.4), ("no",): (0.05, 0.95)},
        ),
        ConditionalTable(
            "Transmissibility", (), {(): (0.3, 0.25, 0.2, 0.15, 0.1)}
        ),
        ConditionalTable(
            "Severity", (), {(): (0.25, 0.2, 0.15, 0.15, 0.1, 0.1, 0.05)}
        ),
        ConditionalTable(
            "OutbreakRisk",
            ("CommunityTransmission", "Transmissibility", "Severity"),
            risk_rows,
        ),
    ]
    return CausalNetwork(variables, edges, cuts)


def default_outbreak_network() -> CausalNetwork:
    """Load the bundled template document (editable without code changes)."""
    text = (
        resources.files("epidss").joinpath("data", TEMPLATE_RESOURCE).read_text("utf-8")
    )
    return loads_network(text)


def install_ensemble_row(
    net: CausalNetwork,
    ensemble: TrajectoryEnsemble,
    statistic: str,
    thresholds: Sequence[float],
    variable: str,
    parent_states: Sequence[str] = (),
) -> CausalNetwork:
    """Replace one table row with bin frequencies from a trajectory ensemble.

    The number of bins (len(thresholds) + 1) must equal the variable's
    cardinality. With empty `parent_states` on a root variable this sets
    the variable's prior; the binding of model statistics to network nodes
    is the caller's choice.
    """
    row = discretize_to_cpt(ensemble, statistic, thresholds)
    card = net.cardinality(variable)
    if row.shape != (card,):
        raise ValueError(
            f"{len(row)} bins do not fit variable {variable!r} with {card} states; "
            f"use {card - 1} thresholds"
        )
    return net.with_cut_row(variable, parent_states, row)


def who_level(
    evidence: Evidence,
    neighboring_region_risk: bool = False,
    net: CausalNetwork | None = None,
) -> WhoLevel:
    """Preparedness level from hard observations on the template nodes.

    Levels are checked most-serious first: confirmed community
    transmission, then local transmission, then imported cases; with no
    cases, high transmissibility (>= 4) in a flagged neighboring region
    still warrants the fourth level; otherwise baseline preparedness.
    """
    template = net if net is not None else default_outbreak_network()
    for var, state in {**evidence.hard, **dict.fromkeys(evidence.soft, None)}.items():
        variable = template.variable(var)  # raises on non-template nodes
        if state is not None:
            variable.index(state)  # raises on unknown state label
    if evidence.hard and evidence_probability(template, Evidence(hard=evidence.hard)) <= 0:
        raise ZeroProbabilityEvidenceError(
            "hard evidence is contradictory under the template network"
        )

    hard = evidence.hard
    if hard.get("CommunityTransmission") == "yes":
        return WhoLevel.COMMUNITY_TRANSMISSION
    if hard.get("LocalTransmission") == "yes":
        return WhoLevel.LOCAL_TRANSMISSION
    if hard.get("ImportedCases") in ("few", "many"):
        return WhoLevel.IMPORTED_CASES
    if (
        hard.get("ImportedCases") == "none"
        and neighboring_region_risk
        and int(hard.get("Transmissibility", "0")) >= 4
    ):
        return WhoLevel.HIGH_RISK_IMPORTED
    return WhoLevel.PREPAREDNESS


@dataclass(frozen=True)
class SeverityAssessment:
    """Transmissibility/severity rating; coarse early, integer when data-rich."""

    stage: str  # "early" or "data_rich"
    transmissibility: int | str
    severity: int | str

    def __post_init__(self):
        if self.stage not in ("early", "data_rich"):
            raise ValueError(f"stage must be 'early' or 'data_rich', got {self.stage!r}")
        if self.stage == "early":
            for value in (self.transmissibility, self.severity):
                if value not in COARSE_LABELS:
                    raise ValueError(
                        f"early-stage ratings must be one of {COARSE_LABELS}, got {value!r}"
                    )
        else:
            t, s = self.transmissibility, self.severity
            if not isinstance(t, int) or not TRANSMISSIBILITY_RANGE[0] <= t <= TRANSMISSIBILITY_RANGE[1]:
                raise ValueError(f"transmissibility must be an int in 1..5, got {t!r}")
            if not isinstance(s, int) or not SEVERITY_RANGE[0] <= s <= SEVERITY_RANGE[1]:
                raise ValueError(f"severity must be an int in 1..7, got {s!r}")


def severity_stage(assessment: SeverityAssessment) -> str:
    """Impact category: one of low, moderate, high, extreme."""
    if assessment.stage == "early":
        if "moderate_high" in (assessment.transmissibility, assessment.severity):
            return "high"
        return "moderate"
    t, s = int(assessment.transmissibility), int(assessment.severity)
    if t <= 2 and s <= 2:
        return "low"
    if t >= 4 and s >= 6:
        return "extreme"
    if t >= 4 or s >= 5:
        return "high"
    return "moderate"


@dataclass(frozen=True)
class EpiSubIndexes:
    """Five national-capacity sub-indexes, each scaled to [0, 1]."""

    public_health_infrastructure: float
    physical_infrastructure: float
    institutional_capacity: float
    economic_resources: float
    public_health_communication: float

    FIELDS = (
        "public_health_infrastructure",
        "physical_infrastructure",
        "institutional_capacity",
        "economic_resources",
        "public_health_communication",
    )

    def __post_init__(self):
        for name in self.FIELDS:
            value = float(getattr(self, name))
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
            object.__setattr__(self, name, value)

    def as_vector(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in self.FIELDS])


def epi_index(sub: EpiSubIndexes, weights: Sequence[float]) -> float:
    """Weighted mean of the five sub-indexes; weights must sum to 1."""
    w = np.asarray(list(weights), dtype=float)
    if w.shape != (5,):
        raise ValueError(f"need exactly 5 weights, got {w.shape}")
    if np.any(w < 0):
        raise ValueError("weights must be non-negative")
    if abs(float(w.sum()) - 1.0) > 1e-9:
        raise ValueError(f"weights sum to {w.sum():g}, expected 1")
    return float(np.dot(w, sub.as_vector()))
