"""Two-axis evidence grading and its use as an inference discount.

A grade pairs source reliability (A..F) with information credibility
(1..6). A (completely reliable) and 1 (confirmed) are best; E and 5 are
worst among judgeable values; F and 6 mean the axis cannot be judged and
carry a neutral weight. Grades render as two-character strings such as
"C4".

The numeric weight tables are shipped defaults: linear 1.0 -> 0.2 over
the judgeable grades, 0.5 for "cannot be judged". They turn a graded hard
observation into a soft likelihood that any inference backend can consume.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone

from .bayes import CausalNetwork, Evidence

RELIABILITY_GRADES = ("A", "B", "C", "D", "E", "F")
CREDIBILITY_GRADES = ("1", "2", "3", "4", "5", "6")

RELIABILITY_WEIGHT = {"A": 1.0, "B": 0.8, "C": 0.6, "D": 0.4, "E": 0.2, "F": 0.5}
CREDIBILITY_WEIGHT = {"1": 1.0, "2": 0.8, "3": 0.6, "4": 0.4, "5": 0.2, "6": 0.5}

# grades at or past these thresholds make a state too uncertain to act on
HIGH_RISK_RELIABILITY = frozenset({"D", "E", "F"})
HIGH_RISK_CREDIBILITY = frozenset({"5", "6"})


@dataclass(frozen=True)
class AdmiraltyGrade:
    """Reliability/credibility pair, e.g. AdmiraltyGrade("C", "4")."""

    reliability: str
    credibility: str

    def __post_init__(self):
        if self.reliability not in RELIABILITY_GRADES:
            raise ValueError(
                f"reliability must be one of {RELIABILITY_GRADES}, got {self.reliability!r}"
            )
        cred = str(self.credibility)
        if cred not in CREDIBILITY_GRADES:
            raise ValueError(
                f"credibility must be one of {CREDIBILITY_GRADES}, got {self.credibility!r}"
            )
        object.__setattr__(self, "credibility", cred)

    @classmethod
    def parse(cls, text: str) -> "AdmiraltyGrade":
        """Parse the two-character form used in files and payloads."""
        if len(text) != 2:
            raise ValueError(f"grade must be two characters like 'C4', got {text!r}")
        return cls(text[0].upper(), text[1])

    def __str__(self) -> str:
        return f"{self.reliability}{self.credibility}"


def grade_weight(grade: AdmiraltyGrade) -> float:
    """Scalar trust in [0, 1]: reliability weight times credibility weight."""
    return RELIABILITY_WEIGHT[grade.reliability] * CREDIBILITY_WEIGHT[grade.credibility]


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


@dataclass(frozen=True)
class GradedEvidence:
    """An observation tagged with its grade, source and arrival time."""

    evidence: Evidence
    grade: AdmiraltyGrade
    source_id: str = "unknown"
    timestamp: datetime = field(default_factory=_utcnow)

    @classmethod
    def hard(
        cls, variable: str, state: str, grade: str | AdmiraltyGrade,
        source_id: str = "unknown",
    ) -> "GradedEvidence":
        if isinstance(grade, str):
            grade = AdmiraltyGrade.parse(grade)
        return cls(Evidence(hard={variable: state}), grade, source_id)


def discount_to_likelihood(ge: GradedEvidence, net: CausalNetwork) -> Evidence:
    """Convert graded observations into soft evidence.

    A hard observation of state k with trust w becomes the likelihood
    vector with 1 at k and (1 - w) elsewhere, i.e. w * one_hot + (1 - w) *
    uninformative. w = 1 reproduces hard evidence, w = 0 carries no
    information. Soft evidence is discounted by the same mixture after
    scaling its peak to 1. The result composes with any inference backend
    (it is plain Pearl virtual evidence).
    """
    w = grade_weight(ge.grade)
    soft: dict[str, tuple[float, ...]] = {}
    for var, state in ge.evidence.hard.items():
        variable = net.variable(var)
        observed = variable.index(state)
        soft[var] = tuple(
            1.0 if k == observed else 1.0 - w for k in range(variable.cardinality)
        )
    for var, lik in ge.evidence.soft.items():
        card = net.cardinality(var)
        if len(lik) != card:
            raise ValueError(
                f"soft evidence on {var!r} has length {len(lik)}, expected {card}"
            )
        peak = max(lik)
        scaled = [x / peak for x in lik]
        soft[var] = tuple(w * x + (1.0 - w) for x in scaled)
    return Evidence(soft=soft)


@dataclass(frozen=True)
class SystemState:
    """A labelled situation under assessment, e.g. SystemState("S3", grade)."""

    id: str
    grade: AdmiraltyGrade


@dataclass
class StatePartition:
    """Exhaustive, disjoint split of assessed states."""

    usable: list[SystemState]
    high_risk: list[SystemState]

    def usable_ids(self) -> set[str]:
        return {s.id for s in self.usable}

    def high_risk_ids(self) -> set[str]:
        return {s.id for s in self.high_risk}


def is_high_risk(grade: AdmiraltyGrade) -> bool:
    return (
        grade.reliability in HIGH_RISK_RELIABILITY
        or grade.credibility in HIGH_RISK_CREDIBILITY
    )


def classify_states(states: list[SystemState]) -> StatePartition:
    """Split states into usable vs. high-risk by their grade alone.

    High risk means reliability D/E/F or credibility 5/6: the source is
    doubtfully reliable or the information cannot be believed, so acting
    on the state is itself a risk.
    """
    if not states:
        raise ValueError("classify_states needs at least one state")
    seen: set[str] = set()
    for s in states:
        if s.id in seen:
            raise ValueError(f"duplicate state id {s.id!r}")
        seen.add(s.id)
    partition = StatePartition(usable=[], high_risk=[])
    for s in states:
        (partition.high_risk if is_high_risk(s.grade) else partition.usable).append(s)
    return partition
