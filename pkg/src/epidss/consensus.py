"""Pool expert posteriors into a group view and measure residual conflict.

Each expert contributes a posterior over the same query variable plus a
weight, given either explicitly or through an evidence grade. Pooling is
the weighted arithmetic mean of the distributions (a linear opinion
pool); conflict is the worst pairwise total-variation distance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .admiralty import AdmiraltyGrade, grade_weight


@dataclass(frozen=True)
class ExpertPosterior:
    """One expert's posterior over the shared query variable."""

    expert_id: str
    posterior: tuple[float, ...]
    weight: float | None = None
    grade: AdmiraltyGrade | None = None

    def __post_init__(self):
        vec = tuple(float(p) for p in self.posterior)
        if any(p < 0 for p in vec):
            raise ValueError(f"posterior of {self.expert_id!r} has negative entries")
        object.__setattr__(self, "posterior", vec)
        if self.weight is not None and self.weight < 0:
            raise ValueError(f"weight of {self.expert_id!r} must be >= 0")

    def effective_weight(self) -> float:
        """Explicit weight if given, else the grade's trust, else 1."""
        if self.weight is not None:
            return float(self.weight)
        if self.grade is not None:
            return grade_weight(self.grade)
        return 1.0


def _stacked(posteriors: list[ExpertPosterior]) -> np.ndarray:
    if not posteriors:
        raise ValueError("need at least one expert posterior")
    lengths = {len(p.posterior) for p in posteriors}
    if len(lengths) != 1:
        raise ValueError(f"posterior lengths differ: {sorted(lengths)}")
    return np.array([p.posterior for p in posteriors], dtype=float)


def pool(posteriors: list[ExpertPosterior], method: str = "linear") -> np.ndarray:
    """Weighted linear opinion pool, normalized to sum exactly 1.

    Unanimous experts get their shared posterior back unchanged.
    """
    if method != "linear":
        raise ValueError(f"unknown pooling method {method!r}; only 'linear' is provided")
    stacked = _stacked(posteriors)
    if np.all(stacked == stacked[0]):
        return stacked[0].copy()
    weights = np.array([p.effective_weight() for p in posteriors], dtype=float)
    total = weights.sum()
    if total <= 0:
        raise ValueError("all expert weights are zero")
    combined = weights @ stacked / total
    return combined / combined.sum()


def conflict(posteriors: list[ExpertPosterior]) -> float:
    """Largest pairwise total-variation distance among the experts."""
    if len(posteriors) < 2:
        raise ValueError("conflict needs at least two expert posteriors")
    stacked = _stacked(posteriors)
    worst = 0.0
    for i in range(len(stacked)):
        for j in range(i + 1, len(stacked)):
            tv = 0.5 * float(np.abs(stacked[i] - stacked[j]).sum())
            worst = max(worst, tv)
    return worst
