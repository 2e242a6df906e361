"""Risk scoring, bias diagnostics, tail measures and sequential updating.

Risk is expected cost: the posterior probability of each state times the
cost of being in it. Bias is the signed mean deviation of repeated
estimates from a reference. Tail risk is the expected shortfall above an
empirical quantile. Sequential adjustment replays graded observations one
at a time, discounting each by its grade.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Literal, Mapping, Sequence

import numpy as np

from .admiralty import GradedEvidence, discount_to_likelihood
from .bayes import (
    CausalNetwork,
    ContradictoryEvidenceError,
    Evidence,
    Posterior,
    merge_evidence,
    posterior_exact,
)

BIAS_DIRECTION_TOL = 1e-9


class UnpricedStateError(KeyError):
    """A posterior state has no cost assigned."""


class ConflictingObservationError(ContradictoryEvidenceError):
    """An observation in a sequence contradicts the evidence before it."""

    def __init__(self, message: str, index: int, source_id: str):
        super().__init__(message)
        self.index = index
        self.source_id = source_id


@dataclass(frozen=True)
class CostModel:
    """Non-negative cost of each (variable, state) pair, in loss units."""

    costs: Mapping[str, Mapping[str, float]]

    def __post_init__(self):
        frozen: dict[str, dict[str, float]] = {}
        for var, states in dict(self.costs).items():
            frozen[var] = {}
            for state, cost in dict(states).items():
                value = float(cost)
                if not np.isfinite(value) or value < 0:
                    raise ValueError(
                        f"cost of ({var!r}, {state!r}) must be finite and >= 0, "
                        f"got {cost}"
                    )
                frozen[var][state] = value
        object.__setattr__(self, "costs", frozen)

    def cost(self, variable: str, state: str) -> float:
        try:
            return self.costs[variable][state]
        except KeyError:
            raise UnpricedStateError(
                f"no cost for state {state!r} of variable {variable!r}"
            ) from None

    def scaled(self, factor: float) -> "CostModel":
        if factor < 0:
            raise ValueError("scale factor must be >= 0")
        return CostModel(
            {v: {s: c * factor for s, c in states.items()}
             for v, states in self.costs.items()}
        )


@dataclass(frozen=True)
class RiskAssessment:
    """Expected cost of a posterior, with its per-state breakdown."""

    variable: str
    risk: float
    contributions: dict[str, float]
    posterior: Posterior
    tail_risk: float | None = None
    tail_quantile: float | None = None


@dataclass(frozen=True)
class BiasReport:
    """Signed systematic error of repeated estimates against a reference."""

    mean_error: float
    direction: Literal["over", "under", "none"]
    n: int


def risk_score(cost: CostModel, posterior: Posterior) -> RiskAssessment:
    """Expected cost under the posterior, contribution-by-state.

    Every state of the posterior's variable must be priced.
    """
    contributions = {}
    for state, prob in zip(posterior.states, posterior.probs):
        contributions[state] = cost.cost(posterior.variable, state) * float(prob)
    return RiskAssessment(
        variable=posterior.variable,
        risk=float(sum(contributions.values())),
        contributions=contributions,
        posterior=posterior,
    )


def bias_estimate(estimates: Sequence[float], reference: float) -> BiasReport:
    """Mean signed error of the estimates; direction at 1e-9 tolerance."""
    values = np.asarray(list(estimates), dtype=float)
    if values.size == 0:
        raise ValueError("bias_estimate needs at least one estimate")
    mean_error = float(values.mean() - reference)
    if mean_error > BIAS_DIRECTION_TOL:
        direction = "over"
    elif mean_error < -BIAS_DIRECTION_TOL:
        direction = "under"
    else:
        direction = "none"
    return BiasReport(mean_error=mean_error, direction=direction, n=int(values.size))


def tail_risk(samples: Sequence[float], q: float) -> float:
    """Expected shortfall: mean of the samples above the empirical
    q-quantile (linear interpolation on order statistics).

    With a single sample no interpolation is possible; the maximum is
    returned with a warning.
    """
    values = np.asarray(list(samples), dtype=float)
    if values.size == 0:
        raise ValueError("tail_risk needs a non-empty sample set")
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must be in (0, 1), got {q}")
    if values.size < 2:
        warnings.warn(
            "tail_risk with fewer than 2 samples falls back to the maximum",
            stacklevel=2,
        )
        return float(values.max())
    threshold = float(np.quantile(values, q))
    tail = values[values > threshold]
    if tail.size == 0:
        # degenerate upper tail (ties at the quantile); keep the boundary
        tail = values[values >= threshold]
    return float(tail.mean())


def sequential_adjust(
    net: CausalNetwork,
    observations: Sequence[GradedEvidence],
    query: str,
) -> list[Posterior]:
    """Posterior trajectory as graded observations arrive one at a time.

    Snapshot 0 is the prior; snapshot i the posterior after the first i
    observations, each discounted by its grade. The final snapshot equals
    applying the whole batch at once. A contradictory observation aborts
    with the index and source of the first offender.
    """
    snapshots = [posterior_exact(net, Evidence.empty(), query)]
    accumulated = Evidence.empty()
    for index, ge in enumerate(observations):
        try:
            accumulated = merge_evidence(
                net, accumulated, discount_to_likelihood(ge, net)
            )
            snapshots.append(posterior_exact(net, accumulated, query))
        except ContradictoryEvidenceError as exc:
            raise ConflictingObservationError(
                f"observation {index} from source {ge.source_id!r} contradicts "
                f"the evidence before it: {exc}",
                index=index,
                source_id=ge.source_id,
            ) from exc
    return snapshots
