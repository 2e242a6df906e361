"""Inference plumbing for scenarios: engine choice, summaries, what-if.

Small networks (elimination width <= 20 variables) run the exact engine;
anything wider falls back to likelihood weighting with n = 100000 and a
seed fixed at scenario creation. The chosen engine and seed are echoed in
every response so any number can be recomputed later.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from ..admiralty import GradedEvidence, discount_to_likelihood
from ..bayes import (
    CausalNetwork,
    ContradictoryEvidenceError,
    Evidence,
    Posterior,
    elimination_width,
    merge_evidence,
    posterior_exact,
    posterior_sampled,
)
from ..risk import CostModel, RiskAssessment, risk_score
from .store import Scenario

EXACT_WIDTH_LIMIT = 20
SAMPLED_N = 100_000


def choose_engine(net: CausalNetwork, seed: int | None = None) -> dict[str, Any]:
    """Engine descriptor persisted with the scenario and echoed in responses."""
    if elimination_width(net) <= EXACT_WIDTH_LIMIT:
        return {"mode": "exact"}
    if seed is None:
        seed = int(np.random.SeedSequence().entropy % (2**32))
    return {"mode": "sampled", "n_samples": SAMPLED_N, "seed": seed}


def run_engine(
    net: CausalNetwork, ev: Evidence, query: str, engine: dict[str, Any]
) -> Posterior:
    if engine.get("mode") == "sampled":
        return posterior_sampled(
            net, ev, query,
            n_samples=int(engine.get("n_samples", SAMPLED_N)),
            seed=int(engine["seed"]),
        )
    return posterior_exact(net, ev, query)


def accumulated_evidence(
    net: CausalNetwork, log: tuple[GradedEvidence, ...] | list[GradedEvidence]
) -> Evidence:
    """Merge a whole evidence log into one discounted evidence set."""
    combined = Evidence.empty()
    for ge in log:
        combined = merge_evidence(net, combined, discount_to_likelihood(ge, net))
    return combined


def posterior_to_payload(post: Posterior) -> dict[str, Any]:
    payload: dict[str, Any] = {"probs": post.as_dict()}
    if post.standard_error is not None:
        payload["standard_error"] = {
            s: float(e) for s, e in zip(post.states, post.standard_error)
        }
    return payload


def evidence_prefix(scenario: Scenario, revision: int | None) -> tuple[GradedEvidence, ...]:
    """Log prefix corresponding to a revision (revision r = first r-1 events)."""
    if revision is None:
        revision = scenario.revision
    if not 1 <= revision <= scenario.revision:
        raise ValueError(
            f"revision {revision} out of range 1..{scenario.revision} "
            f"for scenario {scenario.id!r}"
        )
    return scenario.evidence_log[: revision - 1]


def scenario_summary(scenario: Scenario, revision: int | None = None) -> dict[str, Any]:
    """Posterior of every variable under the (discounted) evidence so far."""
    log = evidence_prefix(scenario, revision)
    evidence = accumulated_evidence(scenario.network, log)
    posteriors = {
        var: posterior_to_payload(
            run_engine(scenario.network, evidence, var, scenario.engine)
        )
        for var in scenario.network.variable_ids
    }
    return {
        "scenario_id": scenario.id,
        "revision": revision if revision is not None else scenario.revision,
        "engine": scenario.engine,
        "posteriors": posteriors,
    }


def query_posterior(
    scenario: Scenario, variable: str, revision: int | None = None
) -> dict[str, Any]:
    log = evidence_prefix(scenario, revision)
    evidence = accumulated_evidence(scenario.network, log)
    post = run_engine(scenario.network, evidence, variable, scenario.engine)
    return {
        "scenario_id": scenario.id,
        "revision": revision if revision is not None else scenario.revision,
        "engine": scenario.engine,
        "variable": variable,
        "posterior": posterior_to_payload(post),
    }


def cost_model_for(
    scenario: Scenario, reference: str | None, variable: str
) -> CostModel | None:
    if reference is None:
        return None
    try:
        spec = scenario.cost_models[reference]
    except KeyError:
        raise KeyError(
            f"scenario {scenario.id!r} has no cost model {reference!r}; "
            f"available: {sorted(scenario.cost_models)}"
        ) from None
    if variable not in spec:
        raise KeyError(
            f"cost model {reference!r} does not price variable {variable!r}"
        )
    return CostModel(spec)


def risk_to_payload(assessment: RiskAssessment) -> dict[str, Any]:
    return {
        "variable": assessment.variable,
        "risk": assessment.risk,
        "contributions": assessment.contributions,
    }


@dataclass(frozen=True)
class WhatIfRequest:
    """Hypothetical evidence overlay; never touches the stored scenario."""

    scenario_id: str
    delta: Evidence
    query: str
    cost_model: str | None = None
    revision: int | None = None


def what_if(scenario: Scenario, request: WhatIfRequest) -> dict[str, Any]:
    """Baseline vs. hypothetical posteriors (and risk) side by side.

    Both branches run the same engine and seed. A delta that contradicts
    the stored evidence fails only the hypothetical branch; the baseline
    is always reported.
    """
    cost = cost_model_for(scenario, request.cost_model, request.query)
    log = evidence_prefix(scenario, request.revision)
    baseline_ev = accumulated_evidence(scenario.network, log)

    def branch(evidence_or_error) -> dict[str, Any]:
        if isinstance(evidence_or_error, Exception):
            return {"posterior": None, "risk": None, "error": str(evidence_or_error)}
        post = run_engine(scenario.network, evidence_or_error, request.query, scenario.engine)
        payload = {"posterior": posterior_to_payload(post), "risk": None, "error": None}
        if cost is not None:
            payload["risk"] = risk_to_payload(risk_score(cost, post))
        return payload

    try:
        hypothetical_ev = merge_evidence(scenario.network, baseline_ev, request.delta)
    except (ContradictoryEvidenceError, ValueError, KeyError) as exc:
        hypothetical_ev = exc

    def guarded(ev) -> dict[str, Any]:
        try:
            return branch(ev)
        except (ContradictoryEvidenceError, ValueError, KeyError) as exc:
            return {"posterior": None, "risk": None, "error": str(exc)}

    return {
        "scenario_id": scenario.id,
        "revision": scenario.revision,
        "engine": scenario.engine,
        "query": request.query,
        "baseline": guarded(baseline_ev),
        "hypothetical": guarded(hypothetical_ev),
    }
