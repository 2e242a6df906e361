"""Scenario lifecycle service: persistence plus inference, one facade.

`ScenarioService` is what both the HTTP API and the CLI talk to; it owns
a `ScenarioStore` directory and wires the inference engine, evidence
discounting and risk scoring behind scenario-level operations.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

from ..admiralty import GradedEvidence
from ..bayes import Evidence
from .engine import (
    WhatIfRequest,
    choose_engine,
    query_posterior,
    scenario_summary,
    what_if,
)
from .store import (
    InvalidNetworkError,
    Scenario,
    ScenarioStore,
    UnknownScenarioError,
)

__all__ = [
    "InvalidNetworkError",
    "Scenario",
    "ScenarioService",
    "ScenarioStore",
    "UnknownScenarioError",
    "WhatIfRequest",
]


class ScenarioService:
    def __init__(self, store_dir: str | Path):
        self.store = ScenarioStore(store_dir)

    # -- lifecycle ----------------------------------------------------

    def create_scenario(
        self,
        network_document: dict[str, Any],
        name: str,
        cost_models: dict[str, dict[str, dict[str, float]]] | None = None,
    ) -> dict[str, Any]:
        from ..bayes import network_from_document

        network = network_from_document(network_document)
        scenario = self.store.create(
            network_document,
            name,
            cost_models=cost_models,
            engine=choose_engine(network),
        )
        return {
            "id": scenario.id,
            "name": scenario.name,
            "revision": scenario.revision,
            "engine": scenario.engine,
        }

    def scenario_document(self, scenario_id: str) -> dict[str, Any]:
        return self.store.get(scenario_id).to_document()

    def list_scenarios(self) -> list[dict[str, Any]]:
        out = []
        for scenario_id in self.store.list_ids():
            scenario = self.store.get(scenario_id)
            out.append(
                {
                    "id": scenario.id,
                    "name": scenario.name,
                    "revision": scenario.revision,
                    "updated_at": scenario.updated_at,
                }
            )
        return out

    # -- evidence and queries ------------------------------------------

    def submit_evidence(self, scenario_id: str, ge: GradedEvidence) -> dict[str, Any]:
        """Validate, append and summarize in one locked step.

        Contradictory evidence (zero-probability joint) raises and leaves
        the log unchanged.
        """
        captured: dict[str, Any] = {}

        def validate(candidate: Scenario) -> None:
            captured["summary"] = scenario_summary(candidate)

        updated = self.store.append_evidence(scenario_id, ge, validate=validate)
        return {
            "scenario_id": updated.id,
            "revision": updated.revision,
            "engine": updated.engine,
            "summary": captured["summary"],
        }

    def summary(self, scenario_id: str, revision: int | None = None) -> dict[str, Any]:
        return scenario_summary(self.store.get(scenario_id), revision=revision)

    def posterior(
        self, scenario_id: str, variable: str, revision: int | None = None
    ) -> dict[str, Any]:
        return query_posterior(self.store.get(scenario_id), variable, revision=revision)

    def what_if(
        self,
        scenario_id: str,
        delta: Evidence,
        query: str,
        cost_model: str | None = None,
        revision: int | None = None,
    ) -> dict[str, Any]:
        scenario = self.store.get(scenario_id)
        request = WhatIfRequest(
            scenario_id=scenario_id,
            delta=delta,
            query=query,
            cost_model=cost_model,
            revision=revision,
        )
        return what_if(scenario, request)
