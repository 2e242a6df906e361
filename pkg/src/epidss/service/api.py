"""HTTP API over the scenario service, versioned under /v1.

All payloads use the same JSON documents as the store and the CLI's
--json mode. Run with e.g.

    uvicorn --factory "epidss.service.api:create_app"

The store directory comes from EPIDSS_STORE (default ./scenarios).
"""

from __future__ import annotations

import os
from typing import Any

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from ..admiralty import AdmiraltyGrade, GradedEvidence, SystemState, classify_states
from ..bayes import (
    ContradictoryEvidenceError,
    Evidence,
    NetworkFormatError,
    SamplingError,
    network_to_document,
)
from ..consensus import ExpertPosterior, conflict, pool
from ..preparedness import default_outbreak_network
from . import ScenarioService
from .store import InvalidNetworkError, UnknownScenarioError

DEFAULT_STORE_DIR = "./scenarios"


class CreateScenarioBody(BaseModel):
    name: str
    network: dict[str, Any]
    cost_models: dict[str, dict[str, dict[str, float]]] | None = None


class EvidenceBody(BaseModel):
    grade: str
    variable: str | None = None
    state: str | None = None
    soft: dict[str, list[float]] | None = None
    source_id: str = "api"


class WhatIfBody(BaseModel):
    query: str
    assignments: dict[str, str] = Field(default_factory=dict, alias="set")
    soft: dict[str, list[float]] = Field(default_factory=dict)
    cost_model: str | None = None
    revision: int | None = None

    model_config = {"populate_by_name": True}


class ExpertPosteriorBody(BaseModel):
    expert_id: str
    posterior: list[float]
    weight: float | None = None
    grade: str | None = None


class ConsensusBody(BaseModel):
    posteriors: list[ExpertPosteriorBody]
    method: str = "linear"


class GradedStateBody(BaseModel):
    id: str
    grade: str


class ClassifyBody(BaseModel):
    states: list[GradedStateBody]


def _evidence_from_body(body: EvidenceBody) -> GradedEvidence:
    hard = {}
    if body.variable is not None:
        if body.state is None:
            raise ValueError("evidence with a variable needs a state")
        hard[body.variable] = body.state
    soft = {v: tuple(lik) for v, lik in (body.soft or {}).items()}
    if not hard and not soft:
        raise ValueError("evidence body carries no observation")
    return GradedEvidence(
        evidence=Evidence(hard=hard, soft=soft),
        grade=AdmiraltyGrade.parse(body.grade),
        source_id=body.source_id,
    )


def create_app(store_dir: str | None = None) -> FastAPI:
    service = ScenarioService(store_dir or os.environ.get("EPIDSS_STORE", DEFAULT_STORE_DIR))
    app = FastAPI(title="epidss scenario service", version="1")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],  # auth is out of scope; lock down at the proxy
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def run(fn, *args, **kwargs):
        """Translate domain errors into HTTP statuses."""
        try:
            return fn(*args, **kwargs)
        except UnknownScenarioError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except (ContradictoryEvidenceError, SamplingError) as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        except (InvalidNetworkError, NetworkFormatError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except (ValueError, KeyError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.get("/v1/health")
    def health() -> dict[str, str]:
        return {"status": "ok"}

    @app.get("/v1/templates/outbreak")
    def outbreak_template() -> dict[str, Any]:
        return network_to_document(default_outbreak_network())

    @app.post("/v1/scenarios", status_code=201)
    def create_scenario(body: CreateScenarioBody) -> dict[str, Any]:
        return run(
            service.create_scenario, body.network, body.name,
            cost_models=body.cost_models,
        )

    @app.get("/v1/scenarios")
    def list_scenarios() -> dict[str, Any]:
        return {"scenarios": service.list_scenarios()}

    @app.get("/v1/scenarios/{scenario_id}")
    def get_scenario(scenario_id: str) -> dict[str, Any]:
        return run(service.scenario_document, scenario_id)

    @app.post("/v1/scenarios/{scenario_id}/evidence")
    def submit_evidence(scenario_id: str, body: EvidenceBody) -> dict[str, Any]:
        ge = run(_evidence_from_body, body)
        return run(service.submit_evidence, scenario_id, ge)

    @app.get("/v1/scenarios/{scenario_id}/summary")
    def summary(scenario_id: str, revision: int | None = None) -> dict[str, Any]:
        return run(service.summary, scenario_id, revision=revision)

    @app.get("/v1/scenarios/{scenario_id}/posterior")
    def posterior(
        scenario_id: str, variable: str, revision: int | None = None
    ) -> dict[str, Any]:
        return run(service.posterior, scenario_id, variable, revision=revision)

    @app.post("/v1/scenarios/{scenario_id}/what-if")
    def what_if(scenario_id: str, body: WhatIfBody) -> dict[str, Any]:
        delta = run(
            Evidence,
            hard=body.assignments,
            soft={v: tuple(lik) for v, lik in body.soft.items()},
        )
        return run(
            service.what_if, scenario_id, delta, body.query,
            cost_model=body.cost_model, revision=body.revision,
        )

    @app.post("/v1/consensus")
    def consensus(body: ConsensusBody) -> dict[str, Any]:
        def build() -> dict[str, Any]:
            experts = [
                ExpertPosterior(
                    expert_id=p.expert_id,
                    posterior=tuple(p.posterior),
                    weight=p.weight,
                    grade=AdmiraltyGrade.parse(p.grade) if p.grade else None,
                )
                for p in body.posteriors
            ]
            pooled = pool(experts, method=body.method)
            return {
                "pooled": pooled.tolist(),
                "conflict": conflict(experts) if len(experts) >= 2 else 0.0,
                "experts": [p.expert_id for p in body.posteriors],
            }

        return run(build)

    @app.post("/v1/classify")
    def classify(body: ClassifyBody) -> dict[str, Any]:
        def build() -> dict[str, Any]:
            states = [
                SystemState(s.id, AdmiraltyGrade.parse(s.grade)) for s in body.states
            ]
            partition = classify_states(states)
            return {
                "usable": sorted(partition.usable_ids()),
                "high_risk": sorted(partition.high_risk_ids()),
                "grades": {s.id: s.grade for s in body.states},
            }

        return run(build)

    return app
