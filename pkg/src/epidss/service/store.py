"""Scenario persistence: one JSON document per scenario, atomic writes.

A scenario bundles a validated network, an append-only log of graded
evidence, and named cost models. The only mutation after creation is
appending evidence, so revision r corresponds exactly to the first r - 1
log entries; any past revision can be reconstructed by replaying a log
prefix. Documents are written to a temporary file, fsynced and renamed
into place, so a reader never sees a torn document. Mutations take a
per-scenario file lock; reads need no lock.
"""

from __future__ import annotations

import json
import os
import tempfile
import uuid
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from filelock import FileLock

from ..admiralty import AdmiraltyGrade, GradedEvidence
from ..bayes import (
    CausalNetwork,
    Evidence,
    network_from_document,
    network_to_document,
    validate_network,
)


class UnknownScenarioError(KeyError):
    """No scenario with the requested id in the store."""


class InvalidNetworkError(ValueError):
    """Submitted network document failed validation."""

    def __init__(self, violations: list[str]):
        super().__init__("invalid network: " + "; ".join(violations))
        self.violations = violations


def _utcnow_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


def graded_evidence_to_document(ge: GradedEvidence) -> dict[str, Any]:
    return {
        "hard": dict(ge.evidence.hard),
        "soft": {v: list(lik) for v, lik in ge.evidence.soft.items()},
        "grade": str(ge.grade),
        "source_id": ge.source_id,
        "timestamp": ge.timestamp.isoformat(),
    }


def graded_evidence_from_document(doc: dict[str, Any]) -> GradedEvidence:
    return GradedEvidence(
        evidence=Evidence(
            hard=doc.get("hard", {}),
            soft={v: tuple(lik) for v, lik in doc.get("soft", {}).items()},
        ),
        grade=AdmiraltyGrade.parse(doc["grade"]),
        source_id=doc.get("source_id", "unknown"),
        timestamp=datetime.fromisoformat(doc["timestamp"]),
    )


@dataclass(frozen=True)
class Scenario:
    """In-memory view of one stored scenario document."""

    id: str
    name: str
    revision: int
    created_at: str
    updated_at: str
    network: CausalNetwork
    evidence_log: tuple[GradedEvidence, ...]
    cost_models: dict[str, dict[str, dict[str, float]]]
    engine: dict[str, Any]

    def to_document(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "name": self.name,
            "revision": self.revision,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
            "network": network_to_document(self.network),
            "evidence_log": [graded_evidence_to_document(g) for g in self.evidence_log],
            "cost_models": self.cost_models,
            "engine": self.engine,
        }

    @classmethod
    def from_document(cls, doc: dict[str, Any]) -> "Scenario":
        return cls(
            id=doc["id"],
            name=doc.get("name", ""),
            revision=int(doc["revision"]),
            created_at=doc["created_at"],
            updated_at=doc["updated_at"],
            network=network_from_document(doc["network"]),
            evidence_log=tuple(
                graded_evidence_from_document(d) for d in doc.get("evidence_log", [])
            ),
            cost_models=doc.get("cost_models", {}),
            engine=doc.get("engine", {"mode": "exact"}),
        )


class ScenarioStore:
    """Directory of scenario documents with single-writer mutations."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, scenario_id: str) -> Path:
        if not scenario_id.replace("-", "").isalnum():
            raise UnknownScenarioError(f"malformed scenario id {scenario_id!r}")
        return self.root / f"{scenario_id}.json"

    def _lock(self, scenario_id: str) -> FileLock:
        return FileLock(str(self.root / f"{scenario_id}.lock"))

    def _write_atomic(self, scenario: Scenario) -> None:
        path = self._path(scenario.id)
        payload = json.dumps(scenario.to_document(), indent=2)
        fd, tmp_name = tempfile.mkstemp(
            dir=self.root, prefix=f".{scenario.id}.", suffix=".tmp"
        )
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(payload + "\n")
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp_name, path)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise

    # -- lifecycle ------------------------------------------------------

    def create(
        self,
        network_document: dict[str, Any],
        name: str,
        cost_models: dict[str, dict[str, dict[str, float]]] | None = None,
        engine: dict[str, Any] | None = None,
    ) -> Scenario:
        network = network_from_document(network_document)
        report = validate_network(network)
        if not report.ok:
            raise InvalidNetworkError(report.violations)
        now = _utcnow_iso()
        scenario = Scenario(
            id=uuid.uuid4().hex[:12],
            name=name,
            revision=1,
            created_at=now,
            updated_at=now,
            network=network,
            evidence_log=(),
            cost_models=cost_models or {},
            engine=engine or {"mode": "exact"},
        )
        with self._lock(scenario.id):
            self._write_atomic(scenario)
        return scenario

    def get(self, scenario_id: str) -> Scenario:
        path = self._path(scenario_id)
        if not path.exists():
            raise UnknownScenarioError(f"no scenario {scenario_id!r}")
        with open(path, encoding="utf-8") as handle:
            return Scenario.from_document(json.load(handle))

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.json"))

    def append_evidence(
        self, scenario_id: str, ge: GradedEvidence, validate=None
    ) -> Scenario:
        """Append one graded observation, bumping the revision.

        `validate`, when given, runs on the candidate scenario under the
        write lock; if it raises, nothing is persisted and the log stays
        unchanged.
        """
        with self._lock(scenario_id):
            scenario = self.get(scenario_id)
            updated = replace(
                scenario,
                revision=scenario.revision + 1,
                updated_at=_utcnow_iso(),
                evidence_log=(*scenario.evidence_log, ge),
            )
            if validate is not None:
                validate(updated)
            self._write_atomic(updated)
        return updated
