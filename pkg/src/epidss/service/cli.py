"""Command-line front end for the scenario service.

The store directory comes from --store or the EPIDSS_STORE environment
variable. --json switches every command to emit the same documents the
HTTP API returns.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from ..admiralty import AdmiraltyGrade, GradedEvidence, SystemState, classify_states
from ..bayes import (
    ContradictoryEvidenceError,
    Evidence,
    NetworkFormatError,
    network_to_document,
)
from ..consensus import ExpertPosterior, conflict, pool
from ..preparedness import default_outbreak_network
from . import ScenarioService
from .store import InvalidNetworkError, UnknownScenarioError

HANDLED_ERRORS = (
    ContradictoryEvidenceError,
    InvalidNetworkError,
    NetworkFormatError,
    UnknownScenarioError,
    ValueError,
    KeyError,
)


class Context:
    def __init__(self, store_dir: str, as_json: bool):
        self.service = ScenarioService(store_dir)
        self.as_json = as_json

    def emit(self, document, human=None) -> None:
        if self.as_json or human is None:
            click.echo(json.dumps(document, indent=2))
        else:
            click.echo(human)


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


def _format_posteriors(posteriors: dict) -> str:
    lines = []
    for var, payload in posteriors.items():
        probs = ", ".join(f"{s}={p:.4f}" for s, p in payload["probs"].items())
        lines.append(f"  {var}: {probs}")
    return "\n".join(lines)


@click.group()
@click.option(
    "--store", envvar="EPIDSS_STORE", default="./scenarios", show_default=True,
    help="Scenario store directory (env: EPIDSS_STORE).",
)
@click.option("--json", "as_json", is_flag=True, help="Emit machine-readable documents.")
@click.pass_context
def main(ctx: click.Context, store: str, as_json: bool) -> None:
    """Decision support scenarios: networks, graded evidence, queries."""
    ctx.obj = Context(store, as_json)


@main.group()
def scenario() -> None:
    """Create and inspect scenarios."""


@scenario.command("new")
@click.option("--network", "network_path", type=click.Path(exists=True), default=None,
              help="Network document; defaults to the bundled outbreak template.")
@click.option("--name", required=True)
@click.option("--costs", "costs_path", type=click.Path(exists=True), default=None,
              help="JSON file of named cost models.")
@click.pass_obj
def scenario_new(obj: Context, network_path, name, costs_path) -> None:
    if network_path is None:
        document = network_to_document(default_outbreak_network())
    else:
        document = json.loads(Path(network_path).read_text(encoding="utf-8"))
    cost_models = (
        json.loads(Path(costs_path).read_text(encoding="utf-8")) if costs_path else None
    )
    try:
        created = obj.service.create_scenario(document, name, cost_models=cost_models)
    except HANDLED_ERRORS as exc:
        _fail(exc)
    obj.emit(created, human=f"created scenario {created['id']} (revision 1)")


@scenario.command("show")
@click.argument("scenario_id")
@click.pass_obj
def scenario_show(obj: Context, scenario_id) -> None:
    try:
        document = obj.service.scenario_document(scenario_id)
    except HANDLED_ERRORS as exc:
        _fail(exc)
    human = (
        f"scenario {document['id']} ({document['name']!r})\n"
        f"  revision: {document['revision']}\n"
        f"  engine: {document['engine']}\n"
        f"  evidence events: {len(document['evidence_log'])}\n"
        f"  variables: {', '.join(v['id'] for v in document['network']['variables'])}"
    )
    obj.emit(document, human=human)


@scenario.command("list")
@click.pass_obj
def scenario_list(obj: Context) -> None:
    scenarios = obj.service.list_scenarios()
    human = "\n".join(
        f"{s['id']}  rev {s['revision']}  {s['name']}" for s in scenarios
    ) or "(no scenarios)"
    obj.emit({"scenarios": scenarios}, human=human)


@main.group()
def evidence() -> None:
    """Feed graded observations into a scenario."""


@evidence.command("add")
@click.argument("scenario_id")
@click.option("--var", "variable", required=True)
@click.option("--state", required=True)
@click.option("--grade", required=True, help='Admiralty grade, e.g. "C4".')
@click.option("--source", "source_id", default="cli", show_default=True)
@click.pass_obj
def evidence_add(obj: Context, scenario_id, variable, state, grade, source_id) -> None:
    try:
        ge = GradedEvidence.hard(variable, state, grade, source_id=source_id)
        result = obj.service.submit_evidence(scenario_id, ge)
    except HANDLED_ERRORS as exc:
        _fail(exc)
    human = (
        f"revision {result['revision']} after {variable}={state} [{grade}]\n"
        + _format_posteriors(result["summary"]["posteriors"])
    )
    obj.emit(result, human=human)


@main.command("query")
@click.argument("scenario_id")
@click.option("--var", "variable", required=True)
@click.option("--revision", type=int, default=None)
@click.pass_obj
def query(obj: Context, scenario_id, variable, revision) -> None:
    try:
        result = obj.service.posterior(scenario_id, variable, revision=revision)
    except HANDLED_ERRORS as exc:
        _fail(exc)
    probs = result["posterior"]["probs"]
    human = f"{variable} @ revision {result['revision']}: " + ", ".join(
        f"{s}={p:.4f}" for s, p in probs.items()
    )
    obj.emit(result, human=human)


def _parse_assignments(pairs: tuple[str, ...]) -> dict[str, str]:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"--set expects Node=state, got {pair!r}")
        var, state = pair.split("=", 1)
        out[var.strip()] = state.strip()
    return out


@main.command("whatif")
@click.argument("scenario_id")
@click.option("--set", "assignments", multiple=True, help="Hypothetical Node=state.")
@click.option("--query", "query_var", required=True)
@click.option("--cost-model", default=None)
@click.pass_obj
def whatif(obj: Context, scenario_id, assignments, query_var, cost_model) -> None:
    try:
        delta = Evidence(hard=_parse_assignments(assignments))
        result = obj.service.what_if(
            scenario_id, delta, query_var, cost_model=cost_model
        )
    except HANDLED_ERRORS as exc:
        _fail(exc)

    def side(label: str, branch: dict) -> str:
        if branch["error"]:
            return f"  {label}: error: {branch['error']}"
        probs = ", ".join(f"{s}={p:.4f}" for s, p in branch["posterior"]["probs"].items())
        risk = f"  risk={branch['risk']['risk']:.4f}" if branch["risk"] else ""
        return f"  {label}: {probs}{risk}"

    human = (
        f"what-if on {query_var} (revision {result['revision']} unchanged)\n"
        + side("baseline    ", result["baseline"])
        + "\n"
        + side("hypothetical", result["hypothetical"])
    )
    obj.emit(result, human=human)


@main.command("consensus")
@click.option(
    "--inputs", "inputs_path", required=True, type=click.Path(exists=True),
    help="JSON list of {expert_id, posterior, weight? or grade?}.",
)
@click.option("--method", default="linear", show_default=True)
@click.pass_obj
def consensus_cmd(obj: Context, inputs_path, method) -> None:
    try:
        entries = json.loads(Path(inputs_path).read_text(encoding="utf-8"))
        experts = [
            ExpertPosterior(
                expert_id=e["expert_id"],
                posterior=tuple(e["posterior"]),
                weight=e.get("weight"),
                grade=AdmiraltyGrade.parse(e["grade"]) if e.get("grade") else None,
            )
            for e in entries
        ]
        pooled = pool(experts, method=method)
        document = {
            "pooled": pooled.tolist(),
            "conflict": conflict(experts) if len(experts) >= 2 else 0.0,
            "experts": [e.expert_id for e in experts],
        }
    except HANDLED_ERRORS as exc:
        _fail(exc)
    human = (
        f"pooled: {[round(p, 4) for p in document['pooled']]}\n"
        f"conflict: {document['conflict']:.4f}"
    )
    obj.emit(document, human=human)


@main.command("classify")
@click.option(
    "--states", "states_path", required=True, type=click.Path(exists=True),
    help='JSON list of {"id": ..., "grade": "C4"}.',
)
@click.pass_obj
def classify_cmd(obj: Context, states_path) -> None:
    try:
        entries = json.loads(Path(states_path).read_text(encoding="utf-8"))
        states = [SystemState(e["id"], AdmiraltyGrade.parse(e["grade"])) for e in entries]
        partition = classify_states(states)
        document = {
            "usable": sorted(partition.usable_ids()),
            "high_risk": sorted(partition.high_risk_ids()),
        }
    except HANDLED_ERRORS as exc:
        _fail(exc)
    human = (
        f"usable:    {', '.join(document['usable']) or '(none)'}\n"
        f"high risk: {', '.join(document['high_risk']) or '(none)'}"
    )
    obj.emit(document, human=human)


@main.command("template")
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Write the bundled outbreak template document here.")
@click.pass_obj
def template(obj: Context, out_path) -> None:
    document = network_to_document(default_outbreak_network())
    if out_path:
        Path(out_path).write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")
        obj.emit({"written": out_path}, human=f"template written to {out_path}")
    else:
        click.echo(json.dumps(document, indent=2))


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.pass_obj
def serve(obj: Context, host, port) -> None:
    """Run the HTTP API (requires uvicorn)."""
    try:
        import uvicorn
    except ImportError:
        _fail(RuntimeError("uvicorn is not installed; pip install epidss[serve]"))
    from .api import create_app

    uvicorn.run(create_app(str(obj.service.store.root)), host=host, port=port)
