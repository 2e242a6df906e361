"""Network interchange format.

A JSON document with three sections:

    {
      "variables": [{"id": "Disease", "states": ["present", "absent"]}, ...],
      "edges": [["Disease", "Test"], ...],
      "cuts": {
        "Disease": {"parents": [], "rows": {"": [0.01, 0.99]}},
        "Test": {"parents": ["Disease"],
                 "rows": {"present": [0.95, 0.05], "absent": [0.02, 0.98]}}
      }
    }

Row keys are the parent states joined with "|" in the table's parent
order (a root variable has the single key ""). Load -> save -> load is
value-identical.
"""

from __future__ import annotations

import json
import warnings
from pathlib import Path
from typing import Any

import numpy as np

from .network import ROW_SUM_TOL, CausalNetwork, ConditionalTable, Variable

RENORMALIZE_WARN_DRIFT = 1e-6


class NetworkFormatError(ValueError):
    """Document does not have the expected sections or shapes."""


def network_to_document(net: CausalNetwork) -> dict[str, Any]:
    """Plain-data representation of a network, ready for json.dump."""
    cuts: dict[str, Any] = {}
    for var_id, table in net.cuts.items():
        rows = {
            "|".join(key): [float(p) for p in row]
            for key, row in table.rows.items()
        }
        cuts[var_id] = {"parents": list(table.parents), "rows": rows}
    return {
        "variables": [{"id": v.id, "states": list(v.states)} for v in net.variables],
        "edges": [[a, b] for a, b in net.edges],
        "cuts": cuts,
    }


def network_from_document(
    doc: dict[str, Any], renormalize: bool = True
) -> CausalNetwork:
    """Parse a document produced by `network_to_document`.

    Rows are renormalized exactly once on load to absorb serialization
    drift; a drift beyond 1e-6 triggers a warning since it suggests the
    document was hand-edited inconsistently.
    """
    for section in ("variables", "edges", "cuts"):
        if section not in doc:
            raise NetworkFormatError(f"document is missing the {section!r} section")

    variables = []
    for entry in doc["variables"]:
        try:
            variables.append(Variable(entry["id"], entry["states"]))
        except (KeyError, TypeError) as exc:
            raise NetworkFormatError(f"bad variable entry {entry!r}") from exc

    edges = []
    for entry in doc["edges"]:
        if len(entry) != 2:
            raise NetworkFormatError(f"bad edge entry {entry!r}")
        edges.append((entry[0], entry[1]))

    tables = []
    for var_id, spec in doc["cuts"].items():
        try:
            parents = list(spec["parents"])
            raw_rows = spec["rows"]
        except (KeyError, TypeError) as exc:
            raise NetworkFormatError(f"bad table entry for {var_id!r}") from exc
        rows = {}
        for key, row in raw_rows.items():
            states = tuple(key.split("|")) if key else ()
            if len(states) != len(parents):
                raise NetworkFormatError(
                    f"row key {key!r} of {var_id!r} does not match its "
                    f"{len(parents)} parents"
                )
            vec = np.asarray(row, dtype=float)
            if renormalize and vec.size:
                total = float(vec.sum())
                drift = abs(total - 1.0)
                # rows already valid to the network tolerance stay bit-identical,
                # which keeps load -> save -> load exact
                if total > 0 and drift > ROW_SUM_TOL:
                    if drift > RENORMALIZE_WARN_DRIFT:
                        warnings.warn(
                            f"row {key!r} of {var_id!r} summed to {total:g}; "
                            f"renormalized on load",
                            stacklevel=2,
                        )
                    vec = vec / total
            rows[states] = vec
        tables.append(ConditionalTable(var_id, parents, rows))

    return CausalNetwork(variables, edges, tables)


def dumps_network(net: CausalNetwork, indent: int | None = 2) -> str:
    return json.dumps(network_to_document(net), indent=indent)


def loads_network(text: str, renormalize: bool = True) -> CausalNetwork:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise NetworkFormatError("top level of a network document must be an object")
    return network_from_document(doc, renormalize=renormalize)


def save_network(net: CausalNetwork, path: str | Path) -> None:
    Path(path).write_text(dumps_network(net) + "\n", encoding="utf-8")


def load_network(path: str | Path, renormalize: bool = True) -> CausalNetwork:
    return loads_network(Path(path).read_text(encoding="utf-8"), renormalize=renormalize)
