"""Discrete causal networks with per-node conditional probability tables.

A network is a DAG of categorical variables. Each variable owns one
conditional table indexed by the full cartesian product of its parents'
states, so the network encodes the factored joint
P(X) = prod_i P(x_i | parents(x_i)).

Networks are immutable after construction: every transforming operation
returns a new instance, which makes them safe to share across concurrent
queries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

ROW_SUM_TOL = 1e-9


class ContradictoryEvidenceError(ValueError):
    """Evidence set assigns zero probability to every world."""


class ZeroProbabilityEvidenceError(ContradictoryEvidenceError):
    """Observed evidence has probability zero under the network."""


@dataclass(frozen=True)
class Variable:
    """A named categorical variable with an ordered set of state labels."""

    id: str
    states: tuple[str, ...]

    def __init__(self, id: str, states: Sequence[str]):
        object.__setattr__(self, "id", str(id))
        object.__setattr__(self, "states", tuple(str(s) for s in states))

    @property
    def cardinality(self) -> int:
        return len(self.states)

    def index(self, state: str) -> int:
        try:
            return self.states.index(state)
        except ValueError:
            raise ValueError(
                f"unknown state {state!r} for variable {self.id!r}; "
                f"expected one of {list(self.states)}"
            ) from None


class ConditionalTable:
    """Conditional probability rows for one variable.

    Rows are keyed by assignments to ``parents`` (a tuple of state labels,
    in parent order). A variable without parents has a single row keyed by
    the empty tuple.
    """

    def __init__(
        self,
        variable: str,
        parents: Sequence[str],
        rows: Mapping[Sequence[str], Sequence[float]],
    ):
        self.variable = str(variable)
        self.parents = tuple(str(p) for p in parents)
        self.rows: dict[tuple[str, ...], np.ndarray] = {
            tuple(str(s) for s in key): np.asarray(row, dtype=float)
            for key, row in rows.items()
        }

    def row(self, parent_states: Sequence[str]) -> np.ndarray:
        key = tuple(parent_states)
        try:
            return self.rows[key]
        except KeyError:
            raise KeyError(
                f"no row for parent assignment {key} in table of {self.variable!r}"
            ) from None

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"ConditionalTable({self.variable!r}, parents={self.parents})"


def _prior_table(variable: str, probs: Sequence[float]) -> ConditionalTable:
    return ConditionalTable(variable, (), {(): probs})


class CausalNetwork:
    """Immutable DAG of variables, edges and conditional tables."""

    def __init__(
        self,
        variables: Iterable[Variable],
        edges: Iterable[tuple[str, str]] = (),
        cuts: Iterable[ConditionalTable] = (),
    ):
        self.variables: tuple[Variable, ...] = tuple(variables)
        self.edges: tuple[tuple[str, str], ...] = tuple(
            (str(a), str(b)) for a, b in edges
        )
        self.cuts: dict[str, ConditionalTable] = {}
        for table in cuts:
            # last table wins; duplicates are reported by validate_network
            self.cuts[table.variable] = table

        self._vars: dict[str, Variable] = {}
        for v in self.variables:
            self._vars.setdefault(v.id, v)
        self._parents: dict[str, list[str]] = {v.id: [] for v in self.variables}
        self._children: dict[str, list[str]] = {v.id: [] for v in self.variables}
        for parent, child in self.edges:
            if parent in self._parents and child in self._parents:
                self._parents[child].append(parent)
                self._children[parent].append(child)
        self._topo = self._topological_order()
        self._tensors: dict[str, np.ndarray] = {}

    # -- structure ----------------------------------------------------

    def variable(self, var_id: str) -> Variable:
        try:
            return self._vars[var_id]
        except KeyError:
            raise KeyError(f"unknown variable {var_id!r}") from None

    def __contains__(self, var_id: str) -> bool:
        return var_id in self._vars

    @property
    def variable_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.variables)

    def parents(self, var_id: str) -> tuple[str, ...]:
        return tuple(self._parents[var_id])

    def children(self, var_id: str) -> tuple[str, ...]:
        return tuple(self._children[var_id])

    def cardinality(self, var_id: str) -> int:
        return self.variable(var_id).cardinality

    def _topological_order(self) -> tuple[str, ...] | None:
        """Kahn's algorithm; None when the edge set has a cycle."""
        indegree = {v.id: 0 for v in self.variables}
        for _, child in self.edges:
            if child in indegree:
                indegree[child] += 1
        ready = [v for v, d in indegree.items() if d == 0]
        order: list[str] = []
        while ready:
            node = ready.pop()
            order.append(node)
            for child in self._children.get(node, ()):
                indegree[child] -= 1
                if indegree[child] == 0:
                    ready.append(child)
        if len(order) != len(indegree):
            return None
        return tuple(order)

    @property
    def topological_order(self) -> tuple[str, ...]:
        if self._topo is None:
            raise ValueError("network has a cycle; no topological order")
        return self._topo

    @property
    def is_acyclic(self) -> bool:
        return self._topo is not None

    # -- tables -------------------------------------------------------

    def table(self, var_id: str) -> ConditionalTable:
        try:
            return self.cuts[var_id]
        except KeyError:
            raise KeyError(f"variable {var_id!r} has no conditional table") from None

    def table_tensor(self, var_id: str) -> np.ndarray:
        """Dense array view of a table, axes = (*table.parents, var)."""
        cached = self._tensors.get(var_id)
        if cached is not None:
            return cached
        table = self.table(var_id)
        shape = [self.cardinality(p) for p in table.parents]
        shape.append(self.cardinality(var_id))
        tensor = np.zeros(shape, dtype=float)
        parent_states = [self.variable(p).states for p in table.parents]
        for combo in itertools.product(*parent_states):
            idx = tuple(
                self.variable(p).index(s) for p, s in zip(table.parents, combo)
            )
            tensor[idx] = table.row(combo)
        self._tensors[var_id] = tensor
        return tensor

    def with_cut(self, table: ConditionalTable) -> "CausalNetwork":
        """Copy of the network with one conditional table replaced."""
        if table.variable not in self._vars:
            raise KeyError(f"unknown variable {table.variable!r}")
        tables = {t.variable: t for t in self.cuts.values()}
        tables[table.variable] = table
        return CausalNetwork(self.variables, self.edges, tables.values())

    def with_cut_row(
        self,
        var_id: str,
        parent_states: Sequence[str],
        row: Sequence[float],
    ) -> "CausalNetwork":
        """Copy of the network with a single table row replaced.

        For a root variable pass an empty ``parent_states``; the row then
        acts as the variable's prior.
        """
        old = self.table(var_id)
        key = tuple(parent_states)
        if key not in old.rows:
            raise KeyError(f"no row {key} in table of {var_id!r}")
        rows = dict(old.rows)
        rows[key] = np.asarray(row, dtype=float)
        return self.with_cut(ConditionalTable(var_id, old.parents, rows))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return (
            f"CausalNetwork({len(self.variables)} variables, "
            f"{len(self.edges)} edges)"
        )


@dataclass(frozen=True)
class Evidence:
    """Observations to condition on.

    ``hard`` maps a variable to one observed state. ``soft`` maps a
    variable to a likelihood vector over its states (non-negative, not all
    zero; it need not sum to 1). A variable may appear in at most one of
    the two maps.
    """

    hard: Mapping[str, str] = field(default_factory=dict)
    soft: Mapping[str, tuple[float, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "hard", {str(k): str(v) for k, v in dict(self.hard).items()}
        )
        softened: dict[str, tuple[float, ...]] = {}
        for var, lik in dict(self.soft).items():
            vec = tuple(float(x) for x in lik)
            if any(x < 0 for x in vec):
                raise ValueError(f"negative likelihood entry for {var!r}: {vec}")
            if not any(x > 0 for x in vec):
                raise ValueError(f"all-zero likelihood for {var!r}")
            softened[str(var)] = vec
        object.__setattr__(self, "soft", softened)
        overlap = set(self.hard) & set(self.soft)
        if overlap:
            raise ValueError(
                f"variables in both hard and soft evidence: {sorted(overlap)}"
            )

    @classmethod
    def empty(cls) -> "Evidence":
        return cls()

    @classmethod
    def observed(cls, **assignments: str) -> "Evidence":
        return cls(hard=assignments)

    @property
    def is_empty(self) -> bool:
        return not self.hard and not self.soft

    def variables(self) -> set[str]:
        return set(self.hard) | set(self.soft)


@dataclass
class ValidationReport:
    """Outcome of `validate_network`: empty `violations` means valid."""

    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, message: str) -> None:
        self.violations.append(message)

    def __repr__(self) -> str:
        if self.ok:
            return "ValidationReport(ok)"
        return "ValidationReport(\n  " + "\n  ".join(self.violations) + "\n)"


def validate_network(net: CausalNetwork) -> ValidationReport:
    """Check every structural invariant; report violations, never raise."""
    report = ValidationReport()

    seen: set[str] = set()
    for v in net.variables:
        if v.id in seen:
            report.add(f"duplicate variable id {v.id!r}")
        seen.add(v.id)
        if v.cardinality < 2:
            report.add(f"variable {v.id!r} needs at least 2 states, has {v.cardinality}")
        if len(set(v.states)) != v.cardinality:
            report.add(f"variable {v.id!r} has duplicate state labels {v.states}")

    for parent, child in net.edges:
        for endpoint in (parent, child):
            if endpoint not in net:
                report.add(f"edge ({parent!r}, {child!r}) references unknown variable {endpoint!r}")

    if not net.is_acyclic:
        report.add("cycle detected in edge set")

    for var_id in net.variable_ids:
        if var_id not in net.cuts:
            report.add(f"variable {var_id!r} has no conditional table")
    for table_var in net.cuts:
        if table_var not in net:
            report.add(f"conditional table for unknown variable {table_var!r}")

    for var_id, table in net.cuts.items():
        if var_id not in net:
            continue
        structural = set(net.parents(var_id))
        declared = set(table.parents)
        if structural != declared:
            report.add(
                f"table of {var_id!r} conditions on {sorted(declared)} "
                f"but edges give parents {sorted(structural)}"
            )
            continue
        if len(table.parents) != len(declared):
            report.add(f"table of {var_id!r} repeats a parent: {table.parents}")
            continue
        parent_states = []
        missing_parent = False
        for p in table.parents:
            if p not in net:
                missing_parent = True
                break
            parent_states.append(net.variable(p).states)
        if missing_parent:
            continue
        expected_keys = {combo for combo in itertools.product(*parent_states)}
        actual_keys = set(table.rows)
        if expected_keys != actual_keys:
            report.add(
                f"table of {var_id!r} has {len(actual_keys)} rows, "
                f"expected {len(expected_keys)} (full product of parent states)"
            )
            continue
        card = net.cardinality(var_id)
        for key, row in table.rows.items():
            if row.shape != (card,):
                report.add(
                    f"table of {var_id!r}, row {key}: length {row.shape} != {card}"
                )
                continue
            if np.any(row < 0) or np.any(row > 1):
                report.add(f"table of {var_id!r}, row {key}: entries outside [0, 1]")
            total = float(row.sum())
            if abs(total - 1.0) > ROW_SUM_TOL:
                report.add(f"table of {var_id!r}, row {key}: row sum {total:g} != 1")

    return report


def joint_probability(net: CausalNetwork, assignment: Mapping[str, str]) -> float:
    """P(full assignment) via the factored product of table rows."""
    prob = 1.0
    for var in net.variables:
        if var.id not in assignment:
            raise KeyError(f"assignment is missing variable {var.id!r}")
        state = assignment[var.id]
        var.index(state)  # raises on unknown state label
        table = net.table(var.id)
        parent_states = []
        for p in table.parents:
            if p not in assignment:
                raise KeyError(f"assignment is missing variable {p!r}")
            parent_states.append(assignment[p])
        row = table.row(parent_states)
        prob *= float(row[var.index(state)])
    return prob


def merge_evidence(net: CausalNetwork, *pieces: Evidence) -> Evidence:
    """Combine evidence sets.

    Hard observations must agree; two soft likelihoods on the same
    variable compose by elementwise product (independent observations). A
    hard observation absorbs soft likelihoods on the same variable, unless
    the likelihood is zero at the observed state, which is a contradiction.
    """
    hard: dict[str, str] = {}
    soft: dict[str, np.ndarray] = {}
    for piece in pieces:
        for var, state in piece.hard.items():
            if var in hard and hard[var] != state:
                raise ContradictoryEvidenceError(
                    f"conflicting hard evidence on {var!r}: "
                    f"{hard[var]!r} vs {state!r}"
                )
            hard[var] = state
        for var, lik in piece.soft.items():
            vec = np.asarray(lik, dtype=float)
            if var in soft:
                if soft[var].shape != vec.shape:
                    raise ValueError(
                        f"soft evidence length mismatch on {var!r}: "
                        f"{soft[var].shape[0]} vs {vec.shape[0]}"
                    )
                soft[var] = soft[var] * vec
            else:
                soft[var] = vec
            if not np.any(soft[var] > 0):
                raise ContradictoryEvidenceError(
                    f"combined soft evidence on {var!r} is zero everywhere"
                )
    for var in list(soft):
        if var in hard:
            idx = net.variable(var).index(hard[var])
            if soft[var][idx] == 0.0:
                raise ContradictoryEvidenceError(
                    f"soft evidence on {var!r} excludes the observed state {hard[var]!r}"
                )
            del soft[var]
    return Evidence(hard=hard, soft={v: tuple(a) for v, a in soft.items()})
