"""Posterior computation: exact variable elimination and likelihood weighting.

Hard evidence is folded into the factors by axis reduction; soft evidence
enters as likelihood factors, which is equivalent to attaching an observed
virtual child (see `apply_soft_evidence` for the explicit construction).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .network import (
    CausalNetwork,
    ConditionalTable,
    Evidence,
    Variable,
    ZeroProbabilityEvidenceError,
)


class SamplingError(RuntimeError):
    """Every forward sample received zero weight; the evidence set is
    unreachable under forward sampling (or contradictory)."""


@dataclass(frozen=True)
class Posterior:
    """Distribution over one variable's states, plus sampling metadata.

    `total_weight` is the sum of sample weights behind a sampled
    estimate; it makes independently drawn estimates mergeable (see
    `merge_sampled_posteriors`).
    """

    variable: str
    states: tuple[str, ...]
    probs: np.ndarray
    standard_error: np.ndarray | None = None
    n_samples: int | None = None
    seed: int | None = None
    total_weight: float | None = None

    def __getitem__(self, state: str) -> float:
        return float(self.probs[self.states.index(state)])

    def as_dict(self) -> dict[str, float]:
        return {s: float(p) for s, p in zip(self.states, self.probs)}

    def __len__(self) -> int:
        return len(self.states)


# -- factors -----------------------------------------------------------

Factor = tuple[tuple[str, ...], np.ndarray]  # (scope, table with one axis per var)


def _reduce_hard(scope, table, hard_idx):
    """Select observed indices out of a factor, dropping those axes."""
    keep = []
    index: list = []
    for var in scope:
        if var in hard_idx:
            index.append(hard_idx[var])
        else:
            index.append(slice(None))
            keep.append(var)
    return tuple(keep), table[tuple(index)]


def _multiply(a: Factor, b: Factor) -> Factor:
    scope_a, table_a = a
    scope_b, table_b = b
    scope = scope_a + tuple(v for v in scope_b if v not in scope_a)
    expanded_a = table_a.reshape(table_a.shape + (1,) * (len(scope) - len(scope_a)))
    # b gets trailing singleton axes, then its axes are permuted so that
    # result axis i carries scope[i] (singletons fill the vars b lacks)
    expanded_b = table_b.reshape(table_b.shape + (1,) * (len(scope) - len(scope_b)))
    axes = []
    singleton = len(scope_b)
    for var in scope:
        if var in scope_b:
            axes.append(scope_b.index(var))
        else:
            axes.append(singleton)
            singleton += 1
    expanded_b = np.transpose(expanded_b, axes)
    return scope, expanded_a * expanded_b


def _sum_out(factor: Factor, var: str) -> Factor:
    scope, table = factor
    axis = scope.index(var)
    new_scope = scope[:axis] + scope[axis + 1 :]
    return new_scope, table.sum(axis=axis)


def _build_factors(net: CausalNetwork, ev: Evidence) -> list[Factor]:
    hard_idx = {v: net.variable(v).index(s) for v, s in ev.hard.items()}
    factors: list[Factor] = []
    for var in net.variables:
        table = net.table(var.id)
        scope = table.parents + (var.id,)
        reduced_scope, reduced = _reduce_hard(scope, net.table_tensor(var.id), hard_idx)
        factors.append((reduced_scope, np.asarray(reduced, dtype=float)))
    for var_id, lik in ev.soft.items():
        card = net.cardinality(var_id)
        vec = np.asarray(lik, dtype=float)
        if vec.shape != (card,):
            raise ValueError(
                f"soft likelihood for {var_id!r} has length {vec.shape[0]}, "
                f"expected {card}"
            )
        factors.append(((var_id,), vec))
    return factors


def _min_fill_order(scopes: list[tuple[str, ...]], eliminate: set[str]) -> list[str]:
    """Greedy min-fill elimination order, ties broken by variable id."""
    adjacency: dict[str, set[str]] = {}
    for scope in scopes:
        for var in scope:
            adjacency.setdefault(var, set())
        for a, b in itertools.combinations(scope, 2):
            adjacency[a].add(b)
            adjacency[b].add(a)
    remaining = {v for v in eliminate if v in adjacency}
    order = []
    # variables in none of the scopes are free to eliminate in any order
    isolated = sorted(eliminate - set(adjacency))

    def fill_count(var: str) -> int:
        neighbors = [n for n in adjacency[var] if n in adjacency]
        return sum(
            1
            for a, b in itertools.combinations(neighbors, 2)
            if b not in adjacency[a]
        )

    while remaining:
        best = min(remaining, key=lambda v: (fill_count(v), v))
        order.append(best)
        neighbors = list(adjacency[best])
        for a, b in itertools.combinations(neighbors, 2):
            adjacency[a].add(b)
            adjacency[b].add(a)
        for n in neighbors:
            adjacency[n].discard(best)
        del adjacency[best]
        remaining.discard(best)
    return order + isolated


def elimination_width(net: CausalNetwork) -> int:
    """Largest factor scope (in variables) produced by min-fill elimination.

    A structural property of the evidence-free network; used to decide
    between exact and sampled engines.
    """
    scopes = [net.table(v.id).parents + (v.id,) for v in net.variables]
    order = _min_fill_order(scopes, set(net.variable_ids))
    adjacency: dict[str, set[str]] = {v: set() for v in net.variable_ids}
    for scope in scopes:
        for a, b in itertools.combinations(scope, 2):
            adjacency[a].add(b)
            adjacency[b].add(a)
    width = 1
    for var in order:
        neighbors = adjacency[var]
        width = max(width, len(neighbors) + 1)
        for a, b in itertools.combinations(list(neighbors), 2):
            adjacency[a].add(b)
            adjacency[b].add(a)
        for n in neighbors:
            adjacency[n].discard(var)
        del adjacency[var]
    return width


def posterior_exact(net: CausalNetwork, ev: Evidence, query: str) -> Posterior:
    """Bel(query | evidence) by variable elimination.

    Raises ZeroProbabilityEvidenceError when the evidence set has
    probability zero (a contradiction the caller must surface), KeyError
    for unknown variables, and ValueError when the query is itself
    observed.
    """
    variable = net.variable(query)
    if query in ev.hard:
        raise ValueError(f"query variable {query!r} is fixed by hard evidence")
    for v in ev.variables():
        net.variable(v)  # raises on unknown evidence variable

    factors = _build_factors(net, ev)
    eliminate = set(net.variable_ids) - set(ev.hard) - {query}
    order = _min_fill_order([scope for scope, _ in factors], eliminate)

    for var in order:
        related = [f for f in factors if var in f[0]]
        if not related:
            continue
        factors = [f for f in factors if var not in f[0]]
        product = related[0]
        for f in related[1:]:
            product = _multiply(product, f)
        factors.append(_sum_out(product, var))

    result = ((), np.array(1.0))
    for f in factors:
        result = _multiply(result, f)
    scope, table = result
    if scope != (query,):
        table = np.moveaxis(table, scope.index(query), 0)
        table = table.reshape(len(variable.states), -1).sum(axis=1)
    normalizer = float(table.sum())
    if normalizer <= 0.0:
        raise ZeroProbabilityEvidenceError(
            f"evidence set has probability zero; posterior of {query!r} undefined"
        )
    return Posterior(query, variable.states, np.asarray(table, dtype=float) / normalizer)


def evidence_probability(net: CausalNetwork, ev: Evidence) -> float:
    """P(evidence): the joint mass consistent with the hard observations,
    weighted by any soft likelihoods. 0 means the evidence is contradictory."""
    factors = _build_factors(net, ev)
    order = _min_fill_order(
        [scope for scope, _ in factors], set(net.variable_ids) - set(ev.hard)
    )
    for var in order:
        related = [f for f in factors if var in f[0]]
        if not related:
            continue
        factors = [f for f in factors if var not in f[0]]
        product = related[0]
        for f in related[1:]:
            product = _multiply(product, f)
        factors.append(_sum_out(product, var))
    total = 1.0
    for scope, table in factors:
        total *= float(np.asarray(table).sum()) if scope else float(table)
    return total


def posterior_sampled(
    net: CausalNetwork,
    ev: Evidence,
    query: str,
    n_samples: int,
    seed: int,
) -> Posterior:
    """Likelihood-weighted estimate of Bel(query | evidence).

    Deterministic for a fixed seed. The standard error per state comes
    from the weighted-sample (ratio estimator) variance.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    variable = net.variable(query)
    if query in ev.hard:
        raise ValueError(f"query variable {query!r} is fixed by hard evidence")
    for v in ev.variables():
        net.variable(v)

    rng = np.random.default_rng(seed)
    hard_idx = {v: net.variable(v).index(s) for v, s in ev.hard.items()}
    soft = {}
    for var_id, lik in ev.soft.items():
        vec = np.asarray(lik, dtype=float)
        if vec.shape != (net.cardinality(var_id),):
            raise ValueError(
                f"soft likelihood for {var_id!r} has length {vec.shape[0]}, "
                f"expected {net.cardinality(var_id)}"
            )
        soft[var_id] = vec

    samples: dict[str, np.ndarray] = {}
    weights = np.ones(n_samples, dtype=float)
    for var_id in net.topological_order:
        table = net.table(var_id)
        tensor = net.table_tensor(var_id)
        if table.parents:
            probs = tensor[tuple(samples[p] for p in table.parents)]
        else:
            probs = np.broadcast_to(tensor, (n_samples, tensor.shape[-1]))
        if var_id in hard_idx:
            idx = hard_idx[var_id]
            weights *= probs[:, idx]
            samples[var_id] = np.full(n_samples, idx, dtype=np.intp)
        else:
            cdf = np.cumsum(probs, axis=1)
            u = rng.random(n_samples) * cdf[:, -1]
            drawn = (u[:, None] >= cdf).sum(axis=1)
            samples[var_id] = np.minimum(drawn, probs.shape[1] - 1)
        if var_id in soft:
            weights *= soft[var_id][samples[var_id]]

    total_weight = float(weights.sum())
    if total_weight <= 0.0:
        raise SamplingError(
            "all sample weights are zero: evidence is unreachable under "
            "forward sampling; use posterior_exact or revise the evidence"
        )

    drawn = samples[query]
    card = variable.cardinality
    probs = np.empty(card, dtype=float)
    errors = np.empty(card, dtype=float)
    for k in range(card):
        indicator = (drawn == k).astype(float)
        p_hat = float(np.dot(weights, indicator)) / total_weight
        probs[k] = p_hat
        errors[k] = np.sqrt(np.sum(weights**2 * (indicator - p_hat) ** 2)) / total_weight
    return Posterior(
        query,
        variable.states,
        probs,
        standard_error=errors,
        n_samples=n_samples,
        seed=seed,
        total_weight=total_weight,
    )


def merge_sampled_posteriors(parts: list[Posterior]) -> Posterior:
    """Combine estimates from independent sampling runs (for example one
    per worker, each with its own seed) by weighted averaging."""
    if not parts:
        raise ValueError("nothing to merge")
    first = parts[0]
    for p in parts[1:]:
        if p.variable != first.variable or p.states != first.states:
            raise ValueError("posteriors describe different variables")
    if any(p.total_weight is None for p in parts):
        raise ValueError("only sampled posteriors with total_weight can merge")
    weights = np.array([p.total_weight for p in parts])
    stacked = np.array([p.probs for p in parts])
    combined = weights @ stacked / weights.sum()
    errors = None
    if all(p.standard_error is not None for p in parts):
        stacked_err = np.array([p.standard_error for p in parts])
        errors = np.sqrt(((weights[:, None] * stacked_err) ** 2).sum(axis=0)) / weights.sum()
    return Posterior(
        first.variable,
        first.states,
        combined,
        standard_error=errors,
        n_samples=sum(p.n_samples or 0 for p in parts),
        total_weight=float(weights.sum()),
    )


def apply_soft_evidence(
    net: CausalNetwork, var: str, likelihood
) -> CausalNetwork:
    """Attach an observed-style virtual child encoding a likelihood vector.

    The child is binary; its "observed" column is the likelihood normalized
    to sum 1, so conditioning the child to "observed" scales the parent's
    posterior by the likelihood (Pearl virtual evidence). The new node is
    appended last in `variables` and named ``<var>__virtualN``.
    """
    parent = net.variable(var)
    vec = np.asarray(likelihood, dtype=float)
    if vec.shape != (parent.cardinality,):
        raise ValueError(
            f"likelihood for {var!r} has length {vec.shape[0]}, "
            f"expected {parent.cardinality}"
        )
    if np.any(vec < 0):
        raise ValueError(f"likelihood for {var!r} has negative entries")
    total = float(vec.sum())
    if total <= 0.0:
        raise ValueError(f"likelihood for {var!r} is zero everywhere")
    normalized = vec / total

    n = 1
    existing = set(net.variable_ids)
    while f"{var}__virtual{n}" in existing:
        n += 1
    child_id = f"{var}__virtual{n}"
    child = Variable(child_id, ("observed", "not_observed"))
    rows = {
        (state,): (float(normalized[i]), float(1.0 - normalized[i]))
        for i, state in enumerate(parent.states)
    }
    table = ConditionalTable(child_id, (var,), rows)
    return CausalNetwork(
        (*net.variables, child),
        (*net.edges, (var, child_id)),
        (*net.cuts.values(), table),
    )
