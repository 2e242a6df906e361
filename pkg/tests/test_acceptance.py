"""Acceptance suite: one test per release criterion, with pinned
tolerances and runtime budgets. Run with `pytest tests/test_acceptance.py -v -s`
to see one PASS line per criterion.
"""

import time
from contextlib import contextmanager

import numpy as np
import pytest

from epidss.admiralty import AdmiraltyGrade, GradedEvidence, SystemState, classify_states
from epidss.bayes import (
    CausalNetwork,
    ConditionalTable,
    Evidence,
    Variable,
    posterior_exact,
    posterior_sampled,
    validate_network,
)
from epidss.consensus import ExpertPosterior, conflict, pool
from epidss.epi import ParamPrior, SirParams, discretize_to_cpt, sample_ensemble, simulate_sir
from epidss.risk import CostModel, bias_estimate, risk_score, tail_risk
from epidss.service import ScenarioService

from oracles import (
    enum_posterior,
    histogram_oracle,
    random_binary_network,
    random_query_case,
)


@contextmanager
def criterion(name: str, budget_seconds: float | None = None):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    budget = f" (budget {budget_seconds:g}s)" if budget_seconds else ""
    print(f"\nACCEPTANCE {name}: PASS in {elapsed:.2f}s{budget}")
    if budget_seconds is not None:
        assert elapsed < budget_seconds, f"{name} exceeded budget: {elapsed:.2f}s"


def test_twelve_state_grading_partition():
    """Twelve graded states split into the published usable/high-risk sets."""
    with criterion("12-state grading partition", budget_seconds=1.0):
        grades = {
            "S1": "C1", "S9": "C1",
            "S2": "A2", "S7": "A2",
            "S3": "C4", "S4": "C4", "S5": "C4",
            "S10": "E2",
            "S6": "E6", "S11": "E6",
            "S12": "F5",
        }
        states = [SystemState(sid, AdmiraltyGrade.parse(g)) for sid, g in grades.items()]
        partition = classify_states(states)
        assert partition.usable_ids() == {"S1", "S2", "S3", "S4", "S5", "S7", "S9"}
        assert partition.high_risk_ids() == {"S6", "S10", "S11", "S12"}


def test_exact_inference_matches_enumeration():
    """200 random networks of <= 12 binary nodes, >= 5 query pairs each,
    exact posterior within 1e-10 of the full-joint enumeration."""
    with criterion("exact inference vs enumeration oracle", budget_seconds=120.0):
        rng = np.random.default_rng(7001)
        worst = 0.0
        for _ in range(200):
            n_nodes = int(rng.integers(3, 13))
            net = random_binary_network(rng, n_nodes)
            for _ in range(5):
                n_evidence = int(rng.integers(0, min(4, n_nodes)))
                ev, query = random_query_case(rng, net, n_evidence)
                got = posterior_exact(net, ev, query).probs
                expected = enum_posterior(net, ev, query)
                worst = max(worst, float(np.abs(got - expected).max()))
        assert worst <= 1e-10, f"worst deviation {worst:.2e}"


def test_sampler_consistency_and_bias():
    """Likelihood weighting at n = 100000 lands within TV 0.02 of exact on
    20 seeded 10-node networks, and is unbiased across 50 seeds."""
    with criterion("sampler consistency and bias", budget_seconds=300.0):
        rng = np.random.default_rng(420)
        for k in range(20):
            net = random_binary_network(rng, 10)
            ev, query = random_query_case(rng, net, n_evidence=2)
            exact = posterior_exact(net, ev, query).probs
            sampled = posterior_sampled(net, ev, query, 100_000, seed=1000 + k).probs
            tv = 0.5 * float(np.abs(exact - sampled).sum())
            assert tv <= 0.02, f"net {k}: TV {tv:.4f}"

        rng = np.random.default_rng(421)
        net = random_binary_network(rng, 10)
        ev, query = random_query_case(rng, net, n_evidence=2)
        reference = float(posterior_exact(net, ev, query).probs[0])
        estimates, variances = [], []
        for seed in range(50):
            post = posterior_sampled(net, ev, query, 100_000, seed=seed)
            estimates.append(float(post.probs[0]))
            variances.append(float(post.standard_error[0]) ** 2)
        report = bias_estimate(estimates, reference)
        pooled_se = float(np.sqrt(np.sum(variances)) / len(estimates))
        assert abs(report.mean_error) <= 3 * pooled_se, (
            f"mean error {report.mean_error:.2e} vs 3*pooled SE {3 * pooled_se:.2e}"
        )


def test_sir_model_properties():
    """Conservation on a 100-point sweep, analytic peak within one step on
    20 supercritical runs, and no growth when subcritical."""
    with criterion("SIR conservation / peak / subcritical", budget_seconds=60.0):
        population = 1e6
        base = dict(population=population, initial_infected=10.0, horizon=100.0, dt=0.1)

        for beta in np.linspace(0.05, 1.0, 10):
            for gamma in np.linspace(0.05, 0.5, 10):
                traj = simulate_sir(SirParams(beta=float(beta), gamma=float(gamma), **base))
                total = traj.susceptible + traj.infected + traj.recovered
                assert np.max(np.abs(total - population)) <= 1e-9 * population

        rng = np.random.default_rng(99)
        for _ in range(20):
            r0 = float(rng.uniform(1.5, 5.0))
            beta = float(rng.uniform(0.25, 0.9))
            p = SirParams(beta=beta, gamma=beta / r0, population=population,
                          initial_infected=10.0, horizon=400.0, dt=0.1)
            traj = simulate_sir(p)
            threshold = p.gamma / p.beta
            below = traj.susceptible / population < threshold
            assert below.any(), "epidemic never crossed the analytic threshold"
            crossing_time = traj.times[int(np.argmax(below))]
            assert abs(traj.peak_time - crossing_time) <= p.dt + 1e-12

        for _ in range(20):
            gamma = float(rng.uniform(0.2, 0.6))
            beta = gamma * float(rng.uniform(0.1, 0.95))
            traj = simulate_sir(SirParams(beta=beta, gamma=gamma, population=population,
                                          initial_infected=100.0, horizon=120.0, dt=0.1))
            assert np.all(traj.infected <= 100.0 + 1e-9)


def test_discretization_matches_histogram_oracle():
    """Bin frequencies from a 10000-draw ensemble equal an independent
    histogram recomputation to 1e-12 and form valid table rows."""
    with criterion("discretization vs histogram oracle", budget_seconds=60.0):
        prior = ParamPrior(beta=(0.15, 0.7), gamma=(0.1, 0.5))
        base = SirParams(beta=0.5, gamma=0.25, population=1e6, initial_infected=10.0,
                         horizon=60.0, dt=0.1)
        ens = sample_ensemble(prior, base, n=10_000, seed=314)
        cases = {
            "peak_infected": (1e3, 1e4, 1e5, 3e5),
            "attack_rate": (0.1, 0.4, 0.7),
            "peak_time": (15.0, 30.0, 50.0),
        }
        for statistic, thresholds in cases.items():
            row = discretize_to_cpt(ens, statistic, thresholds)
            oracle = histogram_oracle(ens.statistics(statistic), thresholds)
            assert np.abs(row - oracle).max() <= 1e-12
            holder = CausalNetwork(
                variables=[Variable("band", tuple(f"b{i}" for i in range(len(row))))],
                cuts=[ConditionalTable("band", (), {(): row})],
            )
            assert validate_network(holder).ok


def test_risk_pool_conflict_property_suite():
    """Randomized property checks, >= 1000 cases per property."""
    with criterion("risk/pool/conflict properties", budget_seconds=60.0):
        rng = np.random.default_rng(5150)

        def random_posterior(n_states):
            from epidss.bayes import Posterior

            return Posterior(
                "x", tuple(f"s{i}" for i in range(n_states)),
                rng.dirichlet(np.ones(n_states)),
            )

        for _ in range(1000):  # risk linearity
            post = random_posterior(int(rng.integers(2, 6)))
            costs = {s: float(rng.uniform(0, 100)) for s in post.states}
            scale = float(rng.uniform(0, 8))
            model = CostModel({"x": costs})
            assert risk_score(model.scaled(scale), post).risk == pytest.approx(
                scale * risk_score(model, post).risk, rel=1e-12, abs=1e-12
            )

        for _ in range(1000):  # risk monotonicity
            post = random_posterior(3)
            costs = {s: float(rng.uniform(0, 100)) for s in post.states}
            base = risk_score(CostModel({"x": costs}), post).risk
            bumped = dict(costs)
            bumped[post.states[int(rng.integers(0, 3))]] += float(rng.uniform(0, 50))
            assert risk_score(CostModel({"x": bumped}), post).risk >= base - 1e-12

        for _ in range(1000):  # tail risk dominates the mean
            samples = rng.normal(0, 10, size=int(rng.integers(2, 200)))
            q = float(rng.uniform(0.5, 0.99))
            assert tail_risk(samples, q) >= samples.mean() - 1e-12

        for _ in range(1000):  # pool unanimity
            shared = tuple(rng.dirichlet(np.ones(int(rng.integers(2, 5)))))
            experts = [
                ExpertPosterior(f"e{i}", shared, weight=float(rng.uniform(0.1, 5)))
                for i in range(int(rng.integers(1, 6)))
            ]
            assert pool(experts).tolist() == list(shared)

        for _ in range(1000):  # pool permutation and weight-scale invariance
            k = int(rng.integers(2, 6))
            n_states = int(rng.integers(2, 5))
            posts = [tuple(rng.dirichlet(np.ones(n_states))) for _ in range(k)]
            weights = [float(rng.uniform(0.1, 5)) for _ in range(k)]
            experts = [ExpertPosterior(f"e{i}", posts[i], weight=weights[i]) for i in range(k)]
            direct = pool(experts)
            permuted = pool(list(reversed(experts)))
            np.testing.assert_allclose(direct, permuted, atol=1e-12)
            scale = float(rng.uniform(0.2, 30))
            rescaled = pool([
                ExpertPosterior(f"e{i}", posts[i], weight=weights[i] * scale)
                for i in range(k)
            ])
            np.testing.assert_allclose(direct, rescaled, atol=1e-12)

        for _ in range(1000):  # conflict is zero iff posteriors coincide
            n_states = int(rng.integers(2, 5))
            base = rng.dirichlet(np.ones(n_states))
            same = [ExpertPosterior(f"e{i}", tuple(base)) for i in range(3)]
            assert conflict(same) <= 1e-12
            top = int(np.argmax(base))
            delta = float(rng.uniform(0.25, 0.75)) * base[top]
            shifted = base.copy()
            shifted[top] -= delta
            shifted[(top + 1) % n_states] += delta
            assert conflict([
                ExpertPosterior("a", tuple(base)), ExpertPosterior("b", tuple(shifted))
            ]) > 0


def test_service_audit_replay(tmp_path):
    """50 randomized scenario histories: replaying the log reproduces the
    stored posterior summary exactly; what-if leaves revisions unchanged."""
    with criterion("service audit replay", budget_seconds=120.0):
        rng = np.random.default_rng(8080)
        service = ScenarioService(tmp_path / "store")
        discounted_grades = [
            AdmiraltyGrade(r, c) for r in "BCDE" for c in "2345"
        ]
        from epidss.bayes import network_to_document

        for _ in range(50):
            net = random_binary_network(rng, 6)
            sid = service.create_scenario(network_to_document(net), "audit")["id"]
            summaries = {1: None}
            n_events = int(rng.integers(1, 21))
            for _ in range(n_events):
                var = net.variable_ids[int(rng.integers(0, 6))]
                state = net.variable(var).states[int(rng.integers(0, 2))]
                grade = discounted_grades[int(rng.integers(0, len(discounted_grades)))]
                response = service.submit_evidence(
                    sid, GradedEvidence(Evidence(hard={var: state}), grade)
                )
                summaries[response["revision"]] = response["summary"]

            reopened = ScenarioService(tmp_path / "store")
            final_revision = max(summaries)
            assert reopened.summary(sid) == summaries[final_revision]
            intermediate = int(rng.integers(2, final_revision + 1))
            assert reopened.summary(sid, revision=intermediate) == summaries[intermediate]

            before = reopened.store.get(sid).revision
            delta_var = net.variable_ids[int(rng.integers(0, 6))]
            reopened.what_if(
                sid, Evidence(hard={delta_var: net.variable(delta_var).states[0]}),
                query=net.variable_ids[-1] if net.variable_ids[-1] != delta_var
                else net.variable_ids[0],
            )
            assert reopened.store.get(sid).revision == before
