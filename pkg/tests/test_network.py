import numpy as np
import pytest

from epidss.bayes import (
    CausalNetwork,
    ConditionalTable,
    ContradictoryEvidenceError,
    Evidence,
    Variable,
    joint_probability,
    merge_evidence,
    validate_network,
)

from oracles import all_assignments, joint_oracle, random_binary_network


def single_node(probs=(0.5, 0.5)) -> CausalNetwork:
    return CausalNetwork(
        variables=[Variable("x", ("a", "b"))],
        cuts=[ConditionalTable("x", (), {(): probs})],
    )


class TestValidation:
    def test_smallest_legal_network(self):
        report = validate_network(single_node())
        assert report.ok
        assert report.violations == []

    def test_two_node_cycle(self):
        net = CausalNetwork(
            variables=[Variable("a", ("0", "1")), Variable("b", ("0", "1"))],
            edges=[("a", "b"), ("b", "a")],
            cuts=[
                ConditionalTable("a", ("b",), {("0",): (0.5, 0.5), ("1",): (0.5, 0.5)}),
                ConditionalTable("b", ("a",), {("0",): (0.5, 0.5), ("1",): (0.5, 0.5)}),
            ],
        )
        report = validate_network(net)
        assert not report.ok
        assert any("cycle detected" in v for v in report.violations)

    def test_bad_row_sum(self):
        report = validate_network(single_node((0.7, 0.2)))
        assert any("row sum 0.9 != 1" in v for v in report.violations)

    def test_entry_out_of_range(self):
        report = validate_network(single_node((1.5, -0.5)))
        assert any("outside [0, 1]" in v for v in report.violations)

    def test_too_few_states(self):
        net = CausalNetwork(
            variables=[Variable("x", ("only",))],
            cuts=[ConditionalTable("x", (), {(): (1.0,)})],
        )
        assert any("at least 2 states" in v for v in validate_network(net).violations)

    def test_duplicate_state_labels(self):
        net = CausalNetwork(
            variables=[Variable("x", ("a", "a"))],
            cuts=[ConditionalTable("x", (), {(): (0.5, 0.5)})],
        )
        assert any("duplicate state labels" in v for v in validate_network(net).violations)

    def test_missing_table(self):
        net = CausalNetwork(variables=[Variable("x", ("a", "b"))])
        assert any("no conditional table" in v for v in validate_network(net).violations)

    def test_parent_mismatch(self):
        net = CausalNetwork(
            variables=[Variable("a", ("0", "1")), Variable("b", ("0", "1"))],
            edges=[("a", "b")],
            cuts=[
                ConditionalTable("a", (), {(): (0.5, 0.5)}),
                ConditionalTable("b", (), {(): (0.5, 0.5)}),  # ignores its parent
            ],
        )
        assert any("edges give parents" in v for v in validate_network(net).violations)

    def test_incomplete_rows(self):
        net = CausalNetwork(
            variables=[Variable("a", ("0", "1")), Variable("b", ("0", "1"))],
            edges=[("a", "b")],
            cuts=[
                ConditionalTable("a", (), {(): (0.5, 0.5)}),
                ConditionalTable("b", ("a",), {("0",): (0.5, 0.5)}),
            ],
        )
        assert any("expected 2" in v for v in validate_network(net).violations)

    def test_duplicate_variable_ids(self):
        net = CausalNetwork(
            variables=[Variable("x", ("a", "b")), Variable("x", ("a", "b"))],
            cuts=[ConditionalTable("x", (), {(): (0.5, 0.5)})],
        )
        assert any("duplicate variable id" in v for v in validate_network(net).violations)

    def test_edge_to_unknown_variable(self):
        net = CausalNetwork(
            variables=[Variable("x", ("a", "b"))],
            edges=[("x", "ghost")],
            cuts=[ConditionalTable("x", (), {(): (0.5, 0.5)})],
        )
        assert any("unknown variable 'ghost'" in v for v in validate_network(net).violations)


class TestJointProbability:
    def test_independent_coins(self, coin_net):
        assert joint_probability(coin_net, {"a": "h", "b": "h"}) == pytest.approx(0.25)

    def test_two_factor_chain(self):
        net = CausalNetwork(
            variables=[Variable("a", ("t", "f")), Variable("b", ("t", "f"))],
            edges=[("a", "b")],
            cuts=[
                ConditionalTable("a", (), {(): (0.3, 0.7)}),
                ConditionalTable("b", ("a",), {("t",): (0.9, 0.1), ("f",): (0.2, 0.8)}),
            ],
        )
        assert joint_probability(net, {"a": "t", "b": "t"}) == pytest.approx(0.27)

    def test_missing_variable(self, coin_net):
        with pytest.raises(KeyError, match="missing variable"):
            joint_probability(coin_net, {"a": "h"})

    def test_unknown_state(self, coin_net):
        with pytest.raises(ValueError, match="unknown state"):
            joint_probability(coin_net, {"a": "h", "b": "sideways"})

    def test_matches_enumeration_on_random_8_node_net(self):
        rng = np.random.default_rng(81)
        net = random_binary_network(rng, 8)
        assert validate_network(net).ok
        total = 0.0
        for assignment in all_assignments(net):
            expected = joint_oracle(net, assignment)
            got = joint_probability(net, assignment)
            assert abs(got - expected) <= 1e-12
            total += got
        assert abs(total - 1.0) <= 1e-9

    def test_normalization_up_to_twelve_nodes(self):
        rng = np.random.default_rng(82)
        for n_nodes in (10, 12):
            net = random_binary_network(rng, n_nodes)
            total = sum(joint_probability(net, a) for a in all_assignments(net))
            assert abs(total - 1.0) <= 1e-9


class TestEvidence:
    def test_variable_in_both_maps_rejected(self):
        with pytest.raises(ValueError, match="both hard and soft"):
            Evidence(hard={"x": "a"}, soft={"x": (1.0, 0.5)})

    def test_negative_likelihood_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            Evidence(soft={"x": (0.5, -0.1)})

    def test_all_zero_likelihood_rejected(self):
        with pytest.raises(ValueError, match="all-zero"):
            Evidence(soft={"x": (0.0, 0.0)})

    def test_merge_conflicting_hard_evidence(self, coin_net):
        with pytest.raises(ContradictoryEvidenceError, match="conflicting hard evidence"):
            merge_evidence(
                coin_net, Evidence(hard={"a": "h"}), Evidence(hard={"a": "t"})
            )

    def test_merge_multiplies_soft_likelihoods(self, coin_net):
        merged = merge_evidence(
            coin_net, Evidence(soft={"a": (1.0, 0.5)}), Evidence(soft={"a": (0.8, 0.5)})
        )
        assert merged.soft["a"] == pytest.approx((0.8, 0.25))

    def test_merge_hard_absorbs_soft(self, coin_net):
        merged = merge_evidence(
            coin_net, Evidence(hard={"a": "h"}), Evidence(soft={"a": (0.5, 0.5)})
        )
        assert merged.hard == {"a": "h"}
        assert "a" not in merged.soft

    def test_merge_soft_excluding_observed_state(self, coin_net):
        with pytest.raises(ContradictoryEvidenceError, match="excludes the observed"):
            merge_evidence(
                coin_net, Evidence(hard={"a": "h"}), Evidence(soft={"a": (0.0, 1.0)})
            )


class TestNetworkEditing:
    def test_with_cut_row_replaces_one_row(self):
        net = single_node()
        updated = net.with_cut_row("x", (), (0.2, 0.8))
        assert updated.table("x").row(()).tolist() == [0.2, 0.8]
        assert net.table("x").row(()).tolist() == [0.5, 0.5]  # original untouched

    def test_with_cut_row_unknown_key(self):
        with pytest.raises(KeyError):
            single_node().with_cut_row("x", ("bogus",), (0.2, 0.8))
