import pytest

from epidss.bayes import CausalNetwork, ConditionalTable, Variable

# Hand-computed: P(present | positive) with prevalence 0.01,
# sensitivity 0.95, specificity 0.98.
DISEASE_POSTERIOR_POSITIVE = 0.01 * 0.95 / (0.01 * 0.95 + 0.99 * 0.02)


def build_disease_test_net() -> CausalNetwork:
    """Two-node screening network: Disease -> Test."""
    return CausalNetwork(
        variables=[
            Variable("Disease", ("present", "absent")),
            Variable("Test", ("positive", "negative")),
        ],
        edges=[("Disease", "Test")],
        cuts=[
            ConditionalTable("Disease", (), {(): (0.01, 0.99)}),
            ConditionalTable(
                "Test",
                ("Disease",),
                {("present",): (0.95, 0.05), ("absent",): (0.02, 0.98)},
            ),
        ],
    )


@pytest.fixture
def disease_net() -> CausalNetwork:
    return build_disease_test_net()


@pytest.fixture
def coin_net() -> CausalNetwork:
    """Two independent fair coins."""
    return CausalNetwork(
        variables=[Variable("a", ("h", "t")), Variable("b", ("h", "t"))],
        edges=[],
        cuts=[
            ConditionalTable("a", (), {(): (0.5, 0.5)}),
            ConditionalTable("b", (), {(): (0.5, 0.5)}),
        ],
    )
