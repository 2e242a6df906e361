"""
Grading evidence and classifying states
=======================================

Sources are graded A-F for reliability and 1-6 for credibility. The
grade discounts observations before inference, and sorts assessed system
states into usable vs. high-risk.
"""

from epidss.admiralty import (
    AdmiraltyGrade,
    GradedEvidence,
    SystemState,
    classify_states,
    discount_to_likelihood,
    grade_weight,
)
from epidss.bayes import (
    CausalNetwork,
    ConditionalTable,
    Variable,
    posterior_exact,
)

# weights shrink as reliability or credibility degrade
for text in ("A1", "B2", "C4", "E5", "F6"):
    grade = AdmiraltyGrade.parse(text)
    print(f"grade {grade}: weight {grade_weight(grade):.2f}")

# A C1 source reporting a positive test: trustworthy-ish, so the
# observation becomes a likelihood (1.0, 0.4) rather than certainty.
net = CausalNetwork(
    variables=[
        Variable("Disease", ("present", "absent")),
        Variable("Test", ("positive", "negative")),
    ],
    edges=[("Disease", "Test")],
    cuts=[
        ConditionalTable("Disease", (), {(): (0.01, 0.99)}),
        ConditionalTable(
            "Test", ("Disease",),
            {("present",): (0.95, 0.05), ("absent",): (0.02, 0.98)},
        ),
    ],
)

for grade_text in ("A1", "C1", "E5"):
    ge = GradedEvidence.hard("Test", "positive", grade_text, source_id="field-lab")
    ev = discount_to_likelihood(ge, net)
    post = posterior_exact(net, ev, "Disease")
    print(f"\npositive test graded {grade_text}: likelihood {ev.soft['Test']}")
    print(f"  P(Disease=present) = {post['present']:.4f}")

# Twelve assessed situations and their grades; reliability D/E/F or
# credibility 5/6 makes acting on a state itself risky.
states = [
    SystemState(sid, AdmiraltyGrade.parse(g))
    for sid, g in {
        "S1": "C1", "S2": "A2", "S3": "C4", "S4": "C4", "S5": "C4",
        "S6": "E6", "S7": "A2", "S9": "C1", "S10": "E2", "S11": "E6",
        "S12": "F5",
    }.items()
]
partition = classify_states(states)
print("\nusable for decisions:", sorted(partition.usable_ids()))
print("high-risk to act on: ", sorted(partition.high_risk_ids()))

# the 6x6 grid, rows = reliability, columns = credibility
cells = {}
for s in states:
    cells.setdefault((s.grade.reliability, s.grade.credibility), []).append(s.id)
print("\n      " + "".join(f"{c:>10}" for c in "123456"))
for r in "ABCDEF":
    row = "".join(
        f"{','.join(cells.get((r, c), [])):>10}" for c in "123456"
    )
    print(f"   {r}  {row}")
