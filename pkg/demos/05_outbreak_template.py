"""
The outbreak template, preparedness levels and staging
======================================================

The bundled network ties imported cases, testing capacity, local and
community transmission, and the two impact scales to an outbreak-risk
node. Around it: the five-level preparedness ladder, impact staging and
the preparedness index.
"""

from epidss.bayes import Evidence, posterior_exact, validate_network
from epidss.preparedness import (
    EpiSubIndexes,
    SeverityAssessment,
    default_outbreak_network,
    epi_index,
    severity_stage,
    who_level,
)

net = default_outbreak_network()
print("template valid:", validate_network(net).ok)
print("nodes:", ", ".join(net.variable_ids))

print("\nP(OutbreakRisk) with no evidence:",
      {s: round(p, 3) for s, p in posterior_exact(net, Evidence.empty(), "OutbreakRisk").as_dict().items()})

for ct in ("yes", "no"):
    post = posterior_exact(
        net, Evidence(hard={"CommunityTransmission": ct}), "OutbreakRisk"
    )
    print(f"P(OutbreakRisk | CommunityTransmission={ct}):",
          {s: round(p, 3) for s, p in post.as_dict().items()})

# The preparedness ladder reacts to the most serious confirmed signal.
situations = [
    ("confirmed community spread", Evidence(hard={"CommunityTransmission": "yes"})),
    ("local chains only", Evidence(hard={"CommunityTransmission": "no",
                                         "LocalTransmission": "yes"})),
    ("a few imported cases", Evidence(hard={"ImportedCases": "few",
                                            "LocalTransmission": "no"})),
    ("all clear", Evidence(hard={"CommunityTransmission": "no",
                                 "LocalTransmission": "no",
                                 "ImportedCases": "none"})),
]
print()
for label, ev in situations:
    print(f"{label:>28}: {who_level(ev, net=net).value}")

risky_neighbor = Evidence(hard={"ImportedCases": "none", "Transmissibility": "4"})
print(f"{'no cases, hot neighbor':>28}: "
      f"{who_level(risky_neighbor, neighboring_region_risk=True, net=net).value}")

# Impact staging: coarse early, numeric once data accumulate.
print()
print("early, rated moderate-high:",
      severity_stage(SeverityAssessment("early", "moderate_high", "moderate_high")))
print("data-rich, t=2 s=2:        ",
      severity_stage(SeverityAssessment("data_rich", 2, 2)))
print("data-rich, t=5 s=7:        ",
      severity_stage(SeverityAssessment("data_rich", 5, 7)))

# National capacity rolls up into one number in [0, 1].
capacity = EpiSubIndexes(
    public_health_infrastructure=0.62,
    physical_infrastructure=0.71,
    institutional_capacity=0.55,
    economic_resources=0.48,
    public_health_communication=0.66,
)
print("\npreparedness index (equal weights):",
      round(epi_index(capacity, (0.2, 0.2, 0.2, 0.2, 0.2)), 3))
print("infrastructure-heavy weights:      ",
      round(epi_index(capacity, (0.4, 0.3, 0.1, 0.1, 0.1)), 3))
