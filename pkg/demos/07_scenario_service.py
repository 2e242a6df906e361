"""
Scenario lifecycle end to end
=============================

Create a scenario from the bundled template, feed it graded evidence,
query posteriors at different revisions, and compare what-if branches.
The same operations are available over HTTP (`epidss serve`) and the
CLI (`epidss scenario new ...`).
"""

import tempfile

from epidss.admiralty import GradedEvidence
from epidss.bayes import Evidence, network_to_document
from epidss.preparedness import default_outbreak_network
from epidss.service import ScenarioService

store_dir = tempfile.mkdtemp(prefix="epidss-demo-")
service = ScenarioService(store_dir)
print("store:", store_dir)

created = service.create_scenario(
    network_to_document(default_outbreak_network()),
    name="region-west watch",
    cost_models={"response": {"OutbreakRisk": {"low": 0, "medium": 40, "high": 100}}},
)
sid = created["id"]
print(f"created scenario {sid}, revision {created['revision']}, engine {created['engine']}")

events = [
    GradedEvidence.hard("ImportedCases", "few", "B2", source_id="border-screening"),
    GradedEvidence.hard("LocalTransmission", "yes", "C3", source_id="sentinel-clinics"),
]
for ge in events:
    result = service.submit_evidence(sid, ge)
    risk_high = result["summary"]["posteriors"]["OutbreakRisk"]["probs"]["high"]
    print(f"revision {result['revision']} after {ge.source_id} [{ge.grade}]: "
          f"P(high risk) = {risk_high:.3f}")

# Every revision stays queryable: the log is the history.
for revision in range(1, service.store.get(sid).revision + 1):
    post = service.posterior(sid, "OutbreakRisk", revision=revision)
    print(f"  P(OutbreakRisk=high) at revision {revision}: "
          f"{post['posterior']['probs']['high']:.3f}")

# What if community transmission were confirmed tomorrow?
answer = service.what_if(
    sid,
    Evidence(hard={"CommunityTransmission": "yes"}),
    query="OutbreakRisk",
    cost_model="response",
)
base, hypo = answer["baseline"], answer["hypothetical"]
print("\nwhat-if CommunityTransmission=yes:")
print(f"  baseline     P(high) = {base['posterior']['probs']['high']:.3f}, "
      f"risk {base['risk']['risk']:.1f}")
print(f"  hypothetical P(high) = {hypo['posterior']['probs']['high']:.3f}, "
      f"risk {hypo['risk']['risk']:.1f}")
print("revision after what-if:", service.store.get(sid).revision, "(unchanged)")
