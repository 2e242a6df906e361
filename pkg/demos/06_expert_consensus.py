"""
Pooling expert judgments
========================

Several experts, each supported by their own analysis, report a
posterior over the same question. A linear opinion pool combines them;
total-variation conflict says how far apart they still are.
"""

import numpy as np

from epidss.admiralty import AdmiraltyGrade
from epidss.consensus import ExpertPosterior, conflict, pool

# Posteriors over P(OutbreakRisk = low/medium/high) from four experts.
experts = [
    ExpertPosterior("epidemiologist", (0.2, 0.5, 0.3), weight=2.0),
    ExpertPosterior("hospital-ops", (0.1, 0.4, 0.5), weight=1.0),
    ExpertPosterior("logistics", (0.3, 0.5, 0.2), weight=1.0),
    ExpertPosterior("field-report", (0.05, 0.25, 0.7),
                    grade=AdmiraltyGrade.parse("E5")),  # barely trusted
]

for e in experts:
    print(f"{e.expert_id:>15}: {list(e.posterior)}  weight {e.effective_weight():.2f}")

pooled = pool(experts)
print("\nconsensus:", np.round(pooled, 4).tolist())
print("conflict (max pairwise TV):", round(conflict(experts), 4))

# Conflict drops as opinions converge.
aligned = [
    ExpertPosterior("e1", (0.25, 0.5, 0.25)),
    ExpertPosterior("e2", (0.2, 0.55, 0.25)),
    ExpertPosterior("e3", (0.22, 0.52, 0.26)),
]
print("\nafter discussion, conflict:", round(conflict(aligned), 4))
print("consensus:", np.round(pool(aligned), 4).tolist())
