"""Detect anti-pattern instances and inject missing axioms to complete them.

Starts from a consistent synthetic module, lists which of the fourteen
patterns could be completed with one or two axioms, injects one, and shows
that the detector finds the planted instance and the reasoner flags the
module.
"""

from owlforge.antipattern import (
    AntiPatternId,
    NoSiteError,
    detect,
    find_injection_sites,
    inject,
)
from owlforge.corpus import SynthConfig, generate_synthetic
from owlforge.model import status_tag
from owlforge.tableau import classify_status
from owlforge.translate import axiom_to_triple

module = generate_synthetic(SynthConfig(n_ontologies=1, seed=11))[0]
print(f"module {module.id}: {len(module.axioms)} axioms, status",
      status_tag(classify_status(module)))

print("\ninjection sites per pattern (one-axiom / up-to-two):")
for pattern in AntiPatternId:
    one = len(find_injection_sites(module, pattern, 1))
    two = len(find_injection_sites(module, pattern, 2))
    print(f"  {pattern.value:9s} {one:4d} / {two:4d}")

print("\ninjecting UniversalExistance (UE) with seed 5:")
try:
    modified, report = inject(module, AntiPatternId.UE, seed=5)
except NoSiteError:
    modified, report = inject(module, AntiPatternId.EID, seed=5)
for axiom in report.injected_axioms:
    triple = axiom_to_triple(axiom)
    print(f"  + {triple.subject} {triple.relation} {triple.object}")

hits = detect(modified)
print("\ndetector now finds:", sorted({p.value for p, _ in hits}))
print("semantic status after injection:", status_tag(classify_status(modified)))
