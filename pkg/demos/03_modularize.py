"""Split a larger ontology into self-contained, topic-centric modules.

Shows concept ranking, head selection with the direct-subclass skip rule,
partitioning, and the coverage accounting for dropped spanning axioms.
"""

from owlforge.corpus import SynthConfig, generate_synthetic
from owlforge.model import named_classes, status_tag
from owlforge.modularize import (
    coverage_report,
    extract_modules,
    partition,
    rank_concepts,
    select_heads,
)
from owlforge.tableau import classify_status

source = generate_synthetic(
    SynthConfig(n_ontologies=1, classes=(50, 50), properties=(3, 4), seed=21)
)[0]
print(f"source: {len(named_classes(source))} classes, {len(source.axioms)} axioms")

scores = rank_concepts(source)
print("\ntop concepts by weighted degree:")
for entry in scores[:6]:
    print(f"  {entry.cls.local:18s} {entry.score:.0f}")

heads = select_heads(source, scores, 3)
print("\ncluster heads:", [h.local for h in heads])

parts = partition(source, heads)
modules = extract_modules(source, parts)
report = coverage_report(source, modules)
print("\nmodules:")
for result in modules:
    classes = len(named_classes(result.module))
    print(
        f"  {result.module.id}: head={result.head.local:18s} {classes:3d} classes, "
        f"{len(result.module.axioms):3d} axioms, status "
        f"{status_tag(classify_status(result.module))}"
    )
print(
    f"\ncoverage: {report.total_axioms} source axioms, "
    f"{len(report.dropped)} dropped for spanning partitions"
)
