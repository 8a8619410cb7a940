"""End-to-end desk corpus: generate, inject, translate, balance, split, and
score the tableau itself as a classifier."""

import collections

from owlforge.corpus import (
    SynthConfig,
    build_dataset,
    evaluate,
    generate_synthetic,
    inject_corpus,
    leave_family_out,
    split,
)
from owlforge.model import status_tag
from owlforge.tableau import classify_status
from owlforge.translate import to_triples

ontologies = generate_synthetic(SynthConfig(n_ontologies=60, seed=5))
injected = inject_corpus(ontologies, seed=5)
print(f"{len(ontologies)} consistent modules, {len(injected)} injected")
print("patterns used:", sorted(collections.Counter(r.pattern.value for _, r in injected)))

statuses = {o.id: classify_status(o) for o in ontologies}
statuses |= {o.id: classify_status(o) for o, _ in injected}

cons = [to_triples(o).with_label("consistent", None) for o in ontologies]
incons = [
    to_triples(o).with_label("inconsistent", r.pattern.value) for o, r in injected
]
records = build_dataset(cons, incons, budget=4096, statuses=statuses, seed=5)
print(f"\nbalanced dataset: {len(records)} records")

manifest = split(records, (70, 15, 15), seed=5)
sizes = collections.Counter(manifest.assignment.values())
print("split sizes:", dict(sizes))

loo = leave_family_out(records, "UE*", seed=5)
dropped = len(manifest.assignment) - len(loo.assignment)
print(f"leave-UE*-out: {dropped} records removed from train")

predictions = {
    r.id: 0 if status_tag(statuses[r.id]) == "consistent" else 1 for r in records
}
metrics = evaluate(predictions, records)
print(
    f"\ntableau as classifier: accuracy {metrics.accuracy:.3f}, "
    f"precision {metrics.precision}, recall {metrics.recall:.3f}"
)
print("per-pattern recall (structural patterns stay consistent by design):")
for pattern, recall in sorted(metrics.per_pattern.items()):
    print(f"  {pattern:9s} {recall:.2f}")
