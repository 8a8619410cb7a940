"""Partition a large ontology into self-contained, topic-centric modules.

The importance score is a weighted degree in the axiom dependency graph:
subclass and equivalence edges weigh 2, property domain-to-range edges weigh
1, and assertion edges weigh 1. Cluster heads are the top-scored classes,
skipping any class that is a direct subclass of an already chosen head.
Direct subclasses join their head's partition; everything else is placed by
a normalized shared-edge membership function. Axioms whose class or
individual signature spans two partitions are dropped and reported rather
than duplicated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import (
    Axiom,
    ClassAssertion,
    Declaration,
    DisjointClasses,
    Domain,
    EntityKind,
    EntityName,
    EquivalentClasses,
    InverseProperties,
    Named,
    Ontology,
    PropertyAssertion,
    Range,
    SubClassOf,
    SubPropertyOf,
    entity_names_of_axiom,
    named_classes,
    named_classes_of_expr,
    signature_of,
)


class InsufficientConceptsError(ValueError):
    """Fewer classes than requested cluster heads."""


@dataclass(frozen=True)
class ConceptScore:
    cls: EntityName
    score: float


@dataclass(frozen=True)
class Partition:
    head: EntityName
    members: frozenset[EntityName]


@dataclass(frozen=True)
class ModuleResult:
    module: Ontology
    source_id: str
    head: EntityName


@dataclass(frozen=True)
class CoverageReport:
    total_axioms: int
    covered_axioms: int
    dropped: tuple[Axiom, ...]


def _dependency_edges(ontology: Ontology) -> list[tuple[EntityName, EntityName, int]]:
    """Weighted edges over classes and individuals."""
    edges: list[tuple[EntityName, EntityName, int]] = []
    domains: dict[EntityName, list[EntityName]] = {}
    ranges: dict[EntityName, list[EntityName]] = {}
    for axiom in ontology.axioms:
        if isinstance(axiom, SubClassOf):
            if isinstance(axiom.sub, Named):
                for target in named_classes_of_expr(axiom.sup):
                    edges.append((axiom.sub.name, target, 2))
        elif isinstance(axiom, EquivalentClasses):
            for target in named_classes_of_expr(axiom.b):
                edges.append((axiom.a, target, 2))
        elif isinstance(axiom, Domain):
            domains.setdefault(axiom.prop, []).append(axiom.cls)
        elif isinstance(axiom, Range):
            ranges.setdefault(axiom.prop, []).append(axiom.cls)
        elif isinstance(axiom, ClassAssertion):
            for target in named_classes_of_expr(axiom.expr):
                edges.append((target, axiom.individual, 1))
        elif isinstance(axiom, PropertyAssertion):
            edges.append((axiom.subject, axiom.object, 1))
    for prop in sorted(set(domains) & set(ranges), key=lambda p: p.sort_key):
        for d in domains[prop]:
            for r in ranges[prop]:
                edges.append((d, r, 1))
    return edges


def rank_concepts(ontology: Ontology) -> list[ConceptScore]:
    """Classes by weighted degree, descending, ties broken by name."""
    degree: dict[EntityName, float] = {c: 0.0 for c in named_classes(ontology)}
    for a, b, w in _dependency_edges(ontology):
        if a in degree:
            degree[a] += w
        if b in degree:
            degree[b] += w
    return [
        ConceptScore(c, s)
        for c, s in sorted(degree.items(), key=lambda kv: (-kv[1], kv[0].sort_key))
    ]


def _direct_superclasses(ontology: Ontology) -> dict[EntityName, set[EntityName]]:
    supers: dict[EntityName, set[EntityName]] = {}
    for axiom in ontology.axioms:
        if (
            isinstance(axiom, SubClassOf)
            and isinstance(axiom.sub, Named)
            and isinstance(axiom.sup, Named)
        ):
            supers.setdefault(axiom.sub.name, set()).add(axiom.sup.name)
    return supers


def select_heads(
    ontology: Ontology, scores: list[ConceptScore], k: int
) -> list[EntityName]:
    """Top-k scored classes, skipping direct subclasses of chosen heads.

    If the constraint exhausts the candidates before k heads are found, the
    skipped classes are admitted in score order.
    """
    if not 1 <= k <= len(scores):
        raise InsufficientConceptsError(f"cannot pick {k} heads from {len(scores)} classes")
    supers = _direct_superclasses(ontology)
    heads: list[EntityName] = []
    skipped: list[EntityName] = []
    for entry in scores:
        if len(heads) == k:
            break
        if any(h in supers.get(entry.cls, set()) for h in heads):
            skipped.append(entry.cls)
            continue
        heads.append(entry.cls)
    for cls in skipped:
        if len(heads) == k:
            break
        heads.append(cls)
    return heads


def _class_class_weights(ontology: Ontology) -> dict[EntityName, dict[EntityName, float]]:
    weights: dict[EntityName, dict[EntityName, float]] = {}
    classes = set(named_classes(ontology))
    for a, b, w in _dependency_edges(ontology):
        if a in classes and b in classes:
            weights.setdefault(a, {}).setdefault(b, 0.0)
            weights.setdefault(b, {}).setdefault(a, 0.0)
            weights[a][b] += w
            weights[b][a] += w
    return weights


def partition(ontology: Ontology, heads: list[EntityName]) -> list[Partition]:
    """Assign every class to exactly one head's partition."""
    if not heads:
        raise ValueError("at least one head is required")
    members: dict[EntityName, set[EntityName]] = {h: {h} for h in heads}
    assigned: dict[EntityName, EntityName] = {h: h for h in heads}

    supers = _direct_superclasses(ontology)
    all_classes = named_classes(ontology)
    for cls in all_classes:
        if cls in assigned:
            continue
        for head in heads:
            if head in supers.get(cls, set()):
                members[head].add(cls)
                assigned[cls] = head
                break

    weights = _class_class_weights(ontology)
    score_of = {s.cls: s.score for s in rank_concepts(ontology)}
    remaining = sorted(
        (c for c in all_classes if c not in assigned),
        key=lambda c: (-score_of.get(c, 0.0), c.sort_key),
    )
    for cls in remaining:
        incident = weights.get(cls, {})
        total = sum(incident.values())
        best_head = heads[0]
        best_value = -1.0
        for head in heads:
            shared = sum(w for other, w in incident.items() if other in members[head])
            value = shared / (1.0 + total)
            if value > best_value:
                best_value = value
                best_head = head
        members[best_head].add(cls)
        assigned[cls] = best_head

    return [Partition(h, frozenset(members[h])) for h in heads]


def _assign_individuals(
    ontology: Ontology, partitions: list[Partition]
) -> dict[EntityName, int]:
    """Individual -> partition index, following its class assertions."""
    part_of_class = {
        cls: idx for idx, p in enumerate(partitions) for cls in p.members
    }
    asserted: dict[EntityName, list[EntityName]] = {}
    for axiom in ontology.axioms:
        if isinstance(axiom, ClassAssertion):
            asserted.setdefault(axiom.individual, []).extend(
                named_classes_of_expr(axiom.expr)
            )
    out: dict[EntityName, int] = {}
    for ind in sorted(
        (n for n in signature_of(ontology) if n.kind is EntityKind.INDIVIDUAL),
        key=lambda n: n.sort_key,
    ):
        candidates = sorted({part_of_class[c] for c in asserted.get(ind, []) if c in part_of_class})
        out[ind] = candidates[0] if candidates else 0
    return out


def extract_modules(ontology: Ontology, partitions: list[Partition]) -> list[ModuleResult]:
    """One self-contained module per partition.

    A non-declaration axiom lands in the partition containing all its classes
    and individuals; property-only axioms follow the modules that use their
    properties; anything spanning partitions is dropped (see coverage_report).
    """
    ind_part = _assign_individuals(ontology, partitions)
    part_of_class = {cls: idx for idx, p in enumerate(partitions) for cls in p.members}

    module_axioms: list[list[Axiom]] = [[] for _ in partitions]
    property_only: list[Axiom] = []
    for axiom in ontology.axioms:
        if isinstance(axiom, Declaration):
            continue
        names = list(entity_names_of_axiom(axiom))
        class_parts = {part_of_class[n] for n in names if n.kind is EntityKind.CLASS}
        ind_parts = {ind_part[n] for n in names if n.kind is EntityKind.INDIVIDUAL}
        owners = class_parts | ind_parts
        if not owners:
            property_only.append(axiom)
            continue
        if len(owners) == 1:
            module_axioms[owners.pop()].append(axiom)

    used_props: list[set[EntityName]] = [
        {n for ax in axioms for n in entity_names_of_axiom(ax) if n.kind is EntityKind.OBJECT_PROPERTY}
        for axioms in module_axioms
    ]
    for axiom in property_only:
        props = {n for n in entity_names_of_axiom(axiom) if n.kind is EntityKind.OBJECT_PROPERTY}
        for idx in range(len(partitions)):
            if props & used_props[idx]:
                module_axioms[idx].append(axiom)

    results: list[ModuleResult] = []
    for idx, (part, axioms) in enumerate(zip(partitions, module_axioms)):
        used_names = sorted(
            {n for ax in axioms for n in entity_names_of_axiom(ax)} | {part.head},
            key=lambda n: n.sort_key,
        )
        declarations: list[Axiom] = [Declaration(n) for n in used_names]
        module = Ontology(f"{ontology.id}.m{idx}", tuple(declarations) + tuple(axioms))
        results.append(ModuleResult(module=module, source_id=ontology.id, head=part.head))
    return results


def coverage_report(ontology: Ontology, modules: list[ModuleResult]) -> CoverageReport:
    """Accounting of source axioms vs the deduplicated module union."""
    from .model import axiom_key

    source = [a for a in ontology.axioms if not isinstance(a, Declaration)]
    covered_keys = {
        axiom_key(a)
        for m in modules
        for a in m.module.axioms
        if not isinstance(a, Declaration)
    }
    dropped = tuple(a for a in source if axiom_key(a) not in covered_keys)
    return CoverageReport(
        total_axioms=len(source),
        covered_axioms=len({axiom_key(a) for a in source}) - len({axiom_key(d) for d in dropped}),
        dropped=dropped,
    )


def default_k(ontology: Ontology, target_classes: int = 200) -> int:
    """Head count targeting roughly ``target_classes`` classes per module."""
    return max(1, math.ceil(len(named_classes(ontology)) / target_classes))


def modularize_ontology(
    ontology: Ontology, k: int | None = None, min_module_classes: int = 1
) -> tuple[list[ModuleResult], CoverageReport]:
    """Rank, pick heads, partition, and extract in one call."""
    scores = rank_concepts(ontology)
    if not scores:
        raise InsufficientConceptsError("ontology has no classes to modularize")
    k = k if k is not None else default_k(ontology)
    k = min(k, len(scores))
    heads = select_heads(ontology, scores, k)
    parts = partition(ontology, heads)
    modules = extract_modules(ontology, parts)
    kept = [
        m
        for m in modules
        if len(named_classes(m.module)) >= min_module_classes
    ]
    return kept, coverage_report(ontology, kept)
