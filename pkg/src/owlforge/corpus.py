"""Desk-scale corpus synthesis and dataset assembly.

generate_synthetic builds random ontology modules that are verified
consistent and coherent at construction time and carry enough raw material
(subclass trees, disjoint siblings, restrictions, property axioms with
domain and range, assertions) that most anti-patterns find injection sites.

build_dataset filters by token budget, balances the two labels, and
subsamples the over-represented patterns EID, CSC, UE, and AIO while
preserving their relative proportions; rarer patterns are kept whole.
Splits use stratified seeded shuffling with a fixed size rule: each split
but the last takes round(remaining * share) with banker's rounding, the
last takes the rest. All randomness flows from one seed via stable
derivations, so reruns are byte-identical.
"""

from __future__ import annotations

import hashlib
import itertools
import random
import time
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Sequence

from .antipattern import (
    FAMILIES,
    FAMILY_OF,
    AntiPatternId,
    InjectionReport,
    NoSiteError,
    inject,
)
from .model import (
    AtMost,
    Axiom,
    ClassAssertion,
    ConsistentCoherent,
    Declaration,
    DisjointClasses,
    Domain,
    EntityName,
    EquivalentClasses,
    Named,
    Only,
    Ontology,
    OntologyStatus,
    PropertyAssertion,
    Range,
    Role,
    Some,
    SubClassOf,
    SubPropertyOf,
    TOP,
    InverseProperties,
    class_name,
    individual_name,
    property_name,
)
from .tableau import classify_status
from .translate import TripleDoc

BIG_FOUR = (AntiPatternId.EID, AntiPatternId.CSC, AntiPatternId.UE, AntiPatternId.AIO)


class GenerationBudgetExceededError(RuntimeError):
    """Could not produce a consistent module within the retry budget."""


class UnknownFamilyError(KeyError):
    pass


class MissingPredictionError(KeyError):
    pass


def derive_seed(seed: int, *parts: object) -> int:
    """Stable sub-seed derivation, independent of interpreter hashing."""
    text = ":".join([str(seed), *map(str, parts)])
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "little")


# ---------------------------------------------------------------------------
# Synthetic generation
# ---------------------------------------------------------------------------

_ADJECTIVES = (
    "Amber", "Basalt", "Cedar", "Delta", "Ember", "Fjord", "Granite", "Harbor",
    "Iris", "Juniper", "Kestrel", "Lagoon", "Maple", "Nimbus", "Onyx", "Prairie",
    "Quartz", "Reed", "Saffron", "Tundra", "Umber", "Vista", "Willow", "Yarrow",
)
_NOUNS = (
    "Arch", "Basin", "Crest", "Dune", "Edge", "Field", "Grove", "Hollow", "Isle",
    "Knoll", "Ledge", "Mesa", "Notch", "Orchard", "Peak", "Quarry", "Ridge",
    "Slope", "Terrace", "Vale",
)
_VERBS = (
    "linksTo", "feedsInto", "guards", "holdsOver", "joinsWith", "marksOut",
    "meetsAt", "servesAs", "shapesUp", "spansOver", "bordersOn", "carriesTo",
)
_PEOPLE = (
    "ada", "bruno", "cora", "dinah", "edgar", "freya", "gustav", "hilda", "ivan",
    "jona", "karin", "lothar", "mira", "nils", "olga", "piet", "runa", "sven",
)


@dataclass(frozen=True)
class SynthConfig:
    n_ontologies: int = 100
    classes: tuple[int, int] = (8, 16)
    properties: tuple[int, int] = (2, 4)
    individuals: tuple[int, int] = (2, 5)
    disjointness_density: float = 0.5
    seed: int = 0
    max_attempts: int = 20

    def __post_init__(self) -> None:
        for lo, hi in (self.classes, self.properties, self.individuals):
            if lo <= 0 or hi < lo:
                raise ValueError("ranges must be positive and ordered")
        if self.n_ontologies <= 0:
            raise ValueError("n_ontologies must be positive")


def _candidate(rng: random.Random, cfg: SynthConfig, ontology_id: str) -> Ontology:
    n_classes = rng.randint(*cfg.classes)
    n_props = rng.randint(*cfg.properties)
    n_inds = rng.randint(*cfg.individuals)

    name_pool = [a + n for a in _ADJECTIVES for n in _NOUNS]
    class_locals = rng.sample(name_pool, n_classes + 2)
    tree_locals = class_locals[:n_classes]
    alias_locals = class_locals[n_classes:]
    classes = [class_name(local) for local in tree_locals]
    prop_locals = rng.sample(_VERBS, n_props)
    props = [property_name(local) for local in prop_locals]

    axioms: list[Axiom] = []
    parent_of: dict[EntityName, EntityName] = {}

    # subclass forest; everything after the first few roots gets a parent
    n_roots = max(2, n_classes // 5)
    children_of: dict[EntityName, list[EntityName]] = {}
    for i, cls in enumerate(classes):
        if i < n_roots:
            continue
        parent = classes[rng.randrange(i)]
        parent_of[cls] = parent
        children_of.setdefault(parent, []).append(cls)
        axioms.append(SubClassOf(Named(cls), Named(parent)))

    # disjoint sibling pairs; a fixed fraction rather than per-pair coin
    # flips keeps the disjointness rate stable across modules
    sibling_pairs = [
        pair
        for parent in classes
        for pair in itertools.combinations(children_of.get(parent, []), 2)
    ]
    n_disjoint = round(cfg.disjointness_density * len(sibling_pairs))
    for a, b in sorted(
        rng.sample(sibling_pairs, n_disjoint), key=lambda p: (p[0].sort_key, p[1].sort_key)
    ):
        axioms.append(DisjointClasses(a, b))

    # a couple of alias classes, material for equivalence patterns
    aliases = []
    for local in alias_locals[: rng.randint(1, 2)]:
        alias = class_name(local)
        target = classes[rng.randrange(len(classes))]
        aliases.append(alias)
        axioms.append(EquivalentClasses(alias, Named(target)))

    # property groups: assertions, restrictions, hierarchy
    assertion_props = props[: max(1, n_props // 2)]
    rest = props[max(1, n_props // 2):]
    hierarchy_props = rest[:2] if len(rest) >= 2 else []
    restriction_props = rest[len(hierarchy_props):] or assertion_props[-1:]

    dom_of: dict[EntityName, EntityName] = {}
    rng_of: dict[EntityName, EntityName] = {}
    for prop in assertion_props:
        dom_of[prop] = classes[rng.randrange(len(classes))]
        rng_of[prop] = classes[rng.randrange(len(classes))]
        axioms.append(Domain(prop, dom_of[prop]))
        axioms.append(Range(prop, rng_of[prop]))

    if len(hierarchy_props) == 2:
        if rng.random() < 0.7:
            axioms.append(SubPropertyOf(hierarchy_props[0], hierarchy_props[1]))
        else:
            axioms.append(InverseProperties(hierarchy_props[0], hierarchy_props[1]))

    # restrictions: at most one per (class, property group) to stay consistent
    def prop_group(prop: EntityName) -> str:
        return "h" if prop in hierarchy_props else prop.local

    used: set[tuple[EntityName, str]] = set()
    usable_props = restriction_props + hierarchy_props
    some_fillers: dict[tuple[EntityName, EntityName], list[EntityName]] = {}
    restricted = rng.sample(classes, round(0.45 * len(classes)))
    for cls in classes:
        if cls not in restricted:
            continue
        prop = usable_props[rng.randrange(len(usable_props))]
        key = (cls, prop_group(prop))
        if key in used:
            continue
        used.add(key)
        filler = classes[rng.randrange(len(classes))]
        kind = rng.random()
        if kind < 0.45:
            axioms.append(SubClassOf(Named(cls), Only(Role(prop), Named(filler))))
        elif kind < 0.8:
            axioms.append(SubClassOf(Named(cls), Some(Role(prop), Named(filler))))
            some_fillers.setdefault((cls, prop), []).append(filler)
        elif kind < 0.9:
            axioms.append(SubClassOf(Named(cls), Some(Role(prop, inverse=True), Named(filler))))
        else:
            axioms.append(SubClassOf(Named(cls), AtMost(1, Role(prop), TOP)))

    # individuals typed once; property assertions respect domain and range
    individuals = [individual_name(f"{_PEOPLE[i % len(_PEOPLE)]}{i}") for i in range(n_inds)]
    typed: dict[EntityName, EntityName] = {}
    for i, ind in enumerate(individuals):
        if i < 2 * len(assertion_props):
            prop = assertion_props[(i // 2) % len(assertion_props)]
            cls = dom_of[prop] if i % 2 == 0 else rng_of[prop]
        else:
            cls = classes[rng.randrange(len(classes))]
        typed[ind] = cls
        axioms.append(ClassAssertion(ind, Named(cls)))
    for prop in assertion_props:
        subjects = [i for i in individuals if typed[i] == dom_of[prop]]
        objects = [i for i in individuals if typed[i] == rng_of[prop]]
        if subjects and objects:
            axioms.append(PropertyAssertion(prop, subjects[0], objects[0]))

    names = sorted(
        set(classes) | set(aliases) | set(props) | set(individuals),
        key=lambda n: n.sort_key,
    )
    declarations = [Declaration(n) for n in names]
    return Ontology(ontology_id, tuple(declarations) + tuple(axioms))


def generate_synthetic(cfg: SynthConfig) -> list[Ontology]:
    """Consistent, coherent modules; regenerates on failure, bounded retries."""
    out: list[Ontology] = []
    for i in range(cfg.n_ontologies):
        ontology_id = f"m{i:05d}"
        produced = None
        for attempt in range(cfg.max_attempts):
            rng = random.Random(derive_seed(cfg.seed, "gen", i, attempt))
            candidate = _candidate(rng, cfg, ontology_id)
            if isinstance(classify_status(candidate), ConsistentCoherent):
                produced = candidate
                break
        if produced is None:
            raise GenerationBudgetExceededError(
                f"module {i} failed to come out consistent in {cfg.max_attempts} attempts"
            )
        out.append(produced)
    return out


# ---------------------------------------------------------------------------
# Dataset records and balancing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DatasetRecord:
    id: str
    doc: TripleDoc
    label: int  # 0 consistent, 1 inconsistent
    pattern: AntiPatternId | None
    semantic_status: OntologyStatus | None = None
    embedding: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if (self.label == 1) != (self.pattern is not None):
            raise ValueError("label 1 exactly when a pattern is present")


def largest_remainder(counts: Mapping[Any, int], total: int) -> dict[Any, int]:
    """Proportional integer apportionment by largest remainder."""
    keys = sorted(counts, key=str)
    pool = sum(counts[k] for k in keys)
    if pool == 0 or total <= 0:
        return {k: 0 for k in keys}
    quotas = {k: counts[k] * total / pool for k in keys}
    out = {k: int(quotas[k]) for k in keys}
    leftover = total - sum(out.values())
    by_remainder = sorted(keys, key=lambda k: (-(quotas[k] - out[k]), str(k)))
    for k in by_remainder[:leftover]:
        out[k] += 1
    return out


def build_dataset(
    consistent: Sequence[TripleDoc],
    inconsistent: Sequence[TripleDoc],
    budget: int,
    *,
    statuses: Mapping[str, OntologyStatus] | None = None,
    embeddings: Mapping[str, Sequence[float]] | None = None,
    seed: int = 0,
) -> list[DatasetRecord]:
    """Filter to the token budget, balance the labels, subsample the big four
    patterns proportionally, keep rare patterns whole."""
    cons = sorted((d for d in consistent if d.token_count <= budget), key=lambda d: d.module_id)
    incons = sorted(
        (d for d in inconsistent if d.token_count <= budget), key=lambda d: d.module_id
    )
    rng = random.Random(derive_seed(seed, "balance"))

    target = min(len(cons), len(incons))
    if len(incons) > target:
        big4_names = {p.value for p in BIG_FOUR}
        rare = [d for d in incons if d.pattern not in big4_names]
        groups: dict[str, list[TripleDoc]] = {}
        for d in incons:
            if d.pattern in big4_names:
                groups.setdefault(d.pattern, []).append(d)
        if len(rare) > target:
            rng.shuffle(rare)
            rare = sorted(rare[:target], key=lambda d: d.module_id)
        quota = target - len(rare)
        alloc = largest_remainder({p: len(g) for p, g in groups.items()}, quota)
        sampled: list[TripleDoc] = []
        for pattern in sorted(groups):
            docs = list(groups[pattern])
            rng.shuffle(docs)
            sampled.extend(docs[: alloc[pattern]])
        incons = sorted(rare + sampled, key=lambda d: d.module_id)
    if len(cons) > len(incons):
        rng.shuffle(cons)
        cons = sorted(cons[: len(incons)], key=lambda d: d.module_id)

    records: list[DatasetRecord] = []
    for label, docs in ((0, cons), (1, incons)):
        for doc in docs:
            pattern = AntiPatternId(doc.pattern) if doc.pattern else None
            records.append(
                DatasetRecord(
                    id=doc.module_id,
                    doc=doc,
                    label=label,
                    pattern=pattern,
                    semantic_status=(statuses or {}).get(doc.module_id),
                    embedding=(
                        tuple(float(x) for x in embeddings[doc.module_id])
                        if embeddings and doc.module_id in embeddings
                        else None
                    ),
                )
            )
    return records


# ---------------------------------------------------------------------------
# Splits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplitManifest:
    ratios: tuple[int, int, int]
    seed: int
    assignment: Mapping[str, str]  # id -> train | val | test
    excluded_family: str | None = None

    def ids_of(self, split: str) -> list[str]:
        return sorted(i for i, s in self.assignment.items() if s == split)


def split_sizes(n: int, ratios: Sequence[int]) -> tuple[int, ...]:
    """Each split but the last takes round(remaining * share); banker's
    rounding, remainder to the last split."""
    remaining = n
    rest = sum(ratios)
    out: list[int] = []
    for ratio in ratios[:-1]:
        take = round(remaining * ratio / rest)
        out.append(take)
        remaining -= take
        rest -= ratio
    out.append(remaining)
    return tuple(out)


def split(
    records: Sequence[DatasetRecord],
    ratios: tuple[int, int, int] = (70, 15, 15),
    seed: int = 0,
    stratify: bool = True,
) -> SplitManifest:
    """Seeded shuffle then contiguous slicing into train/val/test."""
    if sum(ratios) != 100:
        raise ValueError("ratios must sum to 100")
    rng = random.Random(derive_seed(seed, "split"))
    if stratify:
        zero = sorted(r.id for r in records if r.label == 0)
        one = sorted(r.id for r in records if r.label == 1)
        rng.shuffle(zero)
        rng.shuffle(one)
        merged: list[str] = []
        i0 = i1 = 0
        while i0 < len(zero) or i1 < len(one):
            if i1 >= len(one) or (i0 < len(zero) and len(zero) - i0 >= len(one) - i1):
                merged.append(zero[i0])
                i0 += 1
            else:
                merged.append(one[i1])
                i1 += 1
    else:
        merged = sorted(r.id for r in records)
        rng.shuffle(merged)

    sizes = split_sizes(len(merged), ratios)
    assignment: dict[str, str] = {}
    bounds = [(0, sizes[0], "train"), (sizes[0], sizes[0] + sizes[1], "val")]
    bounds.append((sizes[0] + sizes[1], len(merged), "test"))
    for lo, hi, name in bounds:
        for rid in merged[lo:hi]:
            assignment[rid] = name
    return SplitManifest(ratios=tuple(ratios), seed=seed, assignment=assignment)


def leave_family_out(
    records: Sequence[DatasetRecord],
    family: str,
    ratios: tuple[int, int, int] = (70, 15, 15),
    seed: int = 0,
) -> SplitManifest:
    """Base split with the family's records removed from train only."""
    if family not in FAMILIES:
        raise UnknownFamilyError(family)
    base = split(records, ratios, seed)
    family_ids = {
        r.id for r in records if r.pattern is not None and FAMILY_OF[r.pattern] == family
    }
    assignment = {
        rid: s
        for rid, s in base.assignment.items()
        if not (s == "train" and rid in family_ids)
    }
    return SplitManifest(
        ratios=tuple(ratios), seed=seed, assignment=assignment, excluded_family=family
    )


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Metrics:
    tp: int
    fp: int
    tn: int
    fn: int
    accuracy: float
    precision: float | None
    recall: float | None
    per_pattern: Mapping[str, float]

    def to_json_dict(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "tn": self.tn,
            "fn": self.fn,
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "per_pattern": dict(self.per_pattern),
        }


def evaluate(predictions: Mapping[str, int], records: Sequence[DatasetRecord]) -> Metrics:
    """Confusion counts with inconsistent as the positive class, plus a
    per-pattern recall breakdown."""
    tp = fp = tn = fn = 0
    pattern_total: dict[str, int] = {}
    pattern_hit: dict[str, int] = {}
    for record in records:
        if record.id not in predictions:
            raise MissingPredictionError(record.id)
        pred = int(predictions[record.id])
        if record.label == 1:
            name = record.pattern.value if record.pattern else "?"
            pattern_total[name] = pattern_total.get(name, 0) + 1
            if pred == 1:
                tp += 1
                pattern_hit[name] = pattern_hit.get(name, 0) + 1
            else:
                fn += 1
        else:
            if pred == 1:
                fp += 1
            else:
                tn += 1
    total = tp + fp + tn + fn
    return Metrics(
        tp=tp,
        fp=fp,
        tn=tn,
        fn=fn,
        accuracy=(tp + tn) / total if total else 0.0,
        precision=tp / (tp + fp) if (tp + fp) else None,
        recall=tp / (tp + fn) if (tp + fn) else None,
        per_pattern={
            p: pattern_hit.get(p, 0) / pattern_total[p] for p in sorted(pattern_total)
        },
    )


# ---------------------------------------------------------------------------
# Timing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TimingReport:
    name: str
    entries: tuple[tuple[str, float], ...]  # (id, wall milliseconds)
    total_ms: float

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "per_record": [{"id": i, "wall_time_ms": ms} for i, ms in self.entries],
            "total_ms": self.total_ms,
        }


def time_harness(
    checker: Callable[[Any], Any], items: Sequence[tuple[str, Any]], name: str = "checker"
) -> TimingReport:
    """Wall-clock the checker over (id, payload) items."""
    entries: list[tuple[str, float]] = []
    total = 0.0
    for item_id, payload in items:
        start = time.perf_counter()
        checker(payload)
        elapsed = (time.perf_counter() - start) * 1000.0
        entries.append((item_id, elapsed))
        total += elapsed
    return TimingReport(name=name, entries=tuple(entries), total_ms=total)


def merge_timing_reports(*reports: TimingReport) -> dict:
    """One JSON object with every checker's totals, comparable side by side."""
    return {
        "checkers": [r.to_json_dict() for r in reports],
        "totals_ms": {r.name: r.total_ms for r in reports},
    }


# ---------------------------------------------------------------------------
# Injection over a corpus
# ---------------------------------------------------------------------------


def inject_corpus(
    ontologies: Sequence[Ontology], seed: int = 0
) -> list[tuple[Ontology, InjectionReport]]:
    """One injection attempt per module, rotating through the 14 patterns so
    every pattern that has sites somewhere gets represented."""
    patterns = list(AntiPatternId)
    out: list[tuple[Ontology, InjectionReport]] = []
    for i, ontology in enumerate(ontologies):
        rng = random.Random(derive_seed(seed, "inject-order", i))
        order = [patterns[i % len(patterns)]] + rng.sample(patterns, len(patterns))
        done = False
        for pattern in order:
            try:
                modified, report = inject(
                    ontology, pattern, derive_seed(seed, "inject", i, pattern.value)
                )
            except NoSiteError:
                continue
            renamed = Ontology(
                f"{ontology.id}-{pattern.value.lower().replace('_', '')}", modified.axioms
            )
            out.append((renamed, report))
            done = True
            break
        if not done:
            continue
    return out
