"""The fourteen inconsistency anti-patterns: templates, detection, injection.

Each template is a small axiom schema over class variables c1..c4, role
variables r/r1/r2, and individual variables a/b. Detection is backtracking
unification of the schema against the axiom multiset. Injection finds
bindings where all but one or two schema axioms are already present and adds
the missing ones, completing the pattern.

Conventions: disjointness matches symmetrically; class variables joined by a
disjointness axiom must bind to distinct names; the cyclic-subclass pattern
requires all three classes distinct (a shorter cycle degenerates it), and
the property-inheritance patterns require the two roles distinct for the
same reason.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum

from .model import (
    And,
    AtMost,
    Axiom,
    Bottom,
    ClassAssertion,
    ClassExpression,
    Declaration,
    DisjointClasses,
    Domain,
    EntityKind,
    EntityName,
    EquivalentClasses,
    InverseProperties,
    Named,
    Not,
    Only,
    Ontology,
    Or,
    PropertyAssertion,
    Range,
    Role,
    Some,
    SubClassOf,
    SubPropertyOf,
    TOP,
    Top,
    axiom_key,
    class_name,
    individual_name,
    named_classes,
    individuals as individuals_of,
    properties as properties_of,
    property_name,
)

_VAR_NS = "urn:owlforge-var#"


class NoSiteError(LookupError):
    """No binding admits completing the requested pattern."""


class AntiPatternId(str, Enum):
    AIO = "AIO"
    EID = "EID"
    OIL = "OIL"
    OILWI = "OILWI"
    OILWPI = "OILWPI"
    UE = "UE"
    UEWI_1 = "UEWI_1"
    UEWI_2 = "UEWI_2"
    UEWPI = "UEWPI"
    UEWIP = "UEWIP"
    SOSINETO = "SOSINETO"
    OOD = "OOD"
    OOR = "OOR"
    CSC = "CSC"

    @property
    def family(self) -> str:
        return FAMILY_OF[self]


FAMILIES = ("AIO", "EID", "OIL*", "UE*", "SOSINETO", "OO*", "CSC")

FAMILY_OF: dict[AntiPatternId, str] = {
    AntiPatternId.AIO: "AIO",
    AntiPatternId.EID: "EID",
    AntiPatternId.OIL: "OIL*",
    AntiPatternId.OILWI: "OIL*",
    AntiPatternId.OILWPI: "OIL*",
    AntiPatternId.UE: "UE*",
    AntiPatternId.UEWI_1: "UE*",
    AntiPatternId.UEWI_2: "UE*",
    AntiPatternId.UEWPI: "UE*",
    AntiPatternId.UEWIP: "UE*",
    AntiPatternId.SOSINETO: "SOSINETO",
    AntiPatternId.OOD: "OO*",
    AntiPatternId.OOR: "OO*",
    AntiPatternId.CSC: "CSC",
}


def _var(kind: EntityKind, local: str) -> EntityName:
    return EntityName(kind, _VAR_NS + local, local)


def is_variable(entity: EntityName) -> bool:
    return entity.iri.startswith(_VAR_NS)


_C1 = _var(EntityKind.CLASS, "c1")
_C2 = _var(EntityKind.CLASS, "c2")
_C3 = _var(EntityKind.CLASS, "c3")
_C4 = _var(EntityKind.CLASS, "c4")
_R = _var(EntityKind.OBJECT_PROPERTY, "r")
_R1 = _var(EntityKind.OBJECT_PROPERTY, "r1")
_R2 = _var(EntityKind.OBJECT_PROPERTY, "r2")
_A = _var(EntityKind.INDIVIDUAL, "a")
_B = _var(EntityKind.INDIVIDUAL, "b")


@dataclass(frozen=True)
class PatternTemplate:
    id: AntiPatternId
    schemata: tuple[Axiom, ...]
    distinct: tuple[frozenset[str], ...]  # variable locals that must bind apart

    @property
    def arity(self) -> int:
        return len(self.schemata)


@dataclass(frozen=True)
class MatchBinding:
    substitution: tuple[tuple[str, EntityName], ...]  # sorted (variable, entity)
    matched: tuple[Axiom, ...]
    missing: tuple[Axiom, ...]

    def subst_dict(self) -> dict[str, EntityName]:
        return dict(self.substitution)

    @property
    def sort_key(self) -> tuple[tuple[str, str], ...]:
        return tuple((v, e.iri) for v, e in self.substitution)


@dataclass(frozen=True)
class InjectionReport:
    pattern: AntiPatternId
    injected_axioms: tuple[Axiom, ...]
    binding: MatchBinding
    source_module: str


_TEMPLATES: tuple[PatternTemplate, ...] = (
    PatternTemplate(
        AntiPatternId.AIO,
        (
            SubClassOf(Named(_C1), Some(Role(_R), And((Named(_C2), Named(_C3))))),
            DisjointClasses(_C2, _C3),
        ),
        (frozenset({"c2", "c3"}),),
    ),
    PatternTemplate(
        AntiPatternId.EID,
        (EquivalentClasses(_C1, Named(_C2)), DisjointClasses(_C1, _C2)),
        (frozenset({"c1", "c2"}),),
    ),
    PatternTemplate(
        AntiPatternId.OIL,
        (
            SubClassOf(Named(_C1), Only(Role(_R), Named(_C2))),
            SubClassOf(Named(_C1), Only(Role(_R), Named(_C3))),
            DisjointClasses(_C2, _C3),
        ),
        (frozenset({"c2", "c3"}),),
    ),
    PatternTemplate(
        AntiPatternId.OILWI,
        (
            SubClassOf(Named(_C1), Only(Role(_R), Named(_C3))),
            SubClassOf(Named(_C2), Only(Role(_R), Named(_C4))),
            SubClassOf(Named(_C1), Named(_C2)),
            DisjointClasses(_C3, _C4),
        ),
        (frozenset({"c3", "c4"}),),
    ),
    PatternTemplate(
        AntiPatternId.OILWPI,
        (
            SubClassOf(Named(_C1), Only(Role(_R2), Named(_C3))),
            SubClassOf(Named(_C1), Only(Role(_R1), Named(_C2))),
            SubPropertyOf(_R1, _R2),
            DisjointClasses(_C2, _C3),
        ),
        (frozenset({"c2", "c3"}), frozenset({"r1", "r2"})),
    ),
    PatternTemplate(
        AntiPatternId.UE,
        (
            SubClassOf(Named(_C1), Only(Role(_R), Named(_C2))),
            SubClassOf(Named(_C1), Some(Role(_R), Named(_C3))),
            DisjointClasses(_C2, _C3),
        ),
        (frozenset({"c2", "c3"}),),
    ),
    PatternTemplate(
        AntiPatternId.UEWI_1,
        (
            SubClassOf(Named(_C3), Only(Role(_R), Named(_C4))),
            SubClassOf(Named(_C1), Some(Role(_R), Named(_C3))),
            SubClassOf(Named(_C1), Named(_C2)),
            DisjointClasses(_C3, _C4),
        ),
        (frozenset({"c3", "c4"}),),
    ),
    PatternTemplate(
        AntiPatternId.UEWI_2,
        (
            SubClassOf(Named(_C2), Some(Role(_R), Named(_C4))),
            SubClassOf(Named(_C1), Only(Role(_R), Named(_C3))),
            SubClassOf(Named(_C1), Named(_C2)),
            DisjointClasses(_C3, _C4),
        ),
        (frozenset({"c3", "c4"}),),
    ),
    PatternTemplate(
        AntiPatternId.UEWPI,
        (
            SubClassOf(Named(_C1), Only(Role(_R2), Named(_C3))),
            SubClassOf(Named(_C1), Some(Role(_R1), Named(_C2))),
            SubPropertyOf(_R1, _R2),
            DisjointClasses(_C2, _C3),
        ),
        (frozenset({"c2", "c3"}), frozenset({"r1", "r2"})),
    ),
    PatternTemplate(
        AntiPatternId.UEWIP,
        (
            SubClassOf(Named(_C2), Some(Role(_R, inverse=True), Named(_C1))),
            SubClassOf(Named(_C1), Only(Role(_R), Named(_C3))),
            DisjointClasses(_C2, _C3),
        ),
        (frozenset({"c2", "c3"}),),
    ),
    PatternTemplate(
        AntiPatternId.SOSINETO,
        (
            SubClassOf(Named(_C1), Some(Role(_R), Named(_C2))),
            SubClassOf(Named(_C1), Some(Role(_R), Named(_C3))),
            SubClassOf(Named(_C1), AtMost(1, Role(_R), TOP)),
            DisjointClasses(_C2, _C3),
        ),
        (frozenset({"c2", "c3"}),),
    ),
    PatternTemplate(
        AntiPatternId.OOD,
        (
            Domain(_R, _C1),
            PropertyAssertion(_R, _A, _B),
            ClassAssertion(_A, Named(_C2)),
            DisjointClasses(_C1, _C2),
        ),
        (frozenset({"c1", "c2"}),),
    ),
    PatternTemplate(
        AntiPatternId.OOR,
        (
            Range(_R, _C1),
            PropertyAssertion(_R, _A, _B),
            ClassAssertion(_B, Named(_C2)),
            DisjointClasses(_C1, _C2),
        ),
        (frozenset({"c1", "c2"}),),
    ),
    PatternTemplate(
        AntiPatternId.CSC,
        (
            SubClassOf(Named(_C1), Named(_C2)),
            SubClassOf(Named(_C2), Named(_C3)),
            SubClassOf(Named(_C3), Named(_C1)),
        ),
        (frozenset({"c1", "c2"}), frozenset({"c2", "c3"}), frozenset({"c1", "c3"})),
    ),
)

_TEMPLATE_BY_ID = {t.id: t for t in _TEMPLATES}


def templates() -> tuple[PatternTemplate, ...]:
    """All fourteen pattern templates, in catalogue order."""
    return _TEMPLATES


def template(pattern_id: AntiPatternId) -> PatternTemplate:
    return _TEMPLATE_BY_ID[pattern_id]


# ---------------------------------------------------------------------------
# Unification
# ---------------------------------------------------------------------------

Subst = dict[str, EntityName]


def _unify_entity(pattern: EntityName, concrete: EntityName, subst: Subst) -> Subst | None:
    if is_variable(pattern):
        if pattern.kind is not concrete.kind:
            return None
        bound = subst.get(pattern.local)
        if bound is not None:
            return subst if bound == concrete else None
        out = dict(subst)
        out[pattern.local] = concrete
        return out
    return subst if pattern == concrete else None


def _unify_role(pattern: Role, concrete: Role, subst: Subst) -> Subst | None:
    if pattern.inverse != concrete.inverse:
        return None
    return _unify_entity(pattern.name, concrete.name, subst)


def _unify_expr(
    pattern: ClassExpression, concrete: ClassExpression, subst: Subst
) -> list[Subst]:
    if isinstance(pattern, Named) and isinstance(concrete, Named):
        out = _unify_entity(pattern.name, concrete.name, subst)
        return [out] if out is not None else []
    if isinstance(pattern, Top) and isinstance(concrete, Top):
        return [subst]
    if isinstance(pattern, Bottom) and isinstance(concrete, Bottom):
        return [subst]
    if isinstance(pattern, Not) and isinstance(concrete, Not):
        return _unify_expr(pattern.expr, concrete.expr, subst)
    if type(pattern) is type(concrete) and isinstance(pattern, (And, Or)):
        if len(pattern.args) != len(concrete.args) or len(pattern.args) > 4:
            return []
        results = []
        for perm in itertools.permutations(concrete.args):
            states = [subst]
            for p_arg, c_arg in zip(pattern.args, perm):
                states = [s2 for s in states for s2 in _unify_expr(p_arg, c_arg, s)]
                if not states:
                    break
            results.extend(states)
        return results
    if type(pattern) is type(concrete) and isinstance(pattern, (Some, Only)):
        out = _unify_role(pattern.role, concrete.role, subst)
        if out is None:
            return []
        return _unify_expr(pattern.filler, concrete.filler, out)
    if isinstance(pattern, AtMost) and isinstance(concrete, AtMost):
        if pattern.n != concrete.n:
            return []
        out = _unify_role(pattern.role, concrete.role, subst)
        if out is None:
            return []
        return _unify_expr(pattern.filler, concrete.filler, out)
    return []


def _unify_axiom(pattern: Axiom, concrete: Axiom, subst: Subst) -> list[Subst]:
    if isinstance(pattern, SubClassOf) and isinstance(concrete, SubClassOf):
        results = []
        for s in _unify_expr(pattern.sub, concrete.sub, subst):
            results.extend(_unify_expr(pattern.sup, concrete.sup, s))
        return results
    if isinstance(pattern, EquivalentClasses) and isinstance(concrete, EquivalentClasses):
        out = _unify_entity(pattern.a, concrete.a, subst)
        if out is None:
            return []
        return _unify_expr(pattern.b, concrete.b, out)
    if isinstance(pattern, DisjointClasses) and isinstance(concrete, DisjointClasses):
        results = []
        for first, second in ((concrete.a, concrete.b), (concrete.b, concrete.a)):
            out = _unify_entity(pattern.a, first, subst)
            if out is not None:
                out2 = _unify_entity(pattern.b, second, out)
                if out2 is not None:
                    results.append(out2)
        return results
    if isinstance(pattern, SubPropertyOf) and isinstance(concrete, SubPropertyOf):
        out = _unify_entity(pattern.sub, concrete.sub, subst)
        if out is None:
            return []
        out = _unify_entity(pattern.sup, concrete.sup, out)
        return [out] if out is not None else []
    if isinstance(pattern, InverseProperties) and isinstance(concrete, InverseProperties):
        results = []
        for first, second in ((concrete.a, concrete.b), (concrete.b, concrete.a)):
            out = _unify_entity(pattern.a, first, subst)
            if out is not None:
                out2 = _unify_entity(pattern.b, second, out)
                if out2 is not None:
                    results.append(out2)
        return results
    if isinstance(pattern, Domain) and isinstance(concrete, Domain):
        out = _unify_entity(pattern.prop, concrete.prop, subst)
        if out is None:
            return []
        out = _unify_entity(pattern.cls, concrete.cls, out)
        return [out] if out is not None else []
    if isinstance(pattern, Range) and isinstance(concrete, Range):
        out = _unify_entity(pattern.prop, concrete.prop, subst)
        if out is None:
            return []
        out = _unify_entity(pattern.cls, concrete.cls, out)
        return [out] if out is not None else []
    if isinstance(pattern, ClassAssertion) and isinstance(concrete, ClassAssertion):
        out = _unify_entity(pattern.individual, concrete.individual, subst)
        if out is None:
            return []
        return _unify_expr(pattern.expr, concrete.expr, out)
    if isinstance(pattern, PropertyAssertion) and isinstance(concrete, PropertyAssertion):
        out = _unify_entity(pattern.prop, concrete.prop, subst)
        if out is None:
            return []
        out = _unify_entity(pattern.subject, concrete.subject, out)
        if out is None:
            return []
        out = _unify_entity(pattern.object, concrete.object, out)
        return [out] if out is not None else []
    return []


def _respects_distinctness(template_: PatternTemplate, subst: Subst) -> bool:
    for group in template_.distinct:
        bound = [subst[v] for v in group if v in subst]
        if len(bound) != len({e for e in bound}):
            return False
    return True


def _substitute_entity(entity: EntityName, subst: Subst) -> EntityName:
    if is_variable(entity):
        return subst[entity.local]
    return entity


def _substitute_expr(expr: ClassExpression, subst: Subst) -> ClassExpression:
    if isinstance(expr, Named):
        return Named(_substitute_entity(expr.name, subst))
    if isinstance(expr, (Top, Bottom)):
        return expr
    if isinstance(expr, Not):
        return Not(_substitute_expr(expr.expr, subst))
    if isinstance(expr, And):
        return And(tuple(_substitute_expr(a, subst) for a in expr.args))
    if isinstance(expr, Or):
        return Or(tuple(_substitute_expr(a, subst) for a in expr.args))
    if isinstance(expr, Some):
        return Some(
            Role(_substitute_entity(expr.role.name, subst), expr.role.inverse),
            _substitute_expr(expr.filler, subst),
        )
    if isinstance(expr, Only):
        return Only(
            Role(_substitute_entity(expr.role.name, subst), expr.role.inverse),
            _substitute_expr(expr.filler, subst),
        )
    if isinstance(expr, AtMost):
        return AtMost(
            expr.n,
            Role(_substitute_entity(expr.role.name, subst), expr.role.inverse),
            _substitute_expr(expr.filler, subst),
        )
    raise TypeError(f"unknown expression {expr!r}")


def substitute_axiom(schema: Axiom, subst: Subst) -> Axiom:
    """Instantiate one schema axiom under a complete substitution."""
    if isinstance(schema, SubClassOf):
        return SubClassOf(_substitute_expr(schema.sub, subst), _substitute_expr(schema.sup, subst))
    if isinstance(schema, EquivalentClasses):
        return EquivalentClasses(
            _substitute_entity(schema.a, subst), _substitute_expr(schema.b, subst)
        )
    if isinstance(schema, DisjointClasses):
        return DisjointClasses(
            _substitute_entity(schema.a, subst), _substitute_entity(schema.b, subst)
        )
    if isinstance(schema, SubPropertyOf):
        return SubPropertyOf(
            _substitute_entity(schema.sub, subst), _substitute_entity(schema.sup, subst)
        )
    if isinstance(schema, InverseProperties):
        return InverseProperties(
            _substitute_entity(schema.a, subst), _substitute_entity(schema.b, subst)
        )
    if isinstance(schema, Domain):
        return Domain(_substitute_entity(schema.prop, subst), _substitute_entity(schema.cls, subst))
    if isinstance(schema, Range):
        return Range(_substitute_entity(schema.prop, subst), _substitute_entity(schema.cls, subst))
    if isinstance(schema, ClassAssertion):
        return ClassAssertion(
            _substitute_entity(schema.individual, subst), _substitute_expr(schema.expr, subst)
        )
    if isinstance(schema, PropertyAssertion):
        return PropertyAssertion(
            _substitute_entity(schema.prop, subst),
            _substitute_entity(schema.subject, subst),
            _substitute_entity(schema.object, subst),
        )
    raise TypeError(f"unknown schema {schema!r}")


def _variables_of_schema(schema: Axiom) -> set[str]:
    from .model import entity_names_of_axiom

    return {e.local for e in entity_names_of_axiom(schema) if is_variable(e)}


def _subst_key(subst: Subst) -> tuple[tuple[str, str], ...]:
    return tuple(sorted((v, e.iri) for v, e in subst.items()))


def _match_schemata(
    schemata: tuple[Axiom, ...], axioms: tuple[Axiom, ...]
) -> list[tuple[Subst, tuple[Axiom, ...]]]:
    """All ways to unify every schema axiom with some ontology axiom."""
    candidates = [a for a in axioms if not isinstance(a, Declaration)]
    results: list[tuple[Subst, tuple[Axiom, ...]]] = []

    def go(idx: int, subst: Subst, chosen: list[Axiom]) -> None:
        if idx == len(schemata):
            results.append((subst, tuple(chosen)))
            return
        for concrete in candidates:
            for nxt in _unify_axiom(schemata[idx], concrete, subst):
                chosen.append(concrete)
                go(idx + 1, nxt, chosen)
                chosen.pop()

    go(0, {}, [])
    return results


def detect(ontology: Ontology) -> list[tuple[AntiPatternId, MatchBinding]]:
    """Every complete pattern instance, deduplicated and deterministically
    ordered by (pattern, binding)."""
    found: dict[tuple[AntiPatternId, tuple[str, ...]], MatchBinding] = {}
    for tpl in _TEMPLATES:
        for subst, chosen in _match_schemata(tpl.schemata, ontology.axioms):
            if not _respects_distinctness(tpl, subst):
                continue
            matched_keys = tuple(sorted(axiom_key(a) for a in chosen))
            key = (tpl.id, matched_keys)
            binding = MatchBinding(
                substitution=tuple(sorted(subst.items())), matched=chosen, missing=()
            )
            previous = found.get(key)
            if previous is None or binding.sort_key < previous.sort_key:
                found[key] = binding
    order = {tpl.id: i for i, tpl in enumerate(_TEMPLATES)}
    return sorted(
        ((pid, binding) for (pid, _), binding in found.items()),
        key=lambda item: (order[item[0]], item[1].sort_key),
    )


def _candidate_pool(ontology: Ontology, kind: EntityKind) -> tuple[EntityName, ...]:
    if kind is EntityKind.CLASS:
        return named_classes(ontology)
    if kind is EntityKind.OBJECT_PROPERTY:
        return properties_of(ontology)
    return individuals_of(ontology)


def find_injection_sites(
    ontology: Ontology, pattern_id: AntiPatternId, max_missing: int
) -> list[MatchBinding]:
    """Bindings whose missing schema axioms (1..max_missing of them) could be
    injected; unbound variables range over the ontology's signature."""
    if max_missing not in (1, 2):
        raise ValueError("max_missing must be 1 or 2")
    tpl = _TEMPLATE_BY_ID[pattern_id]
    axiom_keys = {axiom_key(a) for a in ontology.axioms}
    var_kinds = {
        e.local: e.kind
        for schema in tpl.schemata
        for e in _schema_entities(schema)
        if is_variable(e)
    }

    sites: dict[tuple[tuple[str, ...], tuple[str, ...]], MatchBinding] = {}
    n = tpl.arity
    for missing_count in range(1, max_missing + 1):
        if missing_count > n:
            break
        for missing_idx in itertools.combinations(range(n), missing_count):
            matched_schemata = tuple(
                tpl.schemata[i] for i in range(n) if i not in missing_idx
            )
            missing_schemata = tuple(tpl.schemata[i] for i in missing_idx)
            for subst, chosen in _match_schemata(matched_schemata, ontology.axioms):
                free = sorted(
                    {
                        v
                        for schema in missing_schemata
                        for v in _variables_of_schema(schema)
                        if v not in subst
                    }
                )
                pools = [_candidate_pool(ontology, var_kinds[v]) for v in free]
                if any(len(p) == 0 for p in pools):
                    continue
                for combo in itertools.product(*pools):
                    full = dict(subst)
                    full.update(dict(zip(free, combo)))
                    if not _respects_distinctness(tpl, full):
                        continue
                    try:
                        missing_axioms = tuple(
                            substitute_axiom(s, full) for s in missing_schemata
                        )
                    except ValueError:
                        continue
                    if any(axiom_key(m) in axiom_keys for m in missing_axioms):
                        continue
                    matched_keys = tuple(sorted(axiom_key(a) for a in chosen))
                    missing_keys = tuple(sorted(axiom_key(m) for m in missing_axioms))
                    binding = MatchBinding(
                        substitution=tuple(sorted(full.items())),
                        matched=chosen,
                        missing=missing_axioms,
                    )
                    key = (matched_keys, missing_keys)
                    previous = sites.get(key)
                    if previous is None or binding.sort_key < previous.sort_key:
                        sites[key] = binding
    return sorted(
        sites.values(),
        key=lambda b: (len(b.missing), tuple(axiom_key(m) for m in b.missing), b.sort_key),
    )


def _schema_entities(schema: Axiom):
    from .model import entity_names_of_axiom

    return entity_names_of_axiom(schema)


def inject(
    ontology: Ontology, pattern_id: AntiPatternId, seed: int, max_missing: int = 2
) -> tuple[Ontology, InjectionReport]:
    """Complete the pattern by adding missing axioms at one eligible site.

    One-axiom sites are preferred; among the chosen tier the site is picked
    seeded-uniformly, so a fixed seed reproduces the exact output.
    """
    sites = find_injection_sites(ontology, pattern_id, 1)
    if not sites and max_missing >= 2:
        sites = [
            s for s in find_injection_sites(ontology, pattern_id, 2) if len(s.missing) == 2
        ]
    if not sites:
        raise NoSiteError(f"no injection site for {pattern_id.value} in {ontology.id}")
    rng = random.Random(seed)
    site = sites[rng.randrange(len(sites))]
    modified = ontology.with_axioms(site.missing)
    report = InjectionReport(
        pattern=pattern_id,
        injected_axioms=site.missing,
        binding=site,
        source_module=ontology.id,
    )
    return modified, report


# ---------------------------------------------------------------------------
# Minimal fixtures
# ---------------------------------------------------------------------------

_FIXTURE_ENTITIES: dict[str, EntityName] = {
    "c1": class_name("c1"),
    "c2": class_name("c2"),
    "c3": class_name("c3"),
    "c4": class_name("c4"),
    "r": property_name("r"),
    "r1": property_name("r1"),
    "r2": property_name("r2"),
    "a": individual_name("a"),
    "b": individual_name("b"),
}


def minimal_fixture(pattern_id: AntiPatternId) -> Ontology:
    """The pattern instantiated with concrete names plus declarations."""
    tpl = _TEMPLATE_BY_ID[pattern_id]
    used = sorted(
        {v for schema in tpl.schemata for v in _variables_of_schema(schema)}
    )
    subst = {v: _FIXTURE_ENTITIES[v] for v in used}
    declarations = tuple(
        Declaration(subst[v]) for v in sorted(used, key=lambda v: subst[v].sort_key)
    )
    instantiated = tuple(substitute_axiom(s, subst) for s in tpl.schemata)
    return Ontology(pattern_id.value.lower(), declarations + instantiated)


def fixture_file_name(pattern_id: AntiPatternId) -> str:
    return pattern_id.value.lower() + ".omn"
