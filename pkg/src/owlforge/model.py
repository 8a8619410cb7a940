"""Core ontology data model: entities, class expressions, and axioms.

Everything in this module is an immutable value object. Ontologies are freely
shared between the parser, the reasoners, and the corpus pipeline; all
operations are pure functions.

Entity identity is the full IRI (plus kind). Local names are display strings
used by the surface syntax and the English translation, never for identity.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Union

DEFAULT_NAMESPACE = "http://example.org/ontology#"

_LOCAL_FORBIDDEN = set("#/:")


class UnsupportedExpressionError(ValueError):
    """Raised when an expression falls outside the supported fragment."""


class EntityKind(str, Enum):
    CLASS = "Class"
    OBJECT_PROPERTY = "ObjectProperty"
    INDIVIDUAL = "Individual"


@dataclass(frozen=True, eq=False)
class EntityName:
    """A named entity. Identity is (kind, iri); ``local`` is display-only."""

    kind: EntityKind
    iri: str
    local: str

    def __post_init__(self) -> None:
        if not self.local:
            raise ValueError("entity local name must be non-empty")
        bad = _LOCAL_FORBIDDEN & set(self.local)
        if bad:
            raise ValueError(
                f"local name {self.local!r} contains separator characters {sorted(bad)}"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EntityName):
            return NotImplemented
        return self.kind == other.kind and self.iri == other.iri

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.kind, self.iri))
            object.__setattr__(self, "_hash", h)
        return h

    @property
    def sort_key(self) -> tuple[str, str]:
        return (self.kind.value, self.iri)

    def __repr__(self) -> str:  # keep reprs short in test output
        return f"{self.kind.value}({self.local})"


def split_iri(iri: str) -> tuple[str, str]:
    """Split a full IRI into (namespace, local) at the last #, / or :."""
    for sep in "#/:":
        idx = iri.rfind(sep)
        if idx >= 0:
            return iri[: idx + 1], iri[idx + 1 :]
    return "", iri


def class_name(local: str, namespace: str = DEFAULT_NAMESPACE) -> EntityName:
    return EntityName(EntityKind.CLASS, namespace + local, local)


def property_name(local: str, namespace: str = DEFAULT_NAMESPACE) -> EntityName:
    return EntityName(EntityKind.OBJECT_PROPERTY, namespace + local, local)


def individual_name(local: str, namespace: str = DEFAULT_NAMESPACE) -> EntityName:
    return EntityName(EntityKind.INDIVIDUAL, namespace + local, local)


@dataclass(frozen=True)
class Role:
    """A property or its inverse. Double inversion cannot be constructed."""

    name: EntityName
    inverse: bool = False
    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(('Role', self.name, self.inverse))
            object.__setattr__(self, "_hash", h)
        return h

    def inverted(self) -> "Role":
        return Role(self.name, not self.inverse)


# ---------------------------------------------------------------------------
# Class expressions
# ---------------------------------------------------------------------------


class ClassExpression:
    __slots__ = ()


@dataclass(frozen=True)
class Named(ClassExpression):
    name: EntityName
    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(('Named', self.name))
            object.__setattr__(self, "_hash", h)
        return h


@dataclass(frozen=True)
class Top(ClassExpression):
    pass


@dataclass(frozen=True)
class Bottom(ClassExpression):
    pass


TOP = Top()
BOTTOM = Bottom()


@dataclass(frozen=True)
class Not(ClassExpression):
    expr: ClassExpression
    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(('Not', self.expr))
            object.__setattr__(self, "_hash", h)
        return h


@dataclass(frozen=True)
class And(ClassExpression):
    args: tuple[ClassExpression, ...]

    def __post_init__(self) -> None:
        if len(self.args) < 2:
            raise ValueError("intersection needs at least 2 members")

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(("And", self.args))
            object.__setattr__(self, "_hash", h)
        return h


@dataclass(frozen=True)
class Or(ClassExpression):
    args: tuple[ClassExpression, ...]

    def __post_init__(self) -> None:
        if len(self.args) < 2:
            raise ValueError("union needs at least 2 members")

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(("Or", self.args))
            object.__setattr__(self, "_hash", h)
        return h


@dataclass(frozen=True)
class Some(ClassExpression):
    role: Role
    filler: ClassExpression
    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(('Some', self.role, self.filler))
            object.__setattr__(self, "_hash", h)
        return h


@dataclass(frozen=True)
class Only(ClassExpression):
    role: Role
    filler: ClassExpression
    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(('Only', self.role, self.filler))
            object.__setattr__(self, "_hash", h)
        return h


@dataclass(frozen=True)
class AtMost(ClassExpression):
    n: int
    role: Role
    filler: ClassExpression

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("cardinality bound must be >= 0")

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(("AtMost", self.n, self.role, self.filler))
            object.__setattr__(self, "_hash", h)
        return h


def conj(*args: ClassExpression) -> And:
    return And(tuple(args))


def disj(*args: ClassExpression) -> Or:
    return Or(tuple(args))


# ---------------------------------------------------------------------------
# Axioms
# ---------------------------------------------------------------------------


class Axiom:
    __slots__ = ()


@dataclass(frozen=True)
class SubClassOf(Axiom):
    sub: ClassExpression
    sup: ClassExpression


@dataclass(frozen=True)
class EquivalentClasses(Axiom):
    a: EntityName
    b: ClassExpression


@dataclass(frozen=True)
class DisjointClasses(Axiom):
    a: EntityName
    b: EntityName

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise ValueError("disjointness arguments must be distinct classes")


@dataclass(frozen=True)
class SubPropertyOf(Axiom):
    sub: EntityName
    sup: EntityName


@dataclass(frozen=True)
class InverseProperties(Axiom):
    a: EntityName
    b: EntityName


@dataclass(frozen=True)
class Domain(Axiom):
    prop: EntityName
    cls: EntityName


@dataclass(frozen=True)
class Range(Axiom):
    prop: EntityName
    cls: EntityName


@dataclass(frozen=True)
class ClassAssertion(Axiom):
    individual: EntityName
    expr: ClassExpression


@dataclass(frozen=True)
class PropertyAssertion(Axiom):
    prop: EntityName
    subject: EntityName
    object: EntityName


@dataclass(frozen=True)
class Declaration(Axiom):
    entity: EntityName


# ---------------------------------------------------------------------------
# Semantic status
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConsistentCoherent:
    pass


@dataclass(frozen=True)
class Incoherent:
    unsatisfiable: tuple[EntityName, ...]

    def __post_init__(self) -> None:
        if not self.unsatisfiable:
            raise ValueError("incoherent status needs at least one class")


@dataclass(frozen=True)
class Inconsistent:
    clash: str


OntologyStatus = Union[ConsistentCoherent, Incoherent, Inconsistent]


def status_tag(status: OntologyStatus) -> str:
    """Stable lowercase tag used in JSON outputs."""
    if isinstance(status, ConsistentCoherent):
        return "consistent"
    if isinstance(status, Incoherent):
        return "incoherent"
    return "inconsistent"


# ---------------------------------------------------------------------------
# Ontology
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ontology:
    id: str
    axioms: tuple[Axiom, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "axioms", tuple(self.axioms))

    @property
    def signature(self) -> frozenset[EntityName]:
        return signature_of(self)

    def with_axioms(self, extra: Iterable[Axiom], new_id: str | None = None) -> "Ontology":
        return Ontology(new_id if new_id is not None else self.id, self.axioms + tuple(extra))


def roles_of_expr(expr: ClassExpression) -> Iterator[EntityName]:
    if isinstance(expr, (Some, Only, AtMost)):
        yield expr.role.name
        yield from roles_of_expr(expr.filler)
    elif isinstance(expr, Not):
        yield from roles_of_expr(expr.expr)
    elif isinstance(expr, (And, Or)):
        for arg in expr.args:
            yield from roles_of_expr(arg)


def named_classes_of_expr(expr: ClassExpression) -> Iterator[EntityName]:
    if isinstance(expr, Named):
        yield expr.name
    elif isinstance(expr, Not):
        yield from named_classes_of_expr(expr.expr)
    elif isinstance(expr, (And, Or)):
        for arg in expr.args:
            yield from named_classes_of_expr(arg)
    elif isinstance(expr, (Some, Only, AtMost)):
        yield from named_classes_of_expr(expr.filler)


def entity_names_of_expr(expr: ClassExpression) -> Iterator[EntityName]:
    yield from named_classes_of_expr(expr)
    yield from roles_of_expr(expr)


def entity_names_of_axiom(axiom: Axiom) -> Iterator[EntityName]:
    if isinstance(axiom, SubClassOf):
        yield from entity_names_of_expr(axiom.sub)
        yield from entity_names_of_expr(axiom.sup)
    elif isinstance(axiom, EquivalentClasses):
        yield axiom.a
        yield from entity_names_of_expr(axiom.b)
    elif isinstance(axiom, DisjointClasses):
        yield axiom.a
        yield axiom.b
    elif isinstance(axiom, (SubPropertyOf,)):
        yield axiom.sub
        yield axiom.sup
    elif isinstance(axiom, InverseProperties):
        yield axiom.a
        yield axiom.b
    elif isinstance(axiom, (Domain, Range)):
        yield axiom.prop
        yield axiom.cls
    elif isinstance(axiom, ClassAssertion):
        yield axiom.individual
        yield from entity_names_of_expr(axiom.expr)
    elif isinstance(axiom, PropertyAssertion):
        yield axiom.prop
        yield axiom.subject
        yield axiom.object
    elif isinstance(axiom, Declaration):
        yield axiom.entity


def signature_of(ontology: Ontology) -> frozenset[EntityName]:
    """Exactly the entity names occurring in any axiom, deduplicated."""
    names: set[EntityName] = set()
    for axiom in ontology.axioms:
        names.update(entity_names_of_axiom(axiom))
    return frozenset(names)


def partition_abox_tbox_rbox(
    ontology: Ontology,
) -> tuple[tuple[Axiom, ...], tuple[Axiom, ...], tuple[Axiom, ...]]:
    """Split axioms into (A-Box, T-Box, R-Box); declarations are dropped."""
    abox: list[Axiom] = []
    tbox: list[Axiom] = []
    rbox: list[Axiom] = []
    for axiom in ontology.axioms:
        if isinstance(axiom, Declaration):
            continue
        if isinstance(axiom, (ClassAssertion, PropertyAssertion)):
            abox.append(axiom)
        elif isinstance(axiom, (SubPropertyOf, InverseProperties)):
            rbox.append(axiom)
        else:
            tbox.append(axiom)
    return tuple(abox), tuple(tbox), tuple(rbox)


# ---------------------------------------------------------------------------
# Negation normal form
# ---------------------------------------------------------------------------


def nnf(expr: ClassExpression) -> ClassExpression:
    """Push negation down to named classes, preserving semantics.

    AtMost(0, R, C) is rewritten to Only(R, not C) so the reasoner only ever
    sees positive max-1 restrictions. A negated AtMost with n >= 1 has no
    equivalent in the fragment and raises UnsupportedExpressionError.
    """
    if isinstance(expr, (Named, Top, Bottom)):
        return expr
    if isinstance(expr, And):
        return And(tuple(nnf(a) for a in expr.args))
    if isinstance(expr, Or):
        return Or(tuple(nnf(a) for a in expr.args))
    if isinstance(expr, Some):
        return Some(expr.role, nnf(expr.filler))
    if isinstance(expr, Only):
        return Only(expr.role, nnf(expr.filler))
    if isinstance(expr, AtMost):
        if expr.n == 0:
            return Only(expr.role, nnf(Not(expr.filler)))
        return AtMost(expr.n, expr.role, nnf(expr.filler))
    if isinstance(expr, Not):
        inner = expr.expr
        if isinstance(inner, Named):
            return expr
        if isinstance(inner, Top):
            return BOTTOM
        if isinstance(inner, Bottom):
            return TOP
        if isinstance(inner, Not):
            return nnf(inner.expr)
        if isinstance(inner, And):
            return Or(tuple(nnf(Not(a)) for a in inner.args))
        if isinstance(inner, Or):
            return And(tuple(nnf(Not(a)) for a in inner.args))
        if isinstance(inner, Some):
            return Only(inner.role, nnf(Not(inner.filler)))
        if isinstance(inner, Only):
            return Some(inner.role, nnf(Not(inner.filler)))
        if isinstance(inner, AtMost):
            if inner.n == 0:
                return Some(inner.role, nnf(inner.filler))
            raise UnsupportedExpressionError(
                f"negated max-{inner.n} restriction is outside the fragment"
            )
    raise UnsupportedExpressionError(f"unknown expression {expr!r}")


# ---------------------------------------------------------------------------
# Canonical ordering and equality helpers
# ---------------------------------------------------------------------------


def role_key_str(role: Role) -> str:
    return ("^" if role.inverse else "") + role.name.iri


def expr_key(expr: ClassExpression) -> str:
    """Total, deterministic ordering key for expressions."""
    if isinstance(expr, Named):
        return f"N[{expr.name.iri}]"
    if isinstance(expr, Top):
        return "T[]"
    if isinstance(expr, Bottom):
        return "B[]"
    if isinstance(expr, Not):
        return f"!({expr_key(expr.expr)})"
    if isinstance(expr, And):
        return "&(" + ",".join(expr_key(a) for a in expr.args) + ")"
    if isinstance(expr, Or):
        return "|(" + ",".join(expr_key(a) for a in expr.args) + ")"
    if isinstance(expr, Some):
        return f"E({role_key_str(expr.role)},{expr_key(expr.filler)})"
    if isinstance(expr, Only):
        return f"A({role_key_str(expr.role)},{expr_key(expr.filler)})"
    if isinstance(expr, AtMost):
        return f"M{expr.n}({role_key_str(expr.role)},{expr_key(expr.filler)})"
    raise TypeError(f"unknown expression {expr!r}")


def axiom_key(axiom: Axiom) -> str:
    """Total, deterministic ordering key for axioms."""
    if isinstance(axiom, SubClassOf):
        return f"sub({expr_key(axiom.sub)},{expr_key(axiom.sup)})"
    if isinstance(axiom, EquivalentClasses):
        return f"eqv({axiom.a.iri},{expr_key(axiom.b)})"
    if isinstance(axiom, DisjointClasses):
        return f"dis({axiom.a.iri},{axiom.b.iri})"
    if isinstance(axiom, SubPropertyOf):
        return f"spo({axiom.sub.iri},{axiom.sup.iri})"
    if isinstance(axiom, InverseProperties):
        return f"inv({axiom.a.iri},{axiom.b.iri})"
    if isinstance(axiom, Domain):
        return f"dom({axiom.prop.iri},{axiom.cls.iri})"
    if isinstance(axiom, Range):
        return f"rng({axiom.prop.iri},{axiom.cls.iri})"
    if isinstance(axiom, ClassAssertion):
        return f"cas({axiom.individual.iri},{expr_key(axiom.expr)})"
    if isinstance(axiom, PropertyAssertion):
        return f"pas({axiom.prop.iri},{axiom.subject.iri},{axiom.object.iri})"
    if isinstance(axiom, Declaration):
        return f"dcl({axiom.entity.kind.value},{axiom.entity.iri})"
    raise TypeError(f"unknown axiom {axiom!r}")


def same_axioms(a: Ontology, b: Ontology) -> bool:
    """Multiset equality of axioms, the round-trip notion of sameness."""
    return Counter(map(axiom_key, a.axioms)) == Counter(map(axiom_key, b.axioms))


def named_classes(ontology: Ontology) -> tuple[EntityName, ...]:
    return tuple(
        sorted(
            (n for n in signature_of(ontology) if n.kind is EntityKind.CLASS),
            key=lambda n: n.sort_key,
        )
    )


def properties(ontology: Ontology) -> tuple[EntityName, ...]:
    return tuple(
        sorted(
            (n for n in signature_of(ontology) if n.kind is EntityKind.OBJECT_PROPERTY),
            key=lambda n: n.sort_key,
        )
    )


def individuals(ontology: Ontology) -> tuple[EntityName, ...]:
    return tuple(
        sorted(
            (n for n in signature_of(ontology) if n.kind is EntityKind.INDIVIDUAL),
            key=lambda n: n.sort_key,
        )
    )
