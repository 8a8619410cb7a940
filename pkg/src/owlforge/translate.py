"""Turn an ontology module into English (subject, relation, object) triples,
plain text, and a Levi-graph export, with token budgeting.

All names are prefix-stripped local names. The fixed English renderings are
frozen in tests/golden/triple_renderings.json so downstream datasets stay
stable. Token estimates are pluggable; the default counts whitespace words
in subject and object, one token for the relation (a closed vocabulary),
plus two separator tokens per triple.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

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
    Top,
)

DEFAULT_TOKEN_BUDGET = 4096


@dataclass(frozen=True)
class Triple:
    subject: str
    relation: str
    object: str

    def __post_init__(self) -> None:
        if not (self.subject and self.relation and self.object):
            raise ValueError("triple fields must be non-empty")


@dataclass(frozen=True)
class TripleDoc:
    module_id: str
    triples: tuple[Triple, ...]
    token_count: int
    label: str | None = None  # "consistent" | "inconsistent"
    pattern: str | None = None

    def with_label(self, label: str | None, pattern: str | None) -> "TripleDoc":
        return TripleDoc(self.module_id, self.triples, self.token_count, label, pattern)


@dataclass(frozen=True)
class LeviGraph:
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]


TokenEstimator = Callable[[Triple], int]


def default_triple_tokens(triple: Triple) -> int:
    """Whitespace words in subject and object, one token for the relation,
    plus two separator tokens."""
    return len(triple.subject.split()) + 1 + len(triple.object.split()) + 2


def estimate_tokens(doc: TripleDoc, estimator: TokenEstimator = default_triple_tokens) -> int:
    return sum(estimator(t) for t in doc.triples)


def render_role(role: Role) -> str:
    return ("inverse " + role.name.local) if role.inverse else role.name.local


def render_expr(expr: ClassExpression) -> str:
    """English phrase for a class expression, prefix-free."""
    if isinstance(expr, Named):
        return expr.name.local
    if isinstance(expr, Top):
        return "Thing"
    if isinstance(expr, Bottom):
        return "Nothing"
    if isinstance(expr, Not):
        return "not " + render_expr(expr.expr)
    if isinstance(expr, And):
        return " and ".join(render_expr(a) for a in expr.args)
    if isinstance(expr, Or):
        return " or ".join(render_expr(a) for a in expr.args)
    if isinstance(expr, Some):
        return f"some {render_role(expr.role)} {render_expr(expr.filler)}"
    if isinstance(expr, Only):
        return f"only {render_role(expr.role)} {render_expr(expr.filler)}"
    if isinstance(expr, AtMost):
        head = f"at most {expr.n} {render_role(expr.role)}"
        if isinstance(expr.filler, Top):
            return head
        return f"{head} {render_expr(expr.filler)}"
    raise TypeError(f"unknown expression {expr!r}")


_DECLARATION_NOUN = {
    EntityKind.CLASS: "class",
    EntityKind.OBJECT_PROPERTY: "object property",
    EntityKind.INDIVIDUAL: "individual",
}


def axiom_to_triple(axiom: Axiom) -> Triple:
    if isinstance(axiom, Declaration):
        return Triple(axiom.entity.local, "is a", _DECLARATION_NOUN[axiom.entity.kind])
    if isinstance(axiom, SubClassOf):
        return Triple(render_expr(axiom.sub), "is a subclass of", render_expr(axiom.sup))
    if isinstance(axiom, EquivalentClasses):
        return Triple(axiom.a.local, "is equivalent to", render_expr(axiom.b))
    if isinstance(axiom, DisjointClasses):
        return Triple(axiom.a.local, "is disjoint with", axiom.b.local)
    if isinstance(axiom, SubPropertyOf):
        return Triple(axiom.sub.local, "is a subproperty of", axiom.sup.local)
    if isinstance(axiom, InverseProperties):
        return Triple(axiom.a.local, "is inverse of", axiom.b.local)
    if isinstance(axiom, Domain):
        return Triple(axiom.prop.local, "has domain", axiom.cls.local)
    if isinstance(axiom, Range):
        return Triple(axiom.prop.local, "has range", axiom.cls.local)
    if isinstance(axiom, ClassAssertion):
        return Triple(axiom.individual.local, "has class", render_expr(axiom.expr))
    if isinstance(axiom, PropertyAssertion):
        return Triple(axiom.subject.local, axiom.prop.local, axiom.object.local)
    raise TypeError(f"unknown axiom {axiom!r}")


def to_triples(
    ontology: Ontology, estimator: TokenEstimator = default_triple_tokens
) -> TripleDoc:
    """One triple per axiom, in source axiom order."""
    triples = tuple(axiom_to_triple(a) for a in ontology.axioms)
    doc = TripleDoc(ontology.id, triples, 0)
    return TripleDoc(ontology.id, triples, estimate_tokens(doc, estimator))


def to_text(doc: TripleDoc) -> str:
    """One capitalized, period-terminated sentence per triple."""
    sentences = []
    for t in doc.triples:
        raw = f"{t.subject} {t.relation} {t.object}"
        sentences.append(raw[0].upper() + raw[1:] + ".")
    return " ".join(sentences)


def to_levi(doc: TripleDoc) -> LeviGraph:
    """Each triple becomes subject -> fresh relation node -> object."""
    nodes: dict[str, None] = {}
    edges: list[tuple[str, str]] = []
    for k, t in enumerate(doc.triples):
        relation_node = f"{t.relation}@{k}"
        nodes.setdefault(t.subject, None)
        nodes[relation_node] = None
        nodes.setdefault(t.object, None)
        edges.append((t.subject, relation_node))
        edges.append((relation_node, t.object))
    return LeviGraph(tuple(nodes), tuple(edges))


def filter_by_budget(docs: list[TripleDoc], budget: int = DEFAULT_TOKEN_BUDGET) -> list[TripleDoc]:
    return [d for d in docs if d.token_count <= budget]


def doc_to_json_dict(doc: TripleDoc) -> dict:
    """The JSONL record shape shared with the dataset builder."""
    return {
        "id": doc.module_id,
        "triples": [[t.subject, t.relation, t.object] for t in doc.triples],
        "text": to_text(doc),
        "tokens": doc.token_count,
        "label": doc.label,
        "pattern": doc.pattern,
    }


def doc_from_json_dict(data: dict) -> TripleDoc:
    triples = tuple(Triple(s, r, o) for s, r, o in data["triples"])
    return TripleDoc(
        module_id=data["id"],
        triples=triples,
        token_count=int(data["tokens"]),
        label=data.get("label"),
        pattern=data.get("pattern"),
    )


def levi_to_json_dict(graph: LeviGraph) -> dict:
    return {"nodes": list(graph.nodes), "edges": [list(e) for e in graph.edges]}
