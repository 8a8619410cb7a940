"""Tableau-based consistency and coherence checking.

Supported fragment: ALC plus role hierarchies, inverse roles, max-1
cardinality on Thing, named-class disjointness, property domain and range,
and A-Box assertions. Axiom left-hand sides must be named classes (the
parser already enforces this), which keeps lazy unfolding complete under the
canonical-model convention: an atom holds at a node exactly when it is in
the node's label.

Rules: lazy unfolding of subclass and equivalence axioms, intersection and
union decomposition, existential successor creation, universal propagation
across the role hierarchy and inverses, domain and range as edge-triggered
label additions, and max-1 merging of excess neighbors (counting subroles
and inverse traversal). A clash is a complemented atom pair, Nothing, or a
disjointness violation in one label.

Termination uses pairwise blocking (label equality of the node, its
predecessor, and the connecting edge), which is required for inverse-role
safety; plain subset blocking is not sound here. Branching is depth-first
over union members in label insertion order, with ties broken by node id,
so witnesses are reproducible. Consistent verdicts carry an explicit finite
model obtained by folding blocked subtrees onto their blockers; the model is
re-checkable with the direct evaluator in ``finitemodel``. Inconsistent
verdicts carry the full rule-application trace ending in the final clash;
replaying means re-running the deterministic checker and comparing traces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .finitemodel import FiniteModel, check_model
from .model import (
    And,
    AtMost,
    Axiom,
    Bottom,
    BOTTOM,
    ClassAssertion,
    ClassExpression,
    ConsistentCoherent,
    Declaration,
    DisjointClasses,
    Domain,
    EntityKind,
    EntityName,
    EquivalentClasses,
    Incoherent,
    Inconsistent,
    InverseProperties,
    Named,
    Not,
    Only,
    Ontology,
    OntologyStatus,
    Or,
    PropertyAssertion,
    Range,
    Some,
    SubClassOf,
    SubPropertyOf,
    TOP,
    Top,
    expr_key,
    individual_name,
    named_classes,
    nnf,
    signature_of,
)

RoleKey = tuple[EntityName, bool]  # (property, inverted)

_MAX_STEPS = 500_000

_PROBE_NS = "urn:owlforge-probe#"


class UnsupportedAxiomError(ValueError):
    """An axiom outside the supported fragment reached the reasoner."""


class UnknownClassError(KeyError):
    """Satisfiability was asked for a class not in the signature."""


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    node: int
    detail: str


@dataclass(frozen=True)
class CompletionWitness:
    """Saturated clash-free completion graph: node labels plus edges.

    Returned for consistent ontologies whose blocked graph does not fold
    into a finite interpretation (inverse roles plus max-1 restrictions can
    force infinite models); consistency then rests on the unravelling of
    this graph rather than on an explicit finite model.
    """

    nodes: tuple[tuple[int, tuple[str, ...]], ...]  # (node id, sorted label keys)
    edges: tuple[tuple[int, str, int], ...]
    blocked: tuple[tuple[int, int], ...]  # (node, blocker)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a consistency check.

    ``status`` is ConsistentCoherent when no clash was found (the check
    does not assess coherence; ``classify_status`` does) and Inconsistent
    otherwise. The witness is a finite model when one can be folded out of
    the completion graph, the graph labeling itself otherwise, or the
    clash trace."""

    status: OntologyStatus
    witness: Union[FiniteModel, CompletionWitness, tuple[TraceEntry, ...]]


# ---------------------------------------------------------------------------
# Compilation
# ---------------------------------------------------------------------------


@dataclass
class CompiledOntology:
    source: Ontology
    unfoldings: dict[EntityName, tuple[ClassExpression, ...]]
    gcis: tuple[ClassExpression, ...]
    disjoint: dict[EntityName, frozenset[EntityName]]
    role_supers: dict[RoleKey, frozenset[RoleKey]]
    domains: dict[EntityName, tuple[EntityName, ...]]
    ranges: dict[EntityName, tuple[EntityName, ...]]
    class_assertions: tuple[tuple[EntityName, ClassExpression], ...]
    property_assertions: tuple[tuple[EntityName, EntityName, EntityName], ...]
    named_classes: tuple[EntityName, ...]
    individuals: tuple[EntityName, ...]


def _validate_fragment(expr: ClassExpression) -> None:
    if isinstance(expr, AtMost):
        if expr.n != 1 or not isinstance(expr.filler, Top):
            raise UnsupportedAxiomError(
                f"only max-1 restrictions on Thing are supported, got {expr_key(expr)}"
            )
        return
    if isinstance(expr, Not):
        _validate_fragment(expr.expr)
    elif isinstance(expr, (And, Or)):
        for arg in expr.args:
            _validate_fragment(arg)
    elif isinstance(expr, (Some, Only)):
        _validate_fragment(expr.filler)


def compile_ontology(ontology: Ontology) -> CompiledOntology:
    """Normalize the ontology into the structures the expansion rules use."""
    unfoldings: dict[EntityName, list[ClassExpression]] = {}
    gcis: list[ClassExpression] = []
    disjoint: dict[EntityName, set[EntityName]] = {}
    role_edges: dict[RoleKey, set[RoleKey]] = {}
    domains: dict[EntityName, list[EntityName]] = {}
    ranges: dict[EntityName, list[EntityName]] = {}
    class_assertions: list[tuple[EntityName, ClassExpression]] = []
    property_assertions: list[tuple[EntityName, EntityName, EntityName]] = []

    def to_nnf(expr: ClassExpression) -> ClassExpression:
        try:
            result = nnf(expr)
        except ValueError as exc:
            raise UnsupportedAxiomError(str(exc)) from exc
        _validate_fragment(result)
        return result

    for axiom in ontology.axioms:
        if isinstance(axiom, Declaration):
            continue
        if isinstance(axiom, SubClassOf):
            if not isinstance(axiom.sub, Named):
                raise UnsupportedAxiomError("complex left-hand sides are not supported")
            unfoldings.setdefault(axiom.sub.name, []).append(to_nnf(axiom.sup))
        elif isinstance(axiom, EquivalentClasses):
            unfoldings.setdefault(axiom.a, []).append(to_nnf(axiom.b))
            if isinstance(axiom.b, Named):
                unfoldings.setdefault(axiom.b.name, []).append(Named(axiom.a))
            else:
                gcis.append(to_nnf(Or((Not(axiom.b), Named(axiom.a)))))
        elif isinstance(axiom, DisjointClasses):
            disjoint.setdefault(axiom.a, set()).add(axiom.b)
            disjoint.setdefault(axiom.b, set()).add(axiom.a)
        elif isinstance(axiom, SubPropertyOf):
            role_edges.setdefault((axiom.sub, False), set()).add((axiom.sup, False))
            role_edges.setdefault((axiom.sub, True), set()).add((axiom.sup, True))
        elif isinstance(axiom, InverseProperties):
            for a, b in ((axiom.a, axiom.b), (axiom.b, axiom.a)):
                role_edges.setdefault((a, False), set()).add((b, True))
                role_edges.setdefault((a, True), set()).add((b, False))
        elif isinstance(axiom, Domain):
            domains.setdefault(axiom.prop, []).append(axiom.cls)
        elif isinstance(axiom, Range):
            ranges.setdefault(axiom.prop, []).append(axiom.cls)
        elif isinstance(axiom, ClassAssertion):
            class_assertions.append((axiom.individual, to_nnf(axiom.expr)))
        elif isinstance(axiom, PropertyAssertion):
            property_assertions.append((axiom.prop, axiom.subject, axiom.object))
        else:
            raise UnsupportedAxiomError(f"unsupported axiom {axiom!r}")

    signature = signature_of(ontology)
    props = sorted(
        (n for n in signature if n.kind is EntityKind.OBJECT_PROPERTY),
        key=lambda n: n.sort_key,
    )
    keys = [(p, False) for p in props] + [(p, True) for p in props]
    supers: dict[RoleKey, frozenset[RoleKey]] = {}
    for key in keys:
        seen = {key}
        stack = [key]
        while stack:
            current = stack.pop()
            for nxt in role_edges.get(current, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        supers[key] = frozenset(seen)

    return CompiledOntology(
        source=ontology,
        unfoldings={k: tuple(v) for k, v in unfoldings.items()},
        gcis=tuple(gcis),
        disjoint={k: frozenset(v) for k, v in disjoint.items()},
        role_supers=supers,
        domains={k: tuple(sorted(v, key=lambda c: c.sort_key)) for k, v in domains.items()},
        ranges={k: tuple(sorted(v, key=lambda c: c.sort_key)) for k, v in ranges.items()},
        class_assertions=tuple(class_assertions),
        property_assertions=tuple(property_assertions),
        named_classes=named_classes(ontology),
        individuals=tuple(
            sorted(
                (n for n in signature if n.kind is EntityKind.INDIVIDUAL),
                key=lambda n: n.sort_key,
            )
        ),
    )


# ---------------------------------------------------------------------------
# Completion graph
# ---------------------------------------------------------------------------


class _Node:
    __slots__ = (
        "id", "label", "items", "named", "negated", "processed",
        "is_abox", "parent", "parent_edge", "merged_into",
    )

    def __init__(
        self,
        node_id: int,
        is_abox: bool,
        parent: int | None = None,
        parent_edge: RoleKey | None = None,
    ):
        self.id = node_id
        self.label: set[ClassExpression] = set()
        self.items: list[ClassExpression] = []  # insertion order, drives processing
        self.named: set[EntityName] = set()
        self.negated: set[EntityName] = set()
        self.processed = 0
        self.is_abox = is_abox
        self.parent = parent
        self.parent_edge = parent_edge
        self.merged_into: int | None = None

    def copy(self) -> "_Node":
        clone = _Node(self.id, self.is_abox, self.parent, self.parent_edge)
        clone.label = set(self.label)
        clone.items = list(self.items)
        clone.named = set(self.named)
        clone.negated = set(self.negated)
        clone.processed = self.processed
        clone.merged_into = self.merged_into
        return clone


class _Edge:
    __slots__ = ("src", "prop", "dst", "from_inverse")

    def __init__(self, src: int, prop: EntityName, dst: int, from_inverse: bool):
        self.src = src
        self.prop = prop
        self.dst = dst
        self.from_inverse = from_inverse

    def copy(self) -> "_Edge":
        return _Edge(self.src, self.prop, self.dst, self.from_inverse)


class _Tableau:
    def __init__(self, compiled: CompiledOntology, probe: ClassExpression | None = None):
        self.c = compiled
        self.nodes: list[_Node] = []
        self.edges: list[_Edge] = []
        self.out_edges: dict[int, list[_Edge]] = {}
        self.in_edges: dict[int, list[_Edge]] = {}
        self.dr_cursor = 0  # next edge index for domain/range processing
        self.clash: str | None = None
        self.trace: list[TraceEntry] = []
        self.steps = 0

        node_of: dict[EntityName, int] = {}
        for ind in compiled.individuals:
            node_of[ind] = self._new_node(is_abox=True).id
        for ind, expr in compiled.class_assertions:
            self._add_label(node_of[ind], expr)
        for prop, subj, obj in compiled.property_assertions:
            self._register_edge(_Edge(node_of[subj], prop, node_of[obj], False))
        if probe is not None:
            probe_node = self._new_node(is_abox=True)
            self._add_label(probe_node.id, probe)
        if not self.nodes:
            self._new_node(is_abox=False)
        self.abox_nodes = node_of

    # -- basic state -------------------------------------------------------

    def _new_node(
        self, is_abox: bool, parent: int | None = None, parent_edge: RoleKey | None = None
    ) -> _Node:
        node = _Node(len(self.nodes), is_abox, parent, parent_edge)
        self.nodes.append(node)
        for g in self.c.gcis:
            self._add_label(node.id, g)
        return node

    def _add_label(self, node_id: int, expr: ClassExpression) -> bool:
        node = self.nodes[node_id]
        if expr in node.label:
            return False
        node.label.add(expr)
        node.items.append(expr)
        if isinstance(expr, Bottom):
            self._set_clash(f"Nothing at node {node_id}")
        elif isinstance(expr, Named):
            name = expr.name
            node.named.add(name)
            if name in node.negated:
                self._set_clash(f"{name.local} and its complement at node {node_id}")
            else:
                for other in sorted(
                    self.c.disjoint.get(name, frozenset()), key=lambda c: c.sort_key
                ):
                    if other in node.named:
                        a, b = sorted((name, other), key=lambda c: c.sort_key)
                        self._set_clash(f"disjoint {a.local}/{b.local} at node {node_id}")
                        break
        elif isinstance(expr, Not) and isinstance(expr.expr, Named):
            name = expr.expr.name
            node.negated.add(name)
            if name in node.named:
                self._set_clash(f"{name.local} and its complement at node {node_id}")
        return True

    def _set_clash(self, description: str) -> None:
        if self.clash is None:
            self.clash = description

    def _register_edge(self, edge: _Edge) -> None:
        self.edges.append(edge)
        self.out_edges.setdefault(edge.src, []).append(edge)
        self.in_edges.setdefault(edge.dst, []).append(edge)

    def _rebuild_edge_index(self) -> None:
        self.out_edges = {}
        self.in_edges = {}
        for edge in self.edges:
            self.out_edges.setdefault(edge.src, []).append(edge)
            self.in_edges.setdefault(edge.dst, []).append(edge)

    def _resolve(self, node_id: int) -> int:
        while self.nodes[node_id].merged_into is not None:
            node_id = self.nodes[node_id].merged_into  # type: ignore[assignment]
        return node_id

    def _live_nodes(self) -> list[_Node]:
        return [n for n in self.nodes if n.merged_into is None]

    def _tick(self, rule: str, node: int, detail: str) -> None:
        self.steps += 1
        if self.steps > _MAX_STEPS:
            raise RuntimeError("tableau expansion exceeded the step limit")
        self.trace.append(TraceEntry(rule, node, detail))

    def _snapshot(self):
        return (
            [n.copy() for n in self.nodes],
            [e.copy() for e in self.edges],
            self.dr_cursor,
            self.clash,
        )

    def _restore(self, snap) -> None:
        nodes, edges, cursor, clash = snap
        self.nodes = [n.copy() for n in nodes]
        self.edges = [e.copy() for e in edges]
        self._rebuild_edge_index()
        self.dr_cursor = cursor
        self.clash = clash

    # -- neighbor semantics --------------------------------------------------

    def _neighbors(self, node_id: int, key: RoleKey) -> list[int]:
        found: set[int] = set()
        supers = self.c.role_supers
        for e in self.out_edges.get(node_id, ()):
            if key in supers.get((e.prop, False), frozenset()):
                found.add(e.dst)
        for e in self.in_edges.get(node_id, ()):
            if key in supers.get((e.prop, True), frozenset()):
                found.add(e.src)
        return sorted(found)

    # -- deterministic rules -------------------------------------------------

    def _process_labels(self) -> bool:
        """Unfold named classes and decompose intersections, incrementally:
        every label item is handled exactly once per node."""
        changed = False
        for node in self.nodes:
            if node.merged_into is not None:
                continue
            while node.processed < len(node.items):
                expr = node.items[node.processed]
                node.processed += 1
                if isinstance(expr, Named):
                    for consequence in self.c.unfoldings.get(expr.name, ()):
                        if self._add_label(node.id, consequence):
                            self._tick("unfold", node.id, expr_key(consequence))
                            changed = True
                elif isinstance(expr, And):
                    for arg in expr.args:
                        if self._add_label(node.id, arg):
                            self._tick("and", node.id, expr_key(arg))
                            changed = True
        return changed

    def _domain_range_rule(self) -> bool:
        changed = False
        while self.dr_cursor < len(self.edges):
            e = self.edges[self.dr_cursor]
            self.dr_cursor += 1
            src, dst = self._resolve(e.src), self._resolve(e.dst)
            for q, flag in sorted(
                self.c.role_supers.get((e.prop, False), frozenset()),
                key=lambda k: (k[0].sort_key, k[1]),
            ):
                dom_target, rng_target = (src, dst) if not flag else (dst, src)
                for cls in self.c.domains.get(q, ()):
                    if self._add_label(dom_target, Named(cls)):
                        self._tick("domain", dom_target, cls.local)
                        changed = True
                for cls in self.c.ranges.get(q, ()):
                    if self._add_label(rng_target, Named(cls)):
                        self._tick("range", rng_target, cls.local)
                        changed = True
        return changed

    def _only_rule(self) -> bool:
        changed = False
        for node in self._live_nodes():
            for expr in list(node.items):
                if isinstance(expr, Only):
                    key = (expr.role.name, expr.role.inverse)
                    for neighbor in self._neighbors(node.id, key):
                        if self._add_label(neighbor, expr.filler):
                            self._tick("only", neighbor, expr_key(expr.filler))
                            changed = True
        return changed

    def _atmost_rule(self, skip: set[int]) -> bool:
        for node in self._live_nodes():
            if node.id in skip:
                continue
            for expr in node.items:
                if isinstance(expr, AtMost):
                    key = (expr.role.name, expr.role.inverse)
                    neighbors = self._neighbors(node.id, key)
                    if len(neighbors) > expr.n:
                        keep, gone = neighbors[0], neighbors[1]
                        self._merge(keep, gone)
                        self._tick("merge", node.id, f"{gone}->{keep}")
                        return True
        return False

    def _merge(self, keep: int, gone: int) -> None:
        keep_node = self.nodes[keep]
        gone_node = self.nodes[gone]
        for expr in gone_node.items:
            self._add_label(keep, expr)
        seen: set[tuple[int, EntityName, int]] = set()
        new_edges: list[_Edge] = []
        for e in self.edges:
            src = keep if e.src == gone else e.src
            dst = keep if e.dst == gone else e.dst
            sig = (src, e.prop, dst)
            if sig in seen:
                continue
            seen.add(sig)
            new_edges.append(_Edge(src, e.prop, dst, e.from_inverse))
        self.edges = new_edges
        self._rebuild_edge_index()
        self.dr_cursor = 0
        for node in self.nodes:
            if node.parent == gone:
                node.parent = keep
        keep_node.is_abox = keep_node.is_abox or gone_node.is_abox
        gone_node.merged_into = keep

    # -- blocking ------------------------------------------------------------

    def _blocking(self) -> tuple[dict[int, int], set[int]]:
        """(directly blocked node -> blocker, indirectly blocked node set).

        Anywhere pairwise blocking: the blocker is the earliest-created,
        itself unblocked and unfrozen, non-root node with an identical
        label whose predecessor label and connecting edge also match.
        Descendants of a blocked node are indirectly blocked (frozen): no
        generating or branching rule applies below a blocked node, which is
        what bounds the completion graph. Parents are always created before
        children and merges keep the smaller id, so one ascending pass
        settles the whole relation deterministically.
        """
        direct: dict[int, int] = {}
        frozen: set[int] = set()
        candidates: list[tuple[int, frozenset, frozenset, RoleKey | None]] = []
        for node in self._live_nodes():
            if node.is_abox or node.parent is None:
                continue
            parent_id = self._resolve(node.parent)
            if parent_id in direct or parent_id in frozen:
                frozen.add(node.id)
                continue
            node_label = frozenset(node.label)
            parent_label = frozenset(self.nodes[parent_id].label)
            blocker = None
            for earlier_id, earlier_label, earlier_parent_label, earlier_edge in candidates:
                if (
                    earlier_label == node_label
                    and earlier_parent_label == parent_label
                    and earlier_edge == node.parent_edge
                ):
                    blocker = earlier_id
                    break
            if blocker is not None:
                direct[node.id] = blocker
            else:
                candidates.append((node.id, node_label, parent_label, node.parent_edge))
        return direct, frozen

    def _some_rule(self, skip: set[int]) -> bool:
        for node in self._live_nodes():
            if node.id in skip:
                continue
            for expr in node.items:
                if isinstance(expr, Some):
                    key = (expr.role.name, expr.role.inverse)
                    if any(
                        expr.filler in self.nodes[n].label
                        for n in self._neighbors(node.id, key)
                    ):
                        continue
                    fresh = self._new_node(is_abox=False, parent=node.id, parent_edge=key)
                    self._add_label(fresh.id, expr.filler)
                    if expr.role.inverse:
                        self._register_edge(_Edge(fresh.id, expr.role.name, node.id, True))
                    else:
                        self._register_edge(_Edge(node.id, expr.role.name, fresh.id, False))
                    self._tick("some", node.id, f"{expr_key(expr)}->{fresh.id}")
                    return True
        return False

    def _pick_or(self, skip: set[int]) -> tuple[int, Or] | None:
        for node in self._live_nodes():
            if node.id in skip:
                continue
            for expr in node.items:
                if isinstance(expr, Or) and not any(arg in node.label for arg in expr.args):
                    return node.id, expr
        return None

    # -- main loop -----------------------------------------------------------

    def run(self) -> str | None:
        """Expand to completion; returns a clash description or None."""
        while True:
            if self.clash is not None:
                self._tick("clash", -1, self.clash)
                return self.clash
            if self._process_labels():
                continue
            if self._domain_range_rule():
                continue
            if self._only_rule():
                continue
            direct, frozen = self._blocking()
            skip = set(direct) | frozen
            if self._atmost_rule(skip):
                continue
            if self._some_rule(skip):
                continue
            pick = self._pick_or(skip)
            if pick is None:
                return None
            node_id, expr = pick
            snap = self._snapshot()
            last_clash: str | None = None
            for idx, arg in enumerate(expr.args):
                if idx:
                    self._restore(snap)
                self._tick("or", node_id, f"{expr_key(expr)}#{idx}")
                self._add_label(node_id, arg)
                last_clash = self.run()
                if last_clash is None:
                    return None
                self._tick("backtrack", node_id, f"{expr_key(expr)}#{idx}")
            return last_clash

    # -- model extraction ------------------------------------------------------

    def extract_witness(self) -> Union[FiniteModel, CompletionWitness]:
        """Fold blocked subtrees onto their blockers and validate the
        result; fall back to exporting the completion graph when the folded
        structure is not a model (no finite-model property here)."""
        model = self._fold_model()
        if check_model(model, self.c.source):
            return model
        blocked, frozen = self._blocking()
        live = [n for n in self._live_nodes()]
        return CompletionWitness(
            nodes=tuple(
                (n.id, tuple(sorted(expr_key(e) for e in n.label))) for n in live
            ),
            edges=tuple(
                sorted((e.src, e.prop.iri, e.dst) for e in self.edges)
            ),
            blocked=tuple(sorted(blocked.items())),
        )

    def _fold_model(self) -> FiniteModel:
        blocked, frozen = self._blocking()
        live_ids = [n.id for n in self._live_nodes()]

        def fold(node_id: int) -> int:
            node_id = self._resolve(node_id)
            return blocked.get(node_id, node_id)

        retained = [i for i in live_ids if i not in blocked and i not in frozen]
        index = {node_id: pos for pos, node_id in enumerate(sorted(retained))}

        classes: dict[EntityName, set[int]] = {}
        for node_id in retained:
            for name in self.nodes[node_id].named:
                classes.setdefault(name, set()).add(index[node_id])

        roles: dict[EntityName, set[tuple[int, int]]] = {}
        for e in self.edges:
            src, dst = fold(e.src), fold(e.dst)
            if src not in index or dst not in index:
                continue
            for q, flag in self.c.role_supers.get((e.prop, False), frozenset()):
                pair = (index[dst], index[src]) if flag else (index[src], index[dst])
                roles.setdefault(q, set()).add(pair)

        individuals = {
            ind: index[fold(node_id)] for ind, node_id in self.abox_nodes.items()
        }
        return FiniteModel(
            domain_size=len(retained),
            classes={k: frozenset(v) for k, v in classes.items()},
            roles={k: frozenset(v) for k, v in roles.items()},
            individuals=individuals,
        )


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def _run_check(compiled: CompiledOntology, probe: ClassExpression | None = None) -> Verdict:
    tableau = _Tableau(compiled, probe=probe)
    clash = tableau.run()
    if clash is None:
        return Verdict(ConsistentCoherent(), tableau.extract_witness())
    return Verdict(Inconsistent(clash), tuple(tableau.trace))


def check_consistency(ontology: Ontology) -> Verdict:
    """Decide A-Box plus T-Box consistency.

    Deterministic for identical input: fixed rule order, fixed branch order.
    """
    return _run_check(compile_ontology(ontology))


def is_class_satisfiable(
    ontology: Ontology, cls: EntityName
) -> tuple[bool, Union[FiniteModel, tuple[TraceEntry, ...]]]:
    """Whether the class can have an instance, with a model or clash trace."""
    if cls not in signature_of(ontology):
        raise UnknownClassError(cls.iri)
    compiled = compile_ontology(ontology)
    verdict = _run_check(compiled, probe=Named(cls))
    return isinstance(verdict.status, ConsistentCoherent), verdict.witness


def classify_status(ontology: Ontology) -> OntologyStatus:
    """Three-valued status: inconsistent, incoherent, or fully fine."""
    compiled = compile_ontology(ontology)
    verdict = _run_check(compiled)
    if isinstance(verdict.status, Inconsistent):
        return verdict.status
    unsat = []
    for cls in compiled.named_classes:
        probe_verdict = _run_check(compiled, probe=Named(cls))
        if isinstance(probe_verdict.status, Inconsistent):
            unsat.append(cls)
    if unsat:
        return Incoherent(tuple(sorted(unsat, key=lambda c: c.sort_key)))
    return ConsistentCoherent()


def replay_clash_trace(ontology: Ontology, trace: tuple[TraceEntry, ...]) -> bool:
    """Re-derive the clash deterministically and compare rule applications."""
    verdict = check_consistency(ontology)
    return isinstance(verdict.status, Inconsistent) and verdict.witness == trace
