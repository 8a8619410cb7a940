"""Exhaustive finite-model search over small domains.

This is the independent oracle used to cross-validate the tableau checker:
it literally enumerates every interpretation over domains of size 1 to
``max_domain`` (class extensions, role relations, individual assignments)
and returns the first one satisfying all axioms, or None when the space is
exhausted.

"No model within the bound" is treated as unsatisfiable only for the shipped
pattern fixtures, whose refutations are domain-size independent.

Enumeration detail: individual assignments and class extensions are walked
with early rejection of axioms that only mention assigned symbols; role
relations are enumerated as numpy lanes (one boolean adjacency matrix per
lane) so the innermost loop stays vectorized. Every found model is
re-checked by the plain-Python evaluator before being returned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .model import (
    And,
    AtMost,
    Axiom,
    Bottom,
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
    Role,
    Some,
    SubClassOf,
    SubPropertyOf,
    Top,
    individual_name,
    named_classes,
    individuals as individuals_of,
    properties as properties_of,
    roles_of_expr,
    named_classes_of_expr,
)

DEFAULT_BUDGET = 1_000_000_000

_PROBE_NS = "urn:owlforge-probe#"


class BudgetExceededError(RuntimeError):
    """The interpretation count exceeded the configured budget."""


@dataclass(frozen=True)
class FiniteModel:
    """An explicit interpretation over the domain {0, ..., domain_size-1}."""

    domain_size: int
    classes: Mapping[EntityName, frozenset[int]]
    roles: Mapping[EntityName, frozenset[tuple[int, int]]]
    individuals: Mapping[EntityName, int]


# ---------------------------------------------------------------------------
# Plain-Python semantics (the direct evaluator)
# ---------------------------------------------------------------------------


def _role_pairs(model: FiniteModel, role: Role) -> frozenset[tuple[int, int]]:
    pairs = model.roles.get(role.name, frozenset())
    if role.inverse:
        return frozenset((y, x) for x, y in pairs)
    return pairs


def evaluate_expr(model: FiniteModel, expr: ClassExpression) -> frozenset[int]:
    """The extension of a class expression under an explicit interpretation."""
    domain = frozenset(range(model.domain_size))
    if isinstance(expr, Named):
        return model.classes.get(expr.name, frozenset())
    if isinstance(expr, Top):
        return domain
    if isinstance(expr, Bottom):
        return frozenset()
    if isinstance(expr, Not):
        return domain - evaluate_expr(model, expr.expr)
    if isinstance(expr, And):
        result = domain
        for arg in expr.args:
            result = result & evaluate_expr(model, arg)
        return result
    if isinstance(expr, Or):
        result: frozenset[int] = frozenset()
        for arg in expr.args:
            result = result | evaluate_expr(model, arg)
        return result
    if isinstance(expr, (Some, Only, AtMost)):
        pairs = _role_pairs(model, expr.role)
        filler = evaluate_expr(model, expr.filler)
        if isinstance(expr, Some):
            return frozenset(x for x in domain if any((x, y) in pairs and y in filler for y in domain))
        if isinstance(expr, Only):
            return frozenset(
                x for x in domain if all(y in filler for y in domain if (x, y) in pairs)
            )
        return frozenset(
            x
            for x in domain
            if sum(1 for y in domain if (x, y) in pairs and y in filler) <= expr.n
        )
    raise TypeError(f"unknown expression {expr!r}")


def satisfies(model: FiniteModel, axiom: Axiom) -> bool:
    """Whether the interpretation satisfies one axiom."""
    if isinstance(axiom, SubClassOf):
        return evaluate_expr(model, axiom.sub) <= evaluate_expr(model, axiom.sup)
    if isinstance(axiom, EquivalentClasses):
        return model.classes.get(axiom.a, frozenset()) == evaluate_expr(model, axiom.b)
    if isinstance(axiom, DisjointClasses):
        return not (
            model.classes.get(axiom.a, frozenset()) & model.classes.get(axiom.b, frozenset())
        )
    if isinstance(axiom, SubPropertyOf):
        return model.roles.get(axiom.sub, frozenset()) <= model.roles.get(axiom.sup, frozenset())
    if isinstance(axiom, InverseProperties):
        forward = model.roles.get(axiom.a, frozenset())
        backward = model.roles.get(axiom.b, frozenset())
        return forward == frozenset((y, x) for x, y in backward)
    if isinstance(axiom, Domain):
        subjects = {x for x, _ in model.roles.get(axiom.prop, frozenset())}
        return subjects <= model.classes.get(axiom.cls, frozenset())
    if isinstance(axiom, Range):
        objects = {y for _, y in model.roles.get(axiom.prop, frozenset())}
        return objects <= model.classes.get(axiom.cls, frozenset())
    if isinstance(axiom, ClassAssertion):
        return model.individuals[axiom.individual] in evaluate_expr(model, axiom.expr)
    if isinstance(axiom, PropertyAssertion):
        pair = (model.individuals[axiom.subject], model.individuals[axiom.object])
        return pair in model.roles.get(axiom.prop, frozenset())
    if isinstance(axiom, Declaration):
        return True
    raise TypeError(f"unknown axiom {axiom!r}")


def check_model(model: FiniteModel, ontology: Ontology) -> bool:
    return all(satisfies(model, axiom) for axiom in ontology.axioms)


# ---------------------------------------------------------------------------
# Vectorized role-lane evaluation
# ---------------------------------------------------------------------------

_matrix_cache: dict[int, np.ndarray] = {}


def _all_matrices(n: int) -> np.ndarray:
    """All 2**(n*n) boolean adjacency matrices, shape (lanes, n, n)."""
    if n not in _matrix_cache:
        lanes = 1 << (n * n)
        bits = (np.arange(lanes)[:, None] >> np.arange(n * n)[None, :]) & 1
        _matrix_cache[n] = bits.astype(bool).reshape(lanes, n, n)
    return _matrix_cache[n]


def _axiom_symbols(axiom: Axiom) -> tuple[set[EntityName], set[EntityName], set[EntityName]]:
    """(classes, properties, individuals) referenced by the axiom."""
    classes: set[EntityName] = set()
    props: set[EntityName] = set()
    inds: set[EntityName] = set()

    def expr_syms(expr: ClassExpression) -> None:
        classes.update(named_classes_of_expr(expr))
        props.update(roles_of_expr(expr))

    if isinstance(axiom, SubClassOf):
        expr_syms(axiom.sub)
        expr_syms(axiom.sup)
    elif isinstance(axiom, EquivalentClasses):
        classes.add(axiom.a)
        expr_syms(axiom.b)
    elif isinstance(axiom, DisjointClasses):
        classes.update((axiom.a, axiom.b))
    elif isinstance(axiom, SubPropertyOf):
        props.update((axiom.sub, axiom.sup))
    elif isinstance(axiom, InverseProperties):
        props.update((axiom.a, axiom.b))
    elif isinstance(axiom, (Domain, Range)):
        props.add(axiom.prop)
        classes.add(axiom.cls)
    elif isinstance(axiom, ClassAssertion):
        inds.add(axiom.individual)
        expr_syms(axiom.expr)
    elif isinstance(axiom, PropertyAssertion):
        props.add(axiom.prop)
        inds.update((axiom.subject, axiom.object))
    return classes, props, inds


class _LaneEnv:
    """Maps each property to a lane-shaped boolean matrix array."""

    def __init__(self, arrays: dict[EntityName, np.ndarray], n: int):
        self.arrays = arrays
        self.n = n

    def matrix(self, role: Role) -> np.ndarray:
        m = self.arrays[role.name]
        return m.swapaxes(-1, -2) if role.inverse else m


def _eval_expr_nd(
    expr: ClassExpression, env: _LaneEnv, class_vec: dict[EntityName, np.ndarray]
) -> np.ndarray:
    """Extension as a boolean array with trailing axis of size n."""
    n = env.n
    if isinstance(expr, Named):
        return class_vec.get(expr.name, np.zeros(n, dtype=bool))
    if isinstance(expr, Top):
        return np.ones(n, dtype=bool)
    if isinstance(expr, Bottom):
        return np.zeros(n, dtype=bool)
    if isinstance(expr, Not):
        return ~_eval_expr_nd(expr.expr, env, class_vec)
    if isinstance(expr, And):
        out = _eval_expr_nd(expr.args[0], env, class_vec)
        for arg in expr.args[1:]:
            out = out & _eval_expr_nd(arg, env, class_vec)
        return out
    if isinstance(expr, Or):
        out = _eval_expr_nd(expr.args[0], env, class_vec)
        for arg in expr.args[1:]:
            out = out | _eval_expr_nd(arg, env, class_vec)
        return out
    if isinstance(expr, (Some, Only, AtMost)):
        m = env.matrix(expr.role)
        filler = _eval_expr_nd(expr.filler, env, class_vec)
        filler_row = filler[..., None, :]
        if isinstance(expr, Some):
            return (m & filler_row).any(axis=-1)
        if isinstance(expr, Only):
            return ~((m & ~filler_row).any(axis=-1))
        return (m & filler_row).sum(axis=-1) <= expr.n
    raise TypeError(f"unknown expression {expr!r}")


def _eval_axiom_nd(
    axiom: Axiom,
    env: _LaneEnv,
    class_vec: dict[EntityName, np.ndarray],
    ind_map: dict[EntityName, int],
) -> np.ndarray:
    """Per-lane truth of one axiom (boolean array over the lane axes)."""
    if isinstance(axiom, SubClassOf):
        sub = _eval_expr_nd(axiom.sub, env, class_vec)
        sup = _eval_expr_nd(axiom.sup, env, class_vec)
        return (~sub | sup).all(axis=-1)
    if isinstance(axiom, EquivalentClasses):
        a = class_vec.get(axiom.a, np.zeros(env.n, dtype=bool))
        b = _eval_expr_nd(axiom.b, env, class_vec)
        return (a == b).all(axis=-1)
    if isinstance(axiom, DisjointClasses):
        a = class_vec.get(axiom.a, np.zeros(env.n, dtype=bool))
        b = class_vec.get(axiom.b, np.zeros(env.n, dtype=bool))
        return np.asarray(~(a & b).any())
    if isinstance(axiom, SubPropertyOf):
        m1 = env.arrays[axiom.sub]
        m2 = env.arrays[axiom.sup]
        return (~m1 | m2).all(axis=(-1, -2))
    if isinstance(axiom, InverseProperties):
        m1 = env.arrays[axiom.a]
        m2 = env.arrays[axiom.b]
        return (m1 == m2.swapaxes(-1, -2)).all(axis=(-1, -2))
    if isinstance(axiom, Domain):
        m = env.arrays[axiom.prop]
        cls = class_vec.get(axiom.cls, np.zeros(env.n, dtype=bool))
        return (~m.any(axis=-1) | cls).all(axis=-1)
    if isinstance(axiom, Range):
        m = env.arrays[axiom.prop]
        cls = class_vec.get(axiom.cls, np.zeros(env.n, dtype=bool))
        return (~m.any(axis=-2) | cls).all(axis=-1)
    if isinstance(axiom, ClassAssertion):
        ext = _eval_expr_nd(axiom.expr, env, class_vec)
        return ext[..., ind_map[axiom.individual]]
    if isinstance(axiom, PropertyAssertion):
        m = env.arrays[axiom.prop]
        return m[..., ind_map[axiom.subject], ind_map[axiom.object]]
    raise TypeError(f"unexpected role-stage axiom {axiom!r}")


# ---------------------------------------------------------------------------
# Search driver
# ---------------------------------------------------------------------------


class _Search:
    def __init__(self, ontology: Ontology, max_domain: int, budget: int):
        if max_domain > 4:
            raise ValueError("max_domain above 4 is not supported")
        self.ontology = ontology
        self.max_domain = max_domain
        self.budget = budget
        self.used = 0
        self.axioms = [a for a in ontology.axioms if not isinstance(a, Declaration)]
        self.classes = list(named_classes(ontology))
        self.props = list(properties_of(ontology))
        self.inds = list(individuals_of(ontology))
        self.symbols = {id(a): _axiom_symbols(a) for a in self.axioms}

    def spend(self, amount: int) -> None:
        self.used += amount
        if self.used > self.budget:
            raise BudgetExceededError(
                f"finite-model search exceeded {self.budget} interpretations"
            )

    def run(self) -> FiniteModel | None:
        for n in range(1, self.max_domain + 1):
            model = self.search_domain(n)
            if model is not None:
                return model
        return None

    def search_domain(self, n: int) -> FiniteModel | None:
        class_only = [
            a
            for a in self.axioms
            if not self.symbols[id(a)][1]  # no properties involved
        ]
        role_axioms = [a for a in self.axioms if self.symbols[id(a)][1]]

        # axioms become checkable once every class they mention is assigned
        class_index = {c: i for i, c in enumerate(self.classes)}
        checkpoint: list[list[Axiom]] = [[] for _ in range(len(self.classes) + 1)]
        for a in class_only:
            needed = self.symbols[id(a)][0]
            level = max((class_index[c] + 1 for c in needed), default=0)
            checkpoint[level].append(a)

        for ind_tuple in itertools.product(range(n), repeat=len(self.inds)):
            ind_map = {name: elem for name, elem in zip(self.inds, ind_tuple)}
            model = self.assign_classes(n, 0, {}, ind_map, checkpoint, role_axioms)
            if model is not None:
                return model
        return None

    def assign_classes(
        self,
        n: int,
        idx: int,
        class_ext: dict[EntityName, frozenset[int]],
        ind_map: dict[EntityName, int],
        checkpoint: list[list[Axiom]],
        role_axioms: list[Axiom],
    ) -> FiniteModel | None:
        for axiom in checkpoint[idx]:
            if not self.class_only_holds(axiom, class_ext, ind_map, n):
                return None
        if idx == len(self.classes):
            return self.role_stage(n, class_ext, ind_map, role_axioms)
        cls = self.classes[idx]
        for mask in range(1 << n):
            self.spend(1)
            class_ext[cls] = frozenset(b for b in range(n) if mask >> b & 1)
            model = self.assign_classes(n, idx + 1, class_ext, ind_map, checkpoint, role_axioms)
            if model is not None:
                return model
        del class_ext[cls]
        return None

    def class_only_holds(
        self,
        axiom: Axiom,
        class_ext: dict[EntityName, frozenset[int]],
        ind_map: dict[EntityName, int],
        n: int,
    ) -> bool:
        model = FiniteModel(n, dict(class_ext), {}, dict(ind_map))
        return satisfies(model, axiom)

    def role_stage(
        self,
        n: int,
        class_ext: dict[EntityName, frozenset[int]],
        ind_map: dict[EntityName, int],
        role_axioms: list[Axiom],
    ) -> FiniteModel | None:
        if not self.props:
            self.spend(1)
            model = FiniteModel(n, dict(class_ext), {}, dict(ind_map))
            return model

        lanes = 1 << (n * n)
        matrices = _all_matrices(n)
        class_vec = {
            c: np.array([e in ext for e in range(n)], dtype=bool) for c, ext in class_ext.items()
        }

        # narrow each property by the axioms that touch it alone
        single = {p: np.ones(lanes, dtype=bool) for p in self.props}
        multi: list[Axiom] = []
        for a in role_axioms:
            touched = sorted(self.symbols[id(a)][1], key=lambda p: p.sort_key)
            if len(touched) == 1:
                p = touched[0]
                env = _LaneEnv({p: matrices}, n)
                single[p] &= _eval_axiom_nd(a, env, class_vec, ind_map)
            else:
                multi.append(a)

        survivors = {p: np.nonzero(single[p])[0] for p in self.props}
        if any(len(s) == 0 for s in survivors.values()):
            self.spend(len(self.props) * lanes)
            return None

        if len(self.props) == 1:
            p = self.props[0]
            self.spend(lanes)
            idx = survivors[p]
            if len(idx) == 0:
                return None
            return self.build_model(n, class_ext, ind_map, {p: matrices[idx[0]]})

        if len(self.props) == 2:
            p1, p2 = self.props
            idx1, idx2 = survivors[p1], survivors[p2]
            self.spend(len(idx1) * len(idx2))
            env = _LaneEnv(
                {
                    p1: matrices[idx1][:, None, :, :],
                    p2: matrices[idx2][None, :, :, :],
                },
                n,
            )
            mask = np.ones((len(idx1), len(idx2)), dtype=bool)
            for a in multi:
                mask &= _eval_axiom_nd(a, env, class_vec, ind_map)
                if not mask.any():
                    return None
            flat = int(np.argmax(mask))
            i, j = divmod(flat, len(idx2))
            return self.build_model(
                n,
                class_ext,
                ind_map,
                {p1: matrices[idx1[i]], p2: matrices[idx2[j]]},
            )

        # three or more properties: loop the survivor product directly
        prop_list = self.props
        surv_lists = [survivors[p] for p in prop_list]
        total = 1
        for s in surv_lists:
            total *= len(s)
        self.spend(total)
        for combo in itertools.product(*surv_lists):
            chosen = {p: matrices[i] for p, i in zip(prop_list, combo)}
            env = _LaneEnv(chosen, n)
            if all(bool(np.all(_eval_axiom_nd(a, env, class_vec, ind_map))) for a in multi):
                return self.build_model(n, class_ext, ind_map, chosen)
        return None

    def build_model(
        self,
        n: int,
        class_ext: dict[EntityName, frozenset[int]],
        ind_map: dict[EntityName, int],
        chosen: dict[EntityName, np.ndarray],
    ) -> FiniteModel:
        roles = {
            p: frozenset(
                (int(x), int(y)) for x in range(n) for y in range(n) if bool(m[x, y])
            )
            for p, m in chosen.items()
        }
        model = FiniteModel(n, dict(class_ext), roles, dict(ind_map))
        if not check_model(model, self.ontology):
            raise RuntimeError("internal error: candidate model failed re-evaluation")
        return model


def finite_model_search(
    ontology: Ontology, max_domain: int = 3, budget: int = DEFAULT_BUDGET
) -> FiniteModel | None:
    """First satisfying interpretation over domains 1..max_domain, or None."""
    return _Search(ontology, max_domain, budget).run()


def oracle_classify_status(
    ontology: Ontology, max_domain: int = 3, budget: int = DEFAULT_BUDGET
) -> OntologyStatus:
    """Three-valued status computed purely by exhaustive model search."""
    base = finite_model_search(ontology, max_domain, budget)
    if base is None:
        return Inconsistent(f"no model with domain size <= {max_domain}")
    unsat: list[EntityName] = []
    for cls in named_classes(ontology):
        probe_ind = individual_name("probe0", _PROBE_NS)
        probe = ontology.with_axioms(
            [Declaration(probe_ind), ClassAssertion(probe_ind, Named(cls))],
            new_id=ontology.id + "#probe",
        )
        if finite_model_search(probe, max_domain, budget) is None:
            unsat.append(cls)
    if unsat:
        return Incoherent(tuple(sorted(unsat, key=lambda c: c.sort_key)))
    return ConsistentCoherent()
