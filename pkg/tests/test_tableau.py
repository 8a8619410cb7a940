import random

import pytest

from conftest import tiny_random_ontology
from owlforge.antipattern import AntiPatternId, minimal_fixture
from owlforge.finitemodel import (
    BudgetExceededError,
    FiniteModel,
    check_model,
    finite_model_search,
    oracle_classify_status,
)
from owlforge.model import (
    TOP,
    AtMost,
    ClassAssertion,
    ConsistentCoherent,
    Declaration,
    DisjointClasses,
    Domain,
    Incoherent,
    Inconsistent,
    Named,
    Only,
    Ontology,
    PropertyAssertion,
    Role,
    Some,
    SubClassOf,
    And,
    class_name,
    individual_name,
    property_name,
    status_tag,
)
from owlforge.tableau import (
    CompletionWitness,
    UnknownClassError,
    UnsupportedAxiomError,
    check_consistency,
    classify_status,
    is_class_satisfiable,
    replay_clash_trace,
)

c1, c2, c3 = class_name("c1"), class_name("c2"), class_name("c3")
r = property_name("r")
a, b = individual_name("a"), individual_name("b")


def test_empty_ontology_consistent():
    verdict = check_consistency(Ontology("empty", ()))
    assert isinstance(verdict.status, ConsistentCoherent)


def test_out_of_domain_instance_inconsistent():
    ontology = Ontology(
        "ood",
        (
            Declaration(c1),
            Declaration(c2),
            Declaration(r),
            Declaration(a),
            Declaration(b),
            Domain(r, c1),
            PropertyAssertion(r, a, b),
            ClassAssertion(a, Named(c2)),
            DisjointClasses(c1, c2),
        ),
    )
    verdict = check_consistency(ontology)
    assert isinstance(verdict.status, Inconsistent)
    assert replay_clash_trace(ontology, verdict.witness)


def test_cyclic_subclasses_consistent():
    ontology = Ontology(
        "csc",
        (
            Declaration(c1),
            Declaration(c2),
            Declaration(c3),
            SubClassOf(Named(c1), Named(c2)),
            SubClassOf(Named(c2), Named(c3)),
            SubClassOf(Named(c3), Named(c1)),
        ),
    )
    assert isinstance(check_consistency(ontology).status, ConsistentCoherent)
    # cross-checked against the independent oracle
    assert finite_model_search(ontology, max_domain=3) is not None


def test_eid_class_unsatisfiable():
    fixture = minimal_fixture(AntiPatternId.EID)
    satisfiable, witness = is_class_satisfiable(fixture, c1)
    assert not satisfiable
    assert isinstance(witness, tuple)  # clash trace


def test_oil_class_satisfiable_without_successors():
    fixture = minimal_fixture(AntiPatternId.OIL)
    satisfiable, witness = is_class_satisfiable(fixture, c1)
    assert satisfiable
    assert isinstance(witness, FiniteModel)


def test_top_satisfiable_in_consistent_ontology():
    ontology = Ontology("t", (Declaration(c1), SubClassOf(Named(c1), Named(c1))))
    from owlforge.model import TOP as top  # Top has no name; probe a named class

    satisfiable, _ = is_class_satisfiable(ontology, c1)
    assert satisfiable


def test_unknown_class():
    with pytest.raises(UnknownClassError):
        is_class_satisfiable(Ontology("t", (Declaration(c1),)), c2)


def test_unsupported_axioms_reported():
    complex_lhs = Ontology(
        "bad", (SubClassOf(And((Named(c1), Named(c2))), Named(c3)),)
    )
    with pytest.raises(UnsupportedAxiomError):
        check_consistency(complex_lhs)
    atmost2 = Ontology("bad2", (SubClassOf(Named(c1), AtMost(2, Role(r), TOP)),))
    with pytest.raises(UnsupportedAxiomError):
        check_consistency(atmost2)


def test_classify_aio_incoherent_with_witness_class():
    status = classify_status(minimal_fixture(AntiPatternId.AIO))
    assert isinstance(status, Incoherent)
    assert [n.local for n in status.unsatisfiable] == ["c1"]


def test_classify_oor_inconsistent():
    assert isinstance(classify_status(minimal_fixture(AntiPatternId.OOR)), Inconsistent)


def test_classify_synthetic_consistent(small_corpus):
    for ontology in small_corpus[:4]:
        assert isinstance(classify_status(ontology), ConsistentCoherent)


def test_determinism_of_verdicts(small_corpus):
    for ontology in [minimal_fixture(AntiPatternId.OOD), small_corpus[0]]:
        first = check_consistency(ontology)
        second = check_consistency(ontology)
        assert first == second


def test_clash_monotone_under_added_axioms():
    base = minimal_fixture(AntiPatternId.OOR)
    extras = [
        SubClassOf(Named(c1), Named(c2)),
        Declaration(c3),
        ClassAssertion(a, Named(c1)),
    ]
    for extra in extras:
        extended = base.with_axioms([extra])
        assert isinstance(check_consistency(extended).status, Inconsistent)


def test_blocking_terminates_on_existential_cycle():
    looping = Ontology(
        "loop",
        (
            Declaration(c1),
            Declaration(r),
            SubClassOf(Named(c1), Some(Role(r), Named(c1))),
        ),
    )
    satisfiable, witness = is_class_satisfiable(looping, c1)
    assert satisfiable
    assert isinstance(witness, FiniteModel)
    assert check_model(witness, looping)


def test_witness_models_validate(small_corpus):
    for ontology in small_corpus:
        verdict = check_consistency(ontology)
        assert isinstance(verdict.status, ConsistentCoherent)
        if isinstance(verdict.witness, FiniteModel):
            assert check_model(verdict.witness, ontology)
        else:
            assert isinstance(verdict.witness, CompletionWitness)


def test_oracle_agreement_on_tiny_random_ontologies():
    rng = random.Random(20240809)
    checked = 0
    for _ in range(40):
        ontology = tiny_random_ontology(rng)
        verdict = check_consistency(ontology)
        try:
            model = finite_model_search(ontology, max_domain=3)
        except BudgetExceededError:
            continue
        if isinstance(verdict.status, Inconsistent):
            assert model is None, ontology.axioms
            assert replay_clash_trace(ontology, verdict.witness)
        else:
            assert model is not None, ontology.axioms
        checked += 1
    assert checked >= 30


def test_oracle_agreement_on_fixture_statuses():
    for pattern in AntiPatternId:
        fixture = minimal_fixture(pattern)
        assert status_tag(classify_status(fixture)) == status_tag(
            oracle_classify_status(fixture)
        )
