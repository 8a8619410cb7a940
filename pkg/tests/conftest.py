"""Shared builders for the test suite."""

from __future__ import annotations

import random

import pytest

from owlforge.model import (
    ClassAssertion,
    Declaration,
    DisjointClasses,
    Domain,
    Named,
    Only,
    Ontology,
    PropertyAssertion,
    Range,
    Role,
    Some,
    SubClassOf,
    class_name,
    individual_name,
    property_name,
)

C = class_name
P = property_name
I = individual_name


def declarations(*names):
    return tuple(Declaration(n) for n in names)


@pytest.fixture(scope="session")
def university():
    """The introductory university example: three classes, two properties,
    three typed individuals, and two facts."""
    professor, student, course = C("Professor"), C("Student"), C("Course")
    teaches, enrolled = P("teaches"), P("enrolledIn")
    smith, alice, ai = I("Dr.Smith"), I("Alice"), I("AICourse")
    axioms = declarations(professor, student, course, teaches, enrolled, smith, alice, ai) + (
        Domain(teaches, professor),
        Range(teaches, course),
        Domain(enrolled, student),
        Range(enrolled, course),
        ClassAssertion(smith, Named(professor)),
        ClassAssertion(alice, Named(student)),
        ClassAssertion(ai, Named(course)),
        PropertyAssertion(teaches, smith, ai),
        PropertyAssertion(enrolled, alice, ai),
    )
    return Ontology("university", axioms)


@pytest.fixture(scope="session")
def small_corpus():
    """A handful of verified-consistent synthetic modules."""
    from owlforge.corpus import SynthConfig, generate_synthetic

    return generate_synthetic(SynthConfig(n_ontologies=12, seed=1234))


def tiny_random_ontology(rng: random.Random) -> Ontology:
    """Random ontology over at most 6 signature symbols (and at most two
    properties), small enough for exhaustive model search at domain 3."""
    n_classes = rng.randint(2, 4)
    n_props = rng.randint(0, 2)
    n_inds = rng.randint(0, 6 - n_classes - n_props)
    classes = [C(f"K{i}") for i in range(n_classes)]
    props = [P(f"p{i}") for i in range(n_props)]
    inds = [I(f"x{i}") for i in range(n_inds)]

    axioms = list(declarations(*classes, *props, *inds))
    n_axioms = rng.randint(2, 6)
    for _ in range(n_axioms):
        kind = rng.random()
        a, b = rng.choice(classes), rng.choice(classes)
        if kind < 0.35:
            axioms.append(SubClassOf(Named(a), Named(b)))
        elif kind < 0.5 and a != b:
            axioms.append(DisjointClasses(a, b))
        elif kind < 0.75 and props:
            role = Role(rng.choice(props), inverse=rng.random() < 0.2)
            ctor = Some if rng.random() < 0.5 else Only
            axioms.append(SubClassOf(Named(a), ctor(role, Named(b))))
        elif kind < 0.85 and props:
            axioms.append(
                rng.choice(
                    [Domain(rng.choice(props), a), Range(rng.choice(props), a)]
                )
            )
        elif inds and props:
            axioms.append(
                PropertyAssertion(rng.choice(props), rng.choice(inds), rng.choice(inds))
            )
        elif inds:
            axioms.append(ClassAssertion(rng.choice(inds), Named(a)))
    return Ontology(f"tiny{rng.randint(0, 10**6)}", tuple(axioms))
