import pytest

from owlforge.manchester import serialize
from owlforge.model import (
    ClassAssertion,
    ConsistentCoherent,
    Declaration,
    Named,
    Ontology,
    SubClassOf,
    axiom_key,
    class_name,
    named_classes,
    signature_of,
)
from owlforge.modularize import (
    InsufficientConceptsError,
    coverage_report,
    default_k,
    extract_modules,
    modularize_ontology,
    partition,
    rank_concepts,
    select_heads,
)
from owlforge.tableau import classify_status

from conftest import declarations

A, B, Cc, D = (class_name(x) for x in "ABCD")


def chain(*names):
    pairs = zip(names, names[1:])
    return tuple(SubClassOf(Named(x), Named(y)) for x, y in pairs)


class TestRank:
    def test_single_subclass_scores_two_each(self):
        # weight rule recomputed by hand: one subclass edge, weight 2, both ends
        o = Ontology("t", declarations(A, B) + (SubClassOf(Named(A), Named(B)),))
        scores = {s.cls.local: s.score for s in rank_concepts(o)}
        assert scores == {"A": 2.0, "B": 2.0}

    def test_isolated_class_scores_zero(self):
        o = Ontology("t", declarations(A))
        assert rank_concepts(o)[0].score == 0.0

    def test_university_course_outranks_student(self, university):
        # two incident domain/range relations for Course vs one for Student
        scores = {s.cls.local: s.score for s in rank_concepts(university)}
        assert scores["Course"] >= scores["Student"]

    def test_descending_with_name_ties(self):
        o = Ontology("t", declarations(A, B, Cc) + (SubClassOf(Named(A), Named(B)),))
        ranked = [s.cls.local for s in rank_concepts(o)]
        assert ranked == ["A", "B", "C"]


class TestSelectHeads:
    def test_k_one_takes_top(self):
        o = Ontology("t", declarations(A, B) + (SubClassOf(Named(A), Named(B)),))
        scores = rank_concepts(o)
        assert select_heads(o, scores, 1) == [scores[0].cls]

    def test_direct_subclass_skipped(self):
        # A and B tie, B is a direct subclass of A, C trails: heads = {A, C}
        o = Ontology(
            "t",
            declarations(A, B, Cc, D)
            + (
                SubClassOf(Named(B), Named(A)),
                SubClassOf(Named(Cc), Named(D)),
            ),
        )
        ranked = rank_concepts(o)
        heads = select_heads(o, ranked, 2)
        assert heads[0].local == "A"
        assert heads[1].local != "B"

    def test_k_equal_to_class_count_uses_fallback(self):
        o = Ontology("t", declarations(A, B) + (SubClassOf(Named(A), Named(B)),))
        heads = select_heads(o, rank_concepts(o), 2)
        assert {h.local for h in heads} == {"A", "B"}

    def test_insufficient_concepts(self):
        o = Ontology("t", declarations(A))
        with pytest.raises(InsufficientConceptsError):
            select_heads(o, rank_concepts(o), 2)


class TestPartition:
    def test_chain_joins_head(self):
        o = Ontology("t", declarations(A, B) + chain(A, B))
        parts = partition(o, [B])
        assert parts[0].members == frozenset({A, B})

    def test_disjoint_subtrees_split(self):
        o = Ontology(
            "t",
            declarations(A, B, Cc, D) + chain(B, A) + chain(D, Cc),
        )
        parts = partition(o, [A, Cc])
        by_head = {p.head.local: {m.local for m in p.members} for p in parts}
        assert by_head == {"A": {"A", "B"}, "C": {"C", "D"}}

    def test_orphan_goes_to_top_head(self):
        o = Ontology("t", declarations(A, B, Cc) + chain(B, A))
        parts = partition(o, [A])
        assert Cc in parts[0].members

    def test_every_class_assigned_once(self, small_corpus):
        o = small_corpus[0]
        scores = rank_concepts(o)
        heads = select_heads(o, scores, 2)
        parts = partition(o, heads)
        seen = [m for p in parts for m in p.members]
        assert len(seen) == len(set(seen)) == len(named_classes(o))


class TestExtract:
    def test_single_partition_covers_source(self, small_corpus):
        o = small_corpus[1]
        parts = partition(o, select_heads(o, rank_concepts(o), 1))
        modules = extract_modules(o, parts)
        assert len(modules) == 1
        source_keys = {
            axiom_key(a) for a in o.axioms if not isinstance(a, Declaration)
        }
        module_keys = {
            axiom_key(a)
            for a in modules[0].module.axioms
            if not isinstance(a, Declaration)
        }
        assert module_keys == source_keys

    def test_spanning_axiom_dropped_and_counted(self):
        o = Ontology(
            "t",
            declarations(A, B, Cc, D)
            + chain(B, A)
            + chain(D, Cc)
            + (SubClassOf(Named(B), Named(D)),),  # spans both partitions
        )
        parts = partition(o, [A, Cc])
        modules = extract_modules(o, parts)
        report = coverage_report(o, modules)
        assert [axiom_key(a) for a in report.dropped] == [
            axiom_key(SubClassOf(Named(B), Named(D)))
        ]
        assert report.total_axioms == 3

    def test_self_containment(self, small_corpus):
        for o in small_corpus[:4]:
            modules, _ = modularize_ontology(o, k=2)
            for result in modules:
                declared = {
                    a.entity
                    for a in result.module.axioms
                    if isinstance(a, Declaration)
                }
                assert signature_of(result.module) <= declared

    def test_consistency_preserved(self, small_corpus):
        for o in small_corpus[:4]:
            modules, _ = modularize_ontology(o, k=2)
            for result in modules:
                assert isinstance(classify_status(result.module), ConsistentCoherent)

    def test_deterministic(self, small_corpus):
        o = small_corpus[2]
        first, _ = modularize_ontology(o, k=3)
        second, _ = modularize_ontology(o, k=3)
        assert [serialize(m.module) for m in first] == [
            serialize(m.module) for m in second
        ]

    def test_coverage_accounting(self, small_corpus):
        for o in small_corpus[:4]:
            modules, report = modularize_ontology(o, k=3)
            covered = {
                axiom_key(a)
                for m in modules
                for a in m.module.axioms
                if not isinstance(a, Declaration)
            }
            source = {
                axiom_key(a) for a in o.axioms if not isinstance(a, Declaration)
            }
            assert covered | {axiom_key(d) for d in report.dropped} == source
            assert covered.isdisjoint({axiom_key(d) for d in report.dropped})


def test_default_k_targets_module_size():
    o = Ontology("t", declarations(*[class_name(f"K{i}") for i in range(450)]))
    assert default_k(o) == 3
    assert default_k(Ontology("s", declarations(A))) == 1


def test_size_reduction_on_a_larger_source():
    # modularizing a 60-class ontology shrinks the median module class count
    from owlforge.corpus import SynthConfig, generate_synthetic

    source = generate_synthetic(
        SynthConfig(n_ontologies=1, classes=(60, 60), properties=(2, 3), seed=77)
    )[0]
    modules, _ = modularize_ontology(source, k=4)
    sizes = sorted(len(named_classes(m.module)) for m in modules)
    median = sizes[len(sizes) // 2]
    assert median < len(named_classes(source))
