import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from owlforge.embed import (
    AllOOVError,
    EmbeddingTable,
    EmptyVocabularyError,
    ProjectedGraph,
    TrainConfig,
    WalkCorpus,
    combine_corpora,
    embed_ontology,
    lexical_corpus,
    load_table,
    mean_pool,
    pair_loss_and_grads,
    project,
    random_walks,
    save_table,
    save_table_jsonl,
    split_token_words,
    structure_tokens,
    train_skipgram,
)
from owlforge.model import (
    Declaration,
    Named,
    Ontology,
    SubClassOf,
    class_name,
)

from conftest import declarations

A, B, Cc = (class_name(x) for x in "ABC")


class TestProject:
    def test_named_subclass_edge(self):
        o = Ontology("t", declarations(A, B) + (SubClassOf(Named(A), Named(B)),))
        graph = project(o)
        assert ("A", "subClassOf", "B") in graph.edges

    def test_domain_range_pair(self, university):
        graph = project(university)
        assert ("Professor", "teaches", "Course") in graph.edges
        assert ("Student", "enrolledIn", "Course") in graph.edges

    def test_empty(self):
        graph = project(Ontology("e", ()))
        assert graph.nodes == () and graph.edges == ()

    def test_transitive_closure_added(self):
        o = Ontology(
            "t",
            declarations(A, B, Cc)
            + (SubClassOf(Named(A), Named(B)), SubClassOf(Named(B), Named(Cc))),
        )
        graph = project(o)
        assert ("A", "subClassOf", "C") in graph.edges


class TestWalks:
    def test_isolated_node_yields_singleton_sentences(self):
        graph = ProjectedGraph(("A",), ())
        corpus = random_walks(graph, depth=3, walks_per_node=2, seed=0)
        assert corpus.sentences == (("A",), ("A",))

    def test_chain_walk_is_forced(self):
        graph = ProjectedGraph(
            ("A", "B", "C"),
            (("A", "subClassOf", "B"), ("B", "subClassOf", "C")),
        )
        corpus = random_walks(graph, depth=2, walks_per_node=1, seed=9)
        walks = {s[0]: s for s in corpus.sentences}
        assert walks["A"] == ("A", "subClassOf", "B", "subClassOf", "C")

    def test_seed_determinism(self, university):
        graph = project(university)
        first = random_walks(graph, depth=4, walks_per_node=10, seed=5)
        second = random_walks(graph, depth=4, walks_per_node=10, seed=5)
        assert first == second

    def test_walk_length_bound(self, university):
        graph = project(university)
        corpus = random_walks(graph, depth=4, walks_per_node=10, seed=5)
        assert all(len(s) <= 2 * 4 + 1 for s in corpus.sentences)

    def test_per_node_seeds_independent_of_graph_growth(self):
        small = ProjectedGraph(("A", "B"), (("A", "r", "B"), ("A", "s", "B")))
        bigger = ProjectedGraph(("A", "B", "Z"), (("A", "r", "B"), ("A", "s", "B")))
        walks_small = [s for s in random_walks(small, 2, 3, seed=1).sentences if s[0] == "A"]
        walks_big = [s for s in random_walks(bigger, 2, 3, seed=1).sentences if s[0] == "A"]
        assert walks_small == walks_big


def test_lexical_splitting():
    assert split_token_words("subClassOf") == ["sub", "class", "of"]
    assert split_token_words("AmberArch") == ["amber", "arch"]
    assert split_token_words("feeds_into") == ["feeds", "into"]
    corpus = lexical_corpus(WalkCorpus((("AmberArch", "linksTo", "ReedVale"),), "structure"))
    assert corpus.sentences == (("amber", "arch", "links", "to", "reed", "vale"),)
    assert corpus.source == "lexical"


TOY = WalkCorpus(
    (
        ("sun", "warms", "stone"),
        ("sun", "warms", "sand"),
        ("rain", "cools", "moss"),
        ("rain", "cools", "fern"),
        ("sun", "warms", "stone"),
    ),
    "structure",
)


class TestTraining:
    def test_epochs_must_be_positive(self):
        with pytest.raises(ValueError):
            TrainConfig(epochs=0)

    def test_empty_corpus(self):
        with pytest.raises(EmptyVocabularyError):
            train_skipgram(WalkCorpus((), "structure"), TrainConfig(dim=8, seed=0))

    def test_co_occurring_tokens_closer(self):
        cfg = TrainConfig(dim=16, epochs=30, window=2, negatives=3, seed=3)
        table = train_skipgram(TOY, cfg)

        def cosine(x, y):
            vx, vy = table.vector(x), table.vector(y)
            return float(vx @ vy / (np.linalg.norm(vx) * np.linalg.norm(vy)))

        assert cosine("sun", "warms") > cosine("sun", "cools")

    def test_loss_non_increasing_under_fixed_order(self):
        table = train_skipgram(TOY, TrainConfig(dim=12, epochs=10, window=2, seed=1))
        losses = table.epoch_losses
        assert len(losses) == 10
        assert all(b <= a for a, b in zip(losses, losses[1:]))

    def test_bitwise_seed_determinism(self):
        cfg = TrainConfig(dim=10, epochs=4, window=2, seed=11)
        one = train_skipgram(TOY, cfg)
        two = train_skipgram(TOY, cfg)
        assert one.tokens == two.tokens
        assert one.matrix.tobytes() == two.matrix.tobytes()

    def test_vocabulary_coverage(self):
        table = train_skipgram(TOY, TrainConfig(dim=8, epochs=1, seed=0))
        for token in ("sun", "warms", "stone", "rain", "fern"):
            assert token in table


def test_gradient_matches_central_finite_differences():
    # oracle first: central differences over the flattened parameter vector
    rng = np.random.default_rng(123)
    for _ in range(5):
        center = rng.normal(0, 0.5, 12)
        context = rng.normal(0, 0.5, 12)
        negatives = rng.normal(0, 0.5, (4, 12))
        loss, d_center, d_context, d_negatives = pair_loss_and_grads(
            center, context, negatives
        )

        def loss_at(c, x, negs):
            return pair_loss_and_grads(c, x, negs)[0]

        eps = 1e-6
        numeric_center = np.zeros_like(center)
        for i in range(len(center)):
            up, down = center.copy(), center.copy()
            up[i] += eps
            down[i] -= eps
            numeric_center[i] = (loss_at(up, context, negatives) - loss_at(down, context, negatives)) / (2 * eps)
        numeric_context = np.zeros_like(context)
        for i in range(len(context)):
            up, down = context.copy(), context.copy()
            up[i] += eps
            down[i] -= eps
            numeric_context[i] = (loss_at(center, up, negatives) - loss_at(center, down, negatives)) / (2 * eps)
        numeric_neg = np.zeros_like(negatives)
        for j in range(negatives.shape[0]):
            for i in range(negatives.shape[1]):
                up, down = negatives.copy(), negatives.copy()
                up[j, i] += eps
                down[j, i] -= eps
                numeric_neg[j, i] = (loss_at(center, context, up) - loss_at(center, context, down)) / (2 * eps)

        for exact, numeric in (
            (d_center, numeric_center),
            (d_context, numeric_context),
            (d_negatives, numeric_neg),
        ):
            rel = np.abs(exact - numeric) / np.maximum(1e-8, np.abs(exact) + np.abs(numeric))
            assert float(rel.max()) < 1e-4


class TestMeanPool:
    def make_table(self):
        matrix = np.array([[1.0, 0.0], [0.0, 1.0], [2.0, 2.0]], dtype=np.float32)
        return EmbeddingTable(dim=2, tokens=("a", "b", "c"), matrix=matrix)

    def test_single_token_identity(self):
        table = self.make_table()
        pooled, oov = mean_pool(["a"], table)
        assert oov == 0
        assert np.allclose(pooled, [1.0, 0.0])

    def test_two_token_average(self):
        pooled, _ = mean_pool(["a", "b"], self.make_table())
        assert np.allclose(pooled, [0.5, 0.5])

    def test_oov_skipped_and_counted(self):
        pooled, oov = mean_pool(["a", "b", "c", "zzz"], self.make_table())
        assert oov == 1
        assert np.allclose(pooled, [1.0, 1.0])

    def test_all_oov(self):
        with pytest.raises(AllOOVError):
            mean_pool(["nope"], self.make_table())

    @settings(max_examples=40, deadline=None)
    @given(st.permutations(["a", "b", "c", "a"]))
    def test_permutation_invariance(self, tokens):
        table = self.make_table()
        base, _ = mean_pool(["a", "b", "c", "a"], table)
        permuted, _ = mean_pool(list(tokens), table)
        assert np.allclose(base, permuted)


class TestTableIO:
    def test_binary_round_trip(self, tmp_path):
        table = train_skipgram(TOY, TrainConfig(dim=7, epochs=2, seed=2))
        path = tmp_path / "table.bin"
        save_table(table, str(path))
        loaded = load_table(str(path))
        assert loaded.dim == table.dim
        assert loaded.tokens == table.tokens
        assert np.array_equal(loaded.matrix, table.matrix)

    def test_jsonl_export(self, tmp_path):
        import json

        table = train_skipgram(TOY, TrainConfig(dim=5, epochs=1, seed=2))
        path = tmp_path / "table.jsonl"
        save_table_jsonl(table, str(path))
        lines = path.read_text().splitlines()
        header = json.loads(lines[0])
        assert header == {"dim": 5, "vocab_size": len(table.tokens)}
        assert len(lines) == 1 + len(table.tokens)


def test_embed_ontology_end_to_end(university):
    table = embed_ontology(university, TrainConfig(dim=12, epochs=2, seed=4), walks_per_node=3, depth=3)
    tokens = structure_tokens(university)
    pooled, oov = mean_pool(tokens, table)
    assert pooled.shape == (12,)
    assert np.isfinite(pooled).all()
    assert oov == 0
