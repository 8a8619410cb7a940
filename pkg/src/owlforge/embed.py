"""Graph embeddings for ontology modules.

The ontology is projected to a labeled directed graph (with subclass
transitive closure standing in for reasoner-materialized triples), walked to
produce structure sentences of alternating node and edge-label tokens, and
complemented by a lexical document of camelCase/underscore-split words. A
from-scratch skip-gram model with negative sampling is trained on the
combined corpus; per-module vectors come from mean pooling.

Training is single-threaded and fully deterministic for a fixed seed: pairs
and their negative samples are precomputed once (so every epoch optimizes
the same objective), the learning rate decays linearly, and the epoch losses
are recorded on the returned table.
"""

from __future__ import annotations

import hashlib
import json
import random
import re
import struct
from dataclasses import dataclass, field

import numpy as np

from .model import (
    ClassAssertion,
    ClassExpression,
    Declaration,
    DisjointClasses,
    Domain,
    EntityName,
    EquivalentClasses,
    InverseProperties,
    Named,
    Not,
    And,
    Only,
    Ontology,
    Or,
    AtMost,
    PropertyAssertion,
    Range,
    Some,
    SubClassOf,
    SubPropertyOf,
    signature_of,
)

SUBCLASS_LABEL = "subClassOf"
EQUIVALENT_LABEL = "equivalentTo"
DISJOINT_LABEL = "disjointWith"
SUBPROPERTY_LABEL = "subPropertyOf"
INVERSE_LABEL = "inverseOf"
TYPE_LABEL = "type"


class EmptyVocabularyError(ValueError):
    """The walk corpus produced no trainable tokens."""


class AllOOVError(ValueError):
    """None of the pooled tokens has a vector."""


@dataclass(frozen=True)
class ProjectedGraph:
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]  # (source, label, target)


@dataclass(frozen=True)
class WalkCorpus:
    sentences: tuple[tuple[str, ...], ...]
    source: str  # "structure" | "lexical" | "combined"


@dataclass(frozen=True)
class TrainConfig:
    dim: int = 100
    window: int = 5
    epochs: int = 10
    negatives: int = 5
    learning_rate: float = 0.025
    min_learning_rate: float = 0.0001
    min_count: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.dim <= 0 or self.window <= 0 or self.epochs <= 0:
            raise ValueError("dim, window, and epochs must all be positive")


@dataclass
class EmbeddingTable:
    dim: int
    tokens: tuple[str, ...]
    matrix: np.ndarray  # shape (len(tokens), dim), float32
    epoch_losses: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        self.index = {t: i for i, t in enumerate(self.tokens)}

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def vector(self, token: str) -> np.ndarray:
        return self.matrix[self.index[token]]


# ---------------------------------------------------------------------------
# Projection
# ---------------------------------------------------------------------------


def _restriction_edges(subject: str, expr: ClassExpression, base_label: str):
    """Edges from a subject to the named leaves of a complex expression."""
    if isinstance(expr, Named):
        yield (subject, base_label, expr.name.local)
    elif isinstance(expr, (And, Or, Not)):
        parts = expr.args if isinstance(expr, (And, Or)) else (expr.expr,)
        for part in parts:
            yield from _restriction_edges(subject, part, base_label)
    elif isinstance(expr, (Some, Only, AtMost)):
        yield from _restriction_edges(subject, expr.filler, expr.role.name.local)


def project(ontology: Ontology) -> ProjectedGraph:
    """Directed labeled graph over local names, with subclass closure."""
    nodes = tuple(sorted({n.local for n in signature_of(ontology)}))
    edges: dict[tuple[str, str, str], None] = {}

    def add(src: str, label: str, dst: str) -> None:
        edges[(src, label, dst)] = None

    for axiom in ontology.axioms:
        if isinstance(axiom, SubClassOf) and isinstance(axiom.sub, Named):
            for e in _restriction_edges(axiom.sub.name.local, axiom.sup, SUBCLASS_LABEL):
                add(*e)
        elif isinstance(axiom, EquivalentClasses):
            for e in _restriction_edges(axiom.a.local, axiom.b, EQUIVALENT_LABEL):
                add(*e)
        elif isinstance(axiom, DisjointClasses):
            add(axiom.a.local, DISJOINT_LABEL, axiom.b.local)
        elif isinstance(axiom, SubPropertyOf):
            add(axiom.sub.local, SUBPROPERTY_LABEL, axiom.sup.local)
        elif isinstance(axiom, InverseProperties):
            add(axiom.a.local, INVERSE_LABEL, axiom.b.local)
        elif isinstance(axiom, ClassAssertion):
            for e in _restriction_edges(axiom.individual.local, axiom.expr, TYPE_LABEL):
                add(*e)
        elif isinstance(axiom, PropertyAssertion):
            add(axiom.subject.local, axiom.prop.local, axiom.object.local)

    domains: dict[EntityName, list[EntityName]] = {}
    ranges: dict[EntityName, list[EntityName]] = {}
    for axiom in ontology.axioms:
        if isinstance(axiom, Domain):
            domains.setdefault(axiom.prop, []).append(axiom.cls)
        elif isinstance(axiom, Range):
            ranges.setdefault(axiom.prop, []).append(axiom.cls)
    for prop in sorted(set(domains) & set(ranges), key=lambda p: p.sort_key):
        for d in domains[prop]:
            for r in ranges[prop]:
                add(d.local, prop.local, r.local)

    # transitive closure over subclass edges, approximating reasoned triples
    children: dict[str, set[str]] = {}
    for src, label, dst in edges:
        if label == SUBCLASS_LABEL:
            children.setdefault(src, set()).add(dst)
    for start in sorted(children):
        reachable: set[str] = set()
        stack = sorted(children[start])
        while stack:
            node = stack.pop()
            if node in reachable:
                continue
            reachable.add(node)
            stack.extend(sorted(children.get(node, ())))
        for target in sorted(reachable):
            add(start, SUBCLASS_LABEL, target)

    return ProjectedGraph(nodes, tuple(sorted(edges)))


# ---------------------------------------------------------------------------
# Walks and lexical document
# ---------------------------------------------------------------------------


def _node_seed(seed: int, node: str) -> int:
    digest = hashlib.sha256(f"{seed}:{node}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def random_walks(
    graph: ProjectedGraph, depth: int, walks_per_node: int, seed: int
) -> WalkCorpus:
    """Seeded uniform walks of node,label,node,... tokens, one start per node.

    Each node owns a derived seed, so the corpus is reproducible regardless
    of iteration or parallelization order.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    adjacency: dict[str, list[tuple[str, str]]] = {n: [] for n in graph.nodes}
    for src, label, dst in graph.edges:
        adjacency.setdefault(src, []).append((label, dst))
    for options in adjacency.values():
        options.sort()

    sentences: list[tuple[str, ...]] = []
    for node in graph.nodes:
        rng = random.Random(_node_seed(seed, node))
        for _ in range(walks_per_node):
            walk = [node]
            current = node
            for _ in range(depth):
                options = adjacency.get(current, [])
                if not options:
                    break
                label, target = options[rng.randrange(len(options))]
                walk.append(label)
                walk.append(target)
                current = target
            sentences.append(tuple(walk))
    return WalkCorpus(tuple(sentences), "structure")


_CAMEL_RE = re.compile(r"[A-Z]+(?=[A-Z][a-z0-9])|[A-Z]?[a-z0-9]+|[A-Z]+")


def split_token_words(token: str) -> list[str]:
    """camelCase and underscore split, lowercased."""
    words: list[str] = []
    for chunk in token.replace("_", " ").replace("-", " ").split():
        words.extend(m.group(0).lower() for m in _CAMEL_RE.finditer(chunk))
    return words or [token.lower()]


def lexical_corpus(structure: WalkCorpus) -> WalkCorpus:
    """Word-level rendering of every structure sentence."""
    sentences = tuple(
        tuple(word for token in sentence for word in split_token_words(token))
        for sentence in structure.sentences
    )
    return WalkCorpus(sentences, "lexical")


def combine_corpora(*corpora: WalkCorpus) -> WalkCorpus:
    sentences = tuple(s for c in corpora for s in c.sentences)
    return WalkCorpus(sentences, "combined")


# ---------------------------------------------------------------------------
# Skip-gram with negative sampling
# ---------------------------------------------------------------------------


def pair_loss_and_grads(
    center: np.ndarray, context: np.ndarray, negatives: np.ndarray
) -> tuple[float, np.ndarray, np.ndarray, np.ndarray]:
    """Loss and exact gradients for one (center, context, negatives) triple.

    loss = -log s(center.context) - sum_k log s(-center.neg_k)
    with s the logistic function. Gradients are with respect to the center
    vector, the context output vector, and each negative output vector.
    """
    pos_score = float(center @ context)
    neg_scores = negatives @ center
    loss = float(np.logaddexp(0.0, -pos_score) + np.logaddexp(0.0, neg_scores).sum())

    sig_pos = 1.0 / (1.0 + np.exp(-pos_score))
    sig_neg = 1.0 / (1.0 + np.exp(-neg_scores))

    d_context = (sig_pos - 1.0) * center
    d_negatives = sig_neg[:, None] * center[None, :]
    d_center = (sig_pos - 1.0) * context + (sig_neg[:, None] * negatives).sum(axis=0)
    return loss, d_center, d_context, d_negatives


def _build_vocab(corpus: WalkCorpus, min_count: int) -> tuple[list[str], dict[str, int]]:
    counts: dict[str, int] = {}
    for sentence in corpus.sentences:
        for token in sentence:
            counts[token] = counts.get(token, 0) + 1
    vocab = [t for t, c in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])) if c >= min_count]
    return vocab, counts


def train_skipgram(corpus: WalkCorpus, cfg: TrainConfig) -> EmbeddingTable:
    """Skip-gram with negative sampling, plain SGD, fixed pair order."""
    if not corpus.sentences:
        raise EmptyVocabularyError("empty corpus")
    vocab, counts = _build_vocab(corpus, cfg.min_count)
    if not vocab:
        raise EmptyVocabularyError("no token meets min_count")
    index = {t: i for i, t in enumerate(vocab)}
    vocab_size = len(vocab)

    # unigram^0.75 negative-sampling distribution
    weights = np.array([counts[t] ** 0.75 for t in vocab], dtype=np.float64)
    cumulative = np.cumsum(weights / weights.sum())

    rng = np.random.default_rng(cfg.seed)
    w_in = ((rng.random((vocab_size, cfg.dim)) - 0.5) / cfg.dim).astype(np.float64)
    w_out = np.zeros((vocab_size, cfg.dim), dtype=np.float64)

    # precompute pairs and their negatives once: every epoch then optimizes
    # the same finite objective, which keeps the loss curve monotone
    pairs: list[tuple[int, int, np.ndarray]] = []
    for sentence in corpus.sentences:
        ids = [index[t] for t in sentence if t in index]
        for i, center_id in enumerate(ids):
            lo = max(0, i - cfg.window)
            hi = min(len(ids), i + cfg.window + 1)
            for j in range(lo, hi):
                if j == i:
                    continue
                draws = rng.random(cfg.negatives)
                negatives = np.searchsorted(cumulative, draws).astype(np.int64)
                pairs.append((center_id, ids[j], negatives))
    if not pairs:
        raise EmptyVocabularyError("corpus has no co-occurring tokens")

    total_steps = cfg.epochs * len(pairs)
    step = 0
    losses: list[float] = []
    for _ in range(cfg.epochs):
        epoch_loss = 0.0
        for center_id, context_id, negatives in pairs:
            lr = cfg.learning_rate + (cfg.min_learning_rate - cfg.learning_rate) * (
                step / max(1, total_steps - 1)
            )
            step += 1
            center = w_in[center_id]
            context = w_out[context_id]
            neg_vecs = w_out[negatives]
            loss, d_center, d_context, d_negatives = pair_loss_and_grads(
                center, context, neg_vecs
            )
            epoch_loss += loss
            w_out[context_id] -= lr * d_context
            np.subtract.at(w_out, negatives, lr * d_negatives)
            w_in[center_id] = center - lr * d_center
        losses.append(epoch_loss / len(pairs))

    return EmbeddingTable(
        dim=cfg.dim,
        tokens=tuple(vocab),
        matrix=w_in.astype(np.float32),
        epoch_losses=tuple(losses),
    )


def mean_pool(doc_tokens: list[str], table: EmbeddingTable) -> tuple[np.ndarray, int]:
    """Mean of the available token vectors plus the out-of-vocabulary count."""
    vectors = []
    oov = 0
    for token in doc_tokens:
        if token in table:
            vectors.append(table.vector(token))
        else:
            oov += 1
    if not vectors:
        raise AllOOVError("no token has a vector")
    return np.mean(np.stack(vectors), axis=0), oov


# ---------------------------------------------------------------------------
# Table file formats
# ---------------------------------------------------------------------------


def save_table(table: EmbeddingTable, path: str) -> None:
    """Binary format: one JSON header line, then per-token records of a
    2-byte little-endian name length, the UTF-8 name, and dim float32s."""
    with open(path, "wb") as fh:
        header = {"dim": table.dim, "vocab_size": len(table.tokens)}
        fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
        for i, token in enumerate(table.tokens):
            raw = token.encode()
            fh.write(struct.pack("<H", len(raw)))
            fh.write(raw)
            fh.write(table.matrix[i].astype("<f4").tobytes())


def load_table(path: str) -> EmbeddingTable:
    with open(path, "rb") as fh:
        header = json.loads(fh.readline())
        dim = int(header["dim"])
        vocab_size = int(header["vocab_size"])
        tokens: list[str] = []
        rows = np.empty((vocab_size, dim), dtype=np.float32)
        for i in range(vocab_size):
            (length,) = struct.unpack("<H", fh.read(2))
            tokens.append(fh.read(length).decode())
            rows[i] = np.frombuffer(fh.read(4 * dim), dtype="<f4")
    return EmbeddingTable(dim=dim, tokens=tuple(tokens), matrix=rows)


def save_table_jsonl(table: EmbeddingTable, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"dim": table.dim, "vocab_size": len(table.tokens)}) + "\n")
        for i, token in enumerate(table.tokens):
            record = {"token": token, "vector": [float(x) for x in table.matrix[i]]}
            fh.write(json.dumps(record) + "\n")


def embed_ontology(
    ontology: Ontology,
    cfg: TrainConfig,
    walks_per_node: int = 10,
    depth: int = 4,
) -> EmbeddingTable:
    """Project, walk, add the lexical document, and train, in one call."""
    graph = project(ontology)
    structure = random_walks(graph, depth=depth, walks_per_node=walks_per_node, seed=cfg.seed)
    combined = combine_corpora(structure, lexical_corpus(structure))
    return train_skipgram(combined, cfg)


def structure_tokens(ontology: Ontology) -> list[str]:
    """Token occurrences of the module's structure sentences' building
    blocks: every edge endpoint and label, in deterministic edge order."""
    graph = project(ontology)
    tokens: list[str] = []
    for src, label, dst in graph.edges:
        tokens.extend((src, label, dst))
    if not tokens:
        tokens = list(graph.nodes)
    return tokens
