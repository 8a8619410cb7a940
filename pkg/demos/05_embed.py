"""Graph embedding of a module: projection, random walks, skip-gram training,
and mean pooling into one vector per module."""

import numpy as np

from owlforge.corpus import SynthConfig, generate_synthetic
from owlforge.embed import (
    TrainConfig,
    combine_corpora,
    lexical_corpus,
    mean_pool,
    project,
    random_walks,
    structure_tokens,
    train_skipgram,
)

module = generate_synthetic(SynthConfig(n_ontologies=1, seed=33))[0]
graph = project(module)
print(f"projected graph: {len(graph.nodes)} nodes, {len(graph.edges)} labeled edges")

structure = random_walks(graph, depth=4, walks_per_node=10, seed=0)
lexical = lexical_corpus(structure)
print(f"walk corpus: {len(structure.sentences)} structure sentences")
print("  example:", " ".join(structure.sentences[0]))
print("  lexical:", " ".join(lexical.sentences[0]))

cfg = TrainConfig(dim=64, window=5, epochs=10, negatives=5, seed=0)
table = train_skipgram(combine_corpora(structure, lexical), cfg)
print(f"\ntrained {len(table.tokens)} vectors of dim {table.dim}")
print("per-epoch loss:", " ".join(f"{loss:.3f}" for loss in table.epoch_losses))

anchor = graph.nodes[0]
anchor_vec = table.vector(anchor)

def cosine(token):
    v = table.vector(token)
    return float(anchor_vec @ v / (np.linalg.norm(anchor_vec) * np.linalg.norm(v)))

neighbors = sorted(
    (t for t in table.tokens if t != anchor), key=cosine, reverse=True
)[:5]
print(f"\nnearest neighbors of {anchor}:")
for token in neighbors:
    print(f"  {token:20s} cos={cosine(token):.3f}")

pooled, oov = mean_pool(structure_tokens(module), table)
print(f"\nmodule vector: shape {pooled.shape}, norm {np.linalg.norm(pooled):.3f}, oov {oov}")
