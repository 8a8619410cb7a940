"""Turn a module into English triples, plain text, and a Levi graph."""

from owlforge.antipattern import AntiPatternId, minimal_fixture
from owlforge.translate import estimate_tokens, to_levi, to_text, to_triples

module = minimal_fixture(AntiPatternId.SOSINETO)
doc = to_triples(module)

print("triples:")
for triple in doc.triples:
    print(f"  ({triple.subject!r}, {triple.relation!r}, {triple.object!r})")

print(f"\ntoken estimate: {doc.token_count} (budget 4096)")
assert estimate_tokens(doc) == doc.token_count

print("\nas text:")
print(" ", to_text(doc))

graph = to_levi(doc)
print(f"\nLevi graph: {len(graph.nodes)} nodes, {len(graph.edges)} edges")
for src, dst in graph.edges[:6]:
    print(f"  {src} -> {dst}")
print("  ...")
