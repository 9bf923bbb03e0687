"""Tour of the graph layer: flags, vertices, boundary and involution, derived
edges and tails, grafting, and the magma operad in both descriptions.

Run with:  python3 demos/graphs_and_grafting.py
"""

from dessins.graphs import corolla, find_isomorphism, structure_report, to_dot
from dessins.operads import (
    catalan,
    enumerate_magma_trees,
    enumerate_magma_words,
    graft,
    tree_to_word,
    word_to_text,
    word_to_tree,
)

# A graph is four pieces of data: flags, vertices, a boundary map flags ->
# vertices, and an involution on flags.  Two-element involution orbits are
# edges, fixed flags are tails.
print("== a corolla: one vertex, three tails ==")
g = corolla("v", ["a", "b", "c"])
rep = structure_report(g)
print(f"edges={rep.edges}, tails={rep.tails}, stable={rep.is_stable}, "
      f"multiplicities={rep.vertex_multiplicities}")

print("\n== grafting: two tails become halves of a new edge ==")
h = graft(corolla("v", ["a", "b", "c"]), "a", corolla("w", ["x", "y", "z"]), "x")
rep = structure_report(h)
print(f"vertices={len(h.vertices)}, edges={rep.edges}, tails={rep.tails} "
      f"(counts: edges add +1, tails add -2)")
print(to_dot(h))

print("== isomorphism testing returns an explicit witness ==")
k = graft(corolla("p", ["1", "2", "3"]), "2", corolla("q", ["4", "5", "6"]), "5")
iso = find_isomorphism(h, k)
print(f"h ~ k: {iso is not None}; vertex map {iso.vertex_map}")

print("\n== the magma operad: binary trees = parenthesized words ==")
for arity in range(1, 6):
    n_words = len(enumerate_magma_words(["a"], arity))
    print(f"arity {arity}: {n_words} parenthesizations of a^{arity} "
          f"(Catalan {catalan(arity - 1)})")

trees = enumerate_magma_trees(["a", "b", "c", "d"])
print(f"\ntrees over the fixed leaf order (a, b, c, d): {len(trees)}")
for t in trees:
    print(" ", word_to_text(tree_to_word(t)))

w = tree_to_word(trees[0])
print(f"\nround trip through the graph encoding: {word_to_text(w)} -> tree -> "
      f"{word_to_text(tree_to_word(word_to_tree(w)))}")
