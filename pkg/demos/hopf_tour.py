"""The Hopf algebra of labelled rooted trees: admissible cuts, coproduct,
counit, antipode, and the way a label group acts on everything.

Run with:  python3 demos/hopf_tour.py
"""

from dessins.galois import GaloisGroup
from dessins.hopf import (
    ForestPolynomial,
    admissible_cuts,
    antipode,
    antipode_identity_holds,
    balanced_cuts,
    coassociativity_holds,
    coproduct,
    counit,
    enumerate_trees,
    forest_leq,
    format_forest,
    format_tree,
    g_act,
    leaf,
    node,
    parse_tree,
)

t = parse_tree("j3[j1, j2[j0]]")
print(f"tree: {format_tree(t)}")

print("\n== admissible cuts: at most one edge per root-to-leaf path ==")
for edges, trunk, pruned in admissible_cuts(t):
    print(f"  cut {sorted(map(tuple, edges))}: trunk {format_tree(trunk)}, "
          f"pruned {format_forest(pruned)}")

print("\n== coproduct (cuts plus the full-cut term) ==")
x = ForestPolynomial.generator(t)
for (a, b), c in sorted(coproduct(x).terms.items()):
    print(f"  {c} * {format_forest(a)} (x) {format_forest(b)}")

print(f"\ncounit: {counit(x)} (nonzero only on the empty forest)")

print("\n== antipode, computed by the cut recursion ==")
chain2 = node(0, leaf(1))
s = antipode(ForestPolynomial.generator(chain2))
print(f"S(X_{format_tree(chain2)}) = {s}")

print("\n== Hopf identities, checked exactly on small trees ==")
trees = enumerate_trees((0, 1, 2), 4)
print(f"coassociativity on {len(trees)} trees: "
      f"{all(coassociativity_holds(u) for u in trees)}")
print(f"antipode convolution identity: "
      f"{all(antipode_identity_holds(u) for u in trees)}")

print("\n== the forest partial order: graft components into one another ==")
f = (leaf(0), leaf(1))
g = (node(0, leaf(1)),)
print(f"{format_forest(f)} <= {format_forest(g)}: {forest_leq(f, g)}")
print(f"{format_forest(g)} <= {format_forest(f)}: {forest_leq(g, f)}")

print("\n== the label action of (Z/12)* is a Hopf algebra map ==")
group = GaloisGroup.full(12)
gamma = group.element(5)
y = ForestPolynomial.generator(node(1, leaf(7)))
print(f"gamma=5 acts: {y}  ->  {g_act(gamma, y)}")
for u in enumerate_trees((0, 1, 6, 7), 3):
    assert len(balanced_cuts(u, group)) == len(admissible_cuts(u))
print("every admissible cut is balanced for the label action (checked)")
