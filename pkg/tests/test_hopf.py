from fractions import Fraction

import pytest

from dessins import hopf
from dessins.hopf import (
    EMPTY_FOREST,
    ForestPolynomial,
    PairPolynomial,
    TooLarge,
    TreeSyntaxError,
    admissible_cuts,
    antipode,
    antipode_identity_holds,
    balanced_cuts,
    coassociativity_holds,
    coproduct,
    counit,
    counit_axioms_hold,
    enumerate_trees,
    forest,
    forest_leq,
    format_tree,
    g_act,
    graft_at,
    graft_equivariance_check,
    leaf,
    node,
    parse_tree,
    polynomial_from_json,
    polynomial_to_json,
    relabel_tree,
    trees_with_n_nodes,
    vertex_paths,
)
from dessins.galois import GaloisGroup


def chain(*labels):
    t = leaf(labels[-1])
    for lab in reversed(labels[:-1]):
        t = node(lab, t)
    return t


def test_parse_and_format():
    t = parse_tree("j3[j1, j2[j0]]")
    assert t == node(3, leaf(1), node(2, leaf(0)))
    assert parse_tree(format_tree(t)) == t
    assert parse_tree("j0") == leaf(0)
    with pytest.raises(TreeSyntaxError):
        parse_tree("j1[j2")
    with pytest.raises(TreeSyntaxError):
        parse_tree("[j1]")


def test_canonical_children_order():
    assert node(0, leaf(2), leaf(1)) == node(0, leaf(1), leaf(2))


def test_cuts_single_vertex():
    assert len(admissible_cuts(leaf(5))) == 1
    edges, trunk, pruned = admissible_cuts(leaf(5))[0]
    assert edges == frozenset() and trunk == leaf(5) and pruned == ()


def test_cuts_two_chain():
    cuts = admissible_cuts(chain(0, 1))
    assert len(cuts) == 2
    pairs = {(trunk, pruned) for _, trunk, pruned in cuts}
    assert (chain(0, 1), ()) in pairs
    assert (leaf(0), (leaf(1),)) in pairs


def test_cuts_three_chain():
    # both edges lie on the single root-to-leaf path, so never together
    cuts = admissible_cuts(chain(0, 1, 2))
    assert len(cuts) == 3
    pairs = {(trunk, pruned) for _, trunk, pruned in cuts}
    assert pairs == {
        (chain(0, 1, 2), ()),
        (chain(0, 1), (leaf(2),)),
        (leaf(0), (chain(1, 2),)),
    }


def test_cut_count_of_chains():
    for n in range(1, 9):
        assert len(admissible_cuts(chain(*range(n)))) == n


def test_cuts_path_condition():
    # cherry: two children, the two edges are on different paths
    t = node(0, leaf(1), leaf(2))
    assert len(admissible_cuts(t)) == 4


def test_coproduct_unit():
    assert coproduct(ForestPolynomial.one()) == PairPolynomial.of(EMPTY_FOREST, EMPTY_FOREST)


def test_coproduct_single_vertex():
    x = ForestPolynomial.generator(leaf(0))
    expected = PairPolynomial.of((leaf(0),), EMPTY_FOREST) + \
        PairPolynomial.of(EMPTY_FOREST, (leaf(0),))
    assert coproduct(x) == expected


def test_coproduct_two_chain():
    t = chain(0, 1)
    x = ForestPolynomial.generator(t)
    expected = (PairPolynomial.of((t,), EMPTY_FOREST)
                + PairPolynomial.of(EMPTY_FOREST, (t,))
                + PairPolynomial.of((leaf(0),), (leaf(1),)))
    assert coproduct(x) == expected


def test_counit():
    assert counit(ForestPolynomial.one()) == 1
    assert counit(ForestPolynomial.generator(leaf(3))) == 0
    x = ForestPolynomial.one().scale(3) + ForestPolynomial.generator(leaf(0)).scale(2)
    assert counit(x) == 3


def test_antipode_unit_and_vertex():
    assert antipode(ForestPolynomial.one()) == ForestPolynomial.one()
    assert antipode(ForestPolynomial.generator(leaf(0))) == \
        ForestPolynomial.generator(leaf(0)).scale(-1)


def test_antipode_two_chain():
    t = chain(0, 1)
    got = antipode(ForestPolynomial.generator(t))
    expected = ForestPolynomial({(t,): -1, forest(leaf(0), leaf(1)): 1})
    assert got == expected


def test_coproduct_is_algebra_morphism():
    a = ForestPolynomial.generator(chain(0, 1))
    b = ForestPolynomial.generator(node(1, leaf(2), leaf(0)))
    assert coproduct(a * b) == coproduct(a) * coproduct(b)


def test_hopf_identities_small_trees():
    for t in enumerate_trees((0, 1, 2), 4):
        assert coassociativity_holds(t)
        assert counit_axioms_hold(t)
        assert antipode_identity_holds(t)


def test_antipode_with_rational_scalars():
    x = ForestPolynomial.generator(chain(0, 1)).scale(Fraction(2, 3))
    y = antipode(x)
    assert y.terms[(chain(0, 1),)] == Fraction(-2, 3)


def test_tree_enumeration_counts():
    # one and two vertex labelled trees over a 3-letter alphabet
    assert len(trees_with_n_nodes((0, 1, 2), 1)) == 3
    assert len(trees_with_n_nodes((0, 1, 2), 2)) == 9
    # 3 vertices: chains (27) + cherries with unordered equal children (3 * 6)
    assert len(trees_with_n_nodes((0, 1, 2), 3)) == 45


def test_forest_leq_reflexive():
    f = forest(chain(0, 1))
    assert forest_leq(f, f)


def test_forest_leq_grafting():
    assert forest_leq(forest(leaf(0), leaf(1)), forest(chain(0, 1)))
    assert forest_leq(forest(leaf(0), leaf(1)), forest(chain(1, 0)))
    assert not forest_leq(forest(chain(0, 1)), forest(leaf(0)))


def test_forest_leq_subforest():
    # extra components may be dropped before grafting
    assert forest_leq(forest(leaf(0), leaf(1), leaf(5)), forest(chain(0, 1)))


def test_forest_leq_budget():
    big = forest(*[leaf(0)] * 9)
    with pytest.raises(TooLarge):
        forest_leq(big, big)


def test_g_act_identity_and_relabel():
    group = GaloisGroup.full(12)
    e = group.element(1)
    x = ForestPolynomial.generator(chain(1, 7))
    assert g_act(e, x) == x
    g5 = group.element(5)
    assert g_act(g5, ForestPolynomial.generator(leaf(1))) == \
        ForestPolynomial.generator(leaf(5))


def test_g_act_multiplicative():
    group = GaloisGroup.full(12)
    g5 = group.element(5)
    a = ForestPolynomial.generator(chain(1, 2))
    b = ForestPolynomial.generator(leaf(7))
    assert g_act(g5, a * b) == g_act(g5, a) * g_act(g5, b)


def test_g_act_commutes_with_structure_maps():
    # exhaustive on trees with <= 5 vertices over the full Z/3 alphabet
    group = GaloisGroup.full(3)
    for t in enumerate_trees((0, 1, 2), 5):
        x = ForestPolynomial.generator(t)
        for a in group.elements:
            gamma = group.element(a)
            gx = g_act(gamma, x)
            assert counit(gx) == counit(x)
            assert antipode(gx) == g_act(gamma, antipode(x))
            left = coproduct(gx)
            right = PairPolynomial({
                (tuple(sorted(relabel_tree(u, gamma.on_label) for u in fa)),
                 tuple(sorted(relabel_tree(u, gamma.on_label) for u in fb))): c
                for (fa, fb), c in coproduct(x).terms.items()
            })
            assert left == right


def test_balanced_cuts_trivial_group():
    group = GaloisGroup.trivial(12)
    for t in enumerate_trees((0, 5), 3):
        assert len(balanced_cuts(t, group)) == len(admissible_cuts(t))


def test_balanced_cuts_label_action_equals_all_cuts():
    group = GaloisGroup.full(12)
    for t in enumerate_trees((0, 1, 6, 7), 4):
        got = {(trunk, pruned) for _, trunk, pruned in balanced_cuts(t, group)}
        want = {(trunk, pruned) for _, trunk, pruned in admissible_cuts(t)}
        assert got == want


def test_balanced_cuts_single_vertex():
    group = GaloisGroup.full(12)
    assert len(balanced_cuts(leaf(7), group)) == 1


def test_graft_equivariance_label_action():
    group = GaloisGroup.full(12)
    t1 = node(1, leaf(6))
    t2 = node(7, leaf(0))
    for a in group.elements:
        gamma = group.element(a)
        for path in vertex_paths(t1):
            assert graft_equivariance_check(gamma, t1, path, t2)


def test_graft_equivariance_fixture_can_fail():
    # a shape-changing tree map that is not induced by labels: swaps a chain
    # with a cherry, keeping sites fixed
    a_chain = chain(0, 0, 0)
    a_cherry = node(0, leaf(0), leaf(0))

    class Swap:
        def on_tree(self, t):
            if t == a_chain:
                return a_cherry
            if t == a_cherry:
                return a_chain
            return t

        def on_site(self, t, path):
            return path

    assert not graft_equivariance_check(Swap(), chain(0, 0), (0,), leaf(0))


def test_graft_at_paths():
    t = node(0, leaf(1))
    grown = graft_at(t, (0,), leaf(2))
    assert grown == node(0, node(1, leaf(2)))
    grown_root = graft_at(t, (), leaf(2))
    assert grown_root == node(0, leaf(1), leaf(2))


def test_polynomial_json_round_trip():
    x = ForestPolynomial.generator(chain(0, 1)).scale(Fraction(3, 7)) - \
        ForestPolynomial.one().scale(2)
    y = polynomial_from_json(polynomial_to_json(x))
    assert x == y
