"""End-to-end acceptance suite.

Each test covers one headline property of the library at its stated tolerance
and prints a one-line summary.  Everything that can be exact is exact
(rational or cyclotomic arithmetic); floating point appears only where time
evolution and Gibbs numerics genuinely live in the complex numbers.
"""

import itertools
import subprocess
import sys
import time
from fractions import Fraction

from dessins import hopf, operads, qsm, strata
from dessins.galois import ExponentSumCharacter, GaloisGroup, complex_embed
from dessins.hopf import (
    ForestPolynomial,
    admissible_cuts,
    antipode_identity_holds,
    balanced_cuts,
    clear_caches,
    coassociativity_holds,
    enumerate_trees,
    graft_equivariance_check,
    leaf,
    node,
    relabel_tree,
    vertex_paths,
)
from dessins.qsm import QsmSystem, build_rep


FULL_Z12 = GaloisGroup.full(12)

# closed under the (Z/12)* action: the orbit of 1 together with both fixed labels
CLOSED_ALPHABET = (0, 1, 5, 6, 7, 11)


def _passed(name):
    print(f"PASS: {name}")


def chain(*labels):
    t = leaf(labels[-1])
    for lab in reversed(labels[:-1]):
        t = node(lab, t)
    return t


def cut_pairs(t):
    return frozenset((trunk, pruned) for _, trunk, pruned in admissible_cuts(t))


def test_01_coproduct_coassociative_on_six_vertex_trees():
    clear_caches()
    start = time.monotonic()
    trees = enumerate_trees((0, 1, 2), 6)
    assert len(trees) == 11220
    assert all(coassociativity_holds(t) for t in trees)
    elapsed = time.monotonic() - start
    assert elapsed < 60.0
    _passed(f"coassociativity exact on {len(trees)} trees with <= 6 vertices "
            f"({elapsed:.1f}s)")


def test_02_antipode_convolution_identity():
    clear_caches()
    trees = enumerate_trees((0, 1, 2), 5)
    assert all(antipode_identity_holds(t) for t in trees)
    _passed(f"antipode convolution identity exact on {len(trees)} trees "
            f"with <= 5 vertices")


def test_03a_every_cut_is_group_balanced():
    clear_caches()
    # exhaustive over the full Z/12 alphabet up to 4 vertices, then over the
    # action-closed six-letter alphabet at 5 vertices
    gammas = [FULL_Z12.element(a) for a in FULL_Z12.elements]

    def relabelled_pairs(t, gamma):
        return frozenset(
            (relabel_tree(trunk, gamma.on_label),
             tuple(sorted(relabel_tree(p, gamma.on_label) for p in pruned)))
            for _, trunk, pruned in admissible_cuts(t))

    checked = 0
    for t in enumerate_trees(tuple(range(12)), 4):
        base = None
        for gamma in gammas:
            base = relabelled_pairs(t, gamma)
            assert base == cut_pairs(relabel_tree(t, gamma.on_label))
            checked += 1
    for t in hopf.trees_with_n_nodes(CLOSED_ALPHABET, 5):
        for gamma in gammas:
            assert relabelled_pairs(t, gamma) == \
                cut_pairs(relabel_tree(t, gamma.on_label))
            checked += 1
    # the balanced-cut filter therefore keeps every cut
    for t in enumerate_trees((0, 1, 6, 7), 3):
        assert len(balanced_cuts(t, FULL_Z12)) == len(admissible_cuts(t))
    _passed(f"every admissible cut is balanced under (Z/12)* "
            f"({checked} tree/group-element pairs)")


def test_03b_grafting_equivariance():
    trees = enumerate_trees((1, 6), 4)
    checked = 0
    for t1 in trees:
        sites = vertex_paths(t1)
        for t2 in trees:
            if hopf.tree_nodes(t1) + hopf.tree_nodes(t2) > 8:
                continue
            for a in FULL_Z12.elements:
                gamma = FULL_Z12.element(a)
                for path in sites:
                    assert graft_equivariance_check(gamma, t1, path, t2)
                    checked += 1
    _passed(f"label actions commute with grafting ({checked} cases)")


def test_04_strata_counts():
    labels = lambda n: [str(i) for i in range(1, n + 1)]
    got4 = {k: len(v) for k, v in strata.enumerate_strata(labels(4)).items()}
    assert got4 == {0: 1, 1: 3}
    got5 = {k: len(v) for k, v in strata.enumerate_strata(labels(5)).items()}
    assert got5 == {0: 1, 1: 10, 2: 15}
    six = strata.enumerate_strata(labels(6))
    assert len(six[1]) == 25
    top = strata.maximal_codim_strata(labels(6))
    assert len(top) == 105
    assert sum(1 for _, caterpillar in top if not caterpillar) == 15

    def divisor_formula(n):
        return (2 ** n - 2 - 2 * n) // 2

    def double_factorial(n):
        out = 1
        for k in range(2 * n - 5, 0, -2):
            out *= k
        return out

    for n in range(4, 8):
        assert len(strata.divisorial_strata(labels(n))) == divisor_formula(n)
        assert len(strata.maximal_codim_strata(labels(n))) == double_factorial(n)
    _passed("strata counts: (1,3), (1,10,15), 25 divisors and 105 corners at n=6, "
            "formulas match enumeration for n=4..7")


def _acceptance_rep():
    system = QsmSystem(m=12, N=10, D=2, max_length=5)
    trees = (leaf(0), leaf(6), node(6, leaf(0)), node(1, leaf(7)))
    return system, build_rep(system.char, 5, system.fixed_labels, trees=trees)


def test_05_crossed_product_relations_exact():
    system, rep = _acceptance_rep()
    assert system.k == 2 and system.fixed_labels == (0, 6)
    words = [(0,), (6,), (0, 6)]
    report = qsm.verify_crossed_relations(rep, words=words)
    assert report.ok, report.failed()
    # isometry and the opposite-semigroup law, spelled out
    for w in words:
        assert rep.shift_adjoint(w).compose(rep.shift(w)).equal_on(rep.identity())
    for w1 in words:
        for w2 in words:
            lhs = rep.shift(w1).compose(rep.shift(w2))
            rhs = rep.shift(qsm.compose_words(w2, w1))
            assert lhs.equal_on(rhs)
    _passed(f"crossed-product relations exact on the window "
            f"({len(report.checks)} checks, basis {rep.dim})")


def test_06_time_evolution():
    system, rep = _acceptance_rep()
    worst = 0.0
    for t_val in (0.5, 1.0):
        report = qsm.time_evolution_report(rep, system.N, t_val, group=system.group)
        assert report.max_shift_deviation <= 1e-10
        worst = max(worst, report.max_shift_deviation)
    for tree in rep.trees:
        assert qsm.evolution_fixes_diagonal_exactly(rep, tree)
    _passed(f"time evolution scales shifts (max entrywise error {worst:.1e}) "
            f"and fixes diagonals exactly")


def test_07_partition_function():
    closed = qsm.partition_function(1, k=2, N=10, model="word", mode="closed")
    trunc = qsm.partition_function(1, k=2, N=10, model="word", mode="truncated",
                                   max_length=40)
    assert closed.value == Fraction(10, 8)
    assert abs(float(trunc.value) - float(closed.value)) < 1e-12
    for k in (1, 2, 3, 4):
        n = 2 * k ** 2 + 1          # any N > 2k^2
        z = qsm.partition_function(1, k=k, N=n, model="vertex-edge", mode="closed").value
        assert isinstance(z, Fraction) and z <= 2 * k
    _passed("partition function: truncated = closed within 1e-12; "
            "vertex-edge count obeys Z <= 2k for N > 2k^2 (exact)")


def test_08_gibbs_three_routes():
    system = QsmSystem(m=12, N=10, D=2, max_length=6)
    sample = [leaf(0), leaf(6), chain(6, 0), node(1, leaf(7)),
              node(3, leaf(4), leaf(5))]
    worst = 0.0
    for beta in (1, 2, 5):
        for t in sample:
            closed = qsm.gibbs_value(system, t, beta, route="closed")
            series = qsm.gibbs_value(system, t, beta, route="series")
            trace = qsm.gibbs_value(system, t, beta, route="trace")
            gap = max(abs(closed - series), abs(closed - trace), abs(series - trace))
            worst = max(worst, gap)
            assert gap <= 1e-10
    for t in sample:
        ground = complex_embed(system.char.on_tree(t))
        assert abs(qsm.gibbs_value(system, t, 50, route="closed") - ground) <= 1e-6
    _passed(f"gibbs states: three routes agree (max gap {worst:.1e}); "
            f"beta=50 values within 1e-6 of the ground state")


def test_09_ground_state_and_intertwining():
    char = ExponentSumCharacter(12, 2)
    # phi_inf agrees with the character on generators, exactly
    for t in (leaf(0), leaf(7), chain(6, 1), node(3, leaf(4), leaf(5))):
        assert qsm.ground_state(char, ForestPolynomial.generator(t)) == char.on_tree(t)
    # exact intertwining over every group element, exhaustive on trees with
    # <= 5 vertices over the action-closed alphabet
    checked = 0
    for t in enumerate_trees(CLOSED_ALPHABET, 5):
        base = char.on_tree(t)
        for a in FULL_Z12.elements:
            gamma = FULL_Z12.element(a)
            assert char.on_tree(relabel_tree(t, gamma.on_label)) == gamma.on_value(base)
            checked += 1
    # vanishing on monomials carrying a genuine shift
    zero_words = [(0,), (6,), (0, 6)]
    for w in zero_words:
        assert qsm.ground_state(char, [(1, (("S", w),))]).is_zero()
        assert qsm.ground_state(char, [(1, (("S*", w),))]).is_zero()
        assert qsm.ground_state(char, [(1, (("X", leaf(1)), ("S", w)))]).is_zero()
        assert qsm.ground_state(char, [(1, (("S*", w), ("X", leaf(1))))]).is_zero()
    assert qsm.ground_state(char, [(1, (("S*", (0,)), ("S", (0, 6))))]).is_zero()
    _passed(f"ground state: character values exact, intertwining exact "
            f"({checked} cases), shifts annihilated")


def test_10_magma_descriptions_in_bijection():
    for n in (1, 2, 3, 4, 5):
        expected = operads.catalan(n - 1)
        if n == 1:
            assert operads.tree_to_word(operads.degenerate_magma_tree("a")) == "a"
            count = 1
        else:
            count = len(operads.enumerate_magma_trees([chr(ord("a") + i) for i in range(n)]))
        assert count == expected
    # words with each letter exactly once = trees over all leaf orders
    for n in (2, 3, 4):
        letters = [chr(ord("a") + i) for i in range(n)]
        words_no_repeat = {
            operads.word_to_text(w)
            for w in operads.enumerate_magma_words(letters, n)
            if sorted(operads.word_letters(w)) == sorted(letters)
        }
        from_trees = set()
        for perm in itertools.permutations(letters):
            for t in operads.enumerate_magma_trees(perm):
                from_trees.add(operads.word_to_text(operads.tree_to_word(t)))
        assert from_trees == words_no_repeat
        # and the two directions invert each other
        for perm in itertools.permutations(letters):
            for t in operads.enumerate_magma_trees(perm):
                w = operads.tree_to_word(t)
                assert operads.tree_to_word(operads.word_to_tree(w)) == w
    _passed("magma operad: tree and word descriptions in bijection (|S| <= 4), "
            "fixed-order counts are Catalan 1, 1, 2, 5, 14")


def test_11_admissible_projections():
    labels = [str(i) for i in range(1, 7)]
    grouped = strata.enumerate_strata(labels)
    all_strata = [s for group in grouped.values() for s in group]
    n_checks = 0
    for s in all_strata:
        for size_mid in (4, 5):
            for mid in itertools.combinations(labels, size_mid):
                for size_small in range(3, size_mid):
                    for small in itertools.combinations(mid, size_small):
                        via = strata.admissible_projection(
                            strata.admissible_projection(s, mid), small)
                        direct = strata.admissible_projection(s, small)
                        assert via == direct
                        n_checks += 1
    _passed(f"admissible projections: stabilization always stable, "
            f"functorial on {n_checks} chains over 6 labels")


def test_12_cli_verification_suites():
    start = time.monotonic()
    qsm_proc = subprocess.run([sys.executable, "-m", "dessins", "qsm", "verify"],
                              capture_output=True, text=True)
    hopf_proc = subprocess.run([sys.executable, "-m", "dessins", "hopf", "--verify"],
                               capture_output=True, text=True)
    elapsed = time.monotonic() - start
    assert qsm_proc.returncode == 0, qsm_proc.stdout + qsm_proc.stderr
    assert hopf_proc.returncode == 0, hopf_proc.stdout + hopf_proc.stderr
    assert elapsed < 300.0
    _passed(f"command line: qsm verify and hopf --verify exit 0 ({elapsed:.1f}s)")
