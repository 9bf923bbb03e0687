"""Grafting composition of trees, iterated grafting plans, and the magma
operad in both of its standard presentations: oriented trivalent trees and
fully parenthesized binary words.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from dessins import graphs
from dessins.graphs import CombinatorialGraph, validate


class GraftError(ValueError):
    pass


class NotATail(GraftError):
    pass


class SameSite(GraftError):
    pass


class ConsumedTail(GraftError):
    pass


class RootGraftNotAllowed(GraftError):
    pass


class TooSmall(ValueError):
    pass


class MalformedWord(ValueError):
    pass


def _check_tail(g: CombinatorialGraph, t: str):
    if t not in g.boundary:
        raise NotATail(f"{t!r} is not a flag of the graph")
    if g.involution[t] != t:
        raise NotATail(f"{t!r} is half of an edge, not a tail")


def graft_within(g: CombinatorialGraph, t1: str, t2: str) -> CombinatorialGraph:
    """Join two distinct tails of one graph into a new edge."""
    _check_tail(g, t1)
    _check_tail(g, t2)
    if t1 == t2:
        raise SameSite(f"cannot graft tail {t1!r} to itself")
    invl = dict(g.involution)
    invl[t1], invl[t2] = t2, t1
    return validate(g.flags, g.vertices, g.boundary, invl)


def graft_with_maps(g1: CombinatorialGraph, t1: str, g2: CombinatorialGraph, t2: str):
    """Graft two graphs at one tail each; returns (result, flag maps).

    The inputs are namespaced (prefixes "0." and "1.") so they need not be
    disjoint as raw data; the two chosen tails become halves of a new edge.
    """
    _check_tail(g1, t1)
    _check_tail(g2, t2)
    if g1 is g2 and t1 == t2:
        raise SameSite("the two sites are the same tail of the same graph")
    g, fmap1, fmap2 = graphs.disjoint_union_with_maps(g1, g2)
    return graft_within(g, fmap1[t1], fmap2[t2]), fmap1, fmap2


def graft(g1: CombinatorialGraph, t1: str, g2: CombinatorialGraph, t2: str) -> CombinatorialGraph:
    """Binary grafting: set-theoretic union with t1, t2 joined into one edge."""
    return graft_with_maps(g1, t1, g2, t2)[0]


def iterate_grafts(parts, plan) -> CombinatorialGraph:
    """Left-to-right fold of grafting instructions over a forest.

    `parts` is a sequence of graphs, namespaced as "0.", "1.", ...; each plan
    entry (i, tail_i, j, tail_j) joins two tails named in the original parts.
    Instructions with disjoint sites commute up to isomorphism.
    """
    flags, vertices, boundary, involution = [], [], {}, {}
    renames = []
    for i, p in enumerate(parts):
        pf = {f: f"{i}.{f}" for f in p.flags}
        renames.append(pf)
        flags.extend(pf.values())
        vertices.extend(f"{i}.{v}" for v in p.vertices)
        boundary.update({pf[f]: f"{i}.{p.boundary[f]}" for f in p.flags})
        involution.update({pf[f]: pf[p.involution[f]] for f in p.flags})
    g = validate(flags, vertices, boundary, involution)
    consumed = set()
    for i, ti, j, tj in plan:
        a, b = renames[i].get(ti), renames[j].get(tj)
        if a is None or b is None:
            raise NotATail(f"unknown tail in instruction ({i}, {ti!r}, {j}, {tj!r})")
        for f in (a, b):
            if f in consumed:
                raise ConsumedTail(f"tail {f!r} was consumed by an earlier graft")
        g = graft_within(g, a, b)
        consumed.update((a, b))
    return g


# --- magma operad, description by words -----------------------------------

def enumerate_magma_words(letters, arity: int):
    """All fully parenthesized words of the given arity over the alphabet.

    Words of arity 1 are bare letters; a word of arity m is a pair (w1 w2)
    with arities p + q = m.  The count is Catalan(m-1) * len(letters)**m.
    """
    letters = list(letters)
    if arity < 1:
        raise MalformedWord("arity must be >= 1")
    table = {1: list(letters)}
    for m in range(2, arity + 1):
        words = []
        for p in range(1, m):
            q = m - p
            words.extend((w1, w2) for w1 in table[p] for w2 in table[q])
        table[m] = words
    return sorted(table[arity], key=word_to_text)


def word_arity(w) -> int:
    if isinstance(w, tuple):
        return word_arity(w[0]) + word_arity(w[1])
    return 1


def word_letters(w) -> tuple:
    if isinstance(w, tuple):
        return word_letters(w[0]) + word_letters(w[1])
    return (w,)


def word_to_text(w) -> str:
    if isinstance(w, tuple):
        return "(" + word_to_text(w[0]) + word_to_text(w[1]) + ")"
    return str(w)


def parse_word(text: str):
    """Parse a parenthesized word; letters are single non-paren characters."""
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(text):
            raise MalformedWord("unexpected end of word")
        c = text[pos]
        if c == "(":
            pos += 1
            left = parse()
            right = parse()
            if pos >= len(text) or text[pos] != ")":
                raise MalformedWord(f"expected ')' at position {pos}")
            pos += 1
            return (left, right)
        if c == ")":
            raise MalformedWord(f"unexpected ')' at position {pos}")
        pos += 1
        return c

    w = parse()
    if pos != len(text):
        raise MalformedWord(f"trailing input at position {pos}")
    return w


# --- magma operad, description by oriented trivalent trees -----------------

TOWARD = "+"    # flag oriented towards its boundary vertex (input)
OUTWARD = "-"   # flag oriented away from its boundary vertex (output)


@dataclass(frozen=True)
class OrientedBinaryTree:
    """Rooted trivalent tree with ordered labelled leaves.

    Every vertex bounds two inward flags and one outward flag; the two halves
    of each edge carry opposite orientations, and following outward flags from
    any vertex reaches the root tail.  The degenerate arity-1 tree (one vertex,
    one leaf, one root tail) is allowed and flagged.
    """

    graph: CombinatorialGraph
    orientation: dict[str, str]
    root_flag: str
    leaf_order: tuple[tuple[str, object], ...]   # (tail flag, label), left to right
    degenerate: bool = False

    @property
    def labels(self) -> tuple:
        return tuple(label for _, label in self.leaf_order)


def _tree_from_shape(shape) -> OrientedBinaryTree:
    """Build the oriented graph of a parenthesized shape (nested pairs)."""
    flags, vertices, boundary, involution, orientation = [], [], {}, {}, {}
    leaves = []

    def build(node, path):
        # returns the name of the outward flag of this subtree; bare letters
        # never reach here because the parent creates leaf tails inline
        if not isinstance(node, tuple):
            raise AssertionError("leaves are handled by their parent vertex")
        vname = "v" + path
        vertices.append(vname)
        out = vname + ".o"
        flags.append(out)
        boundary[out] = vname
        orientation[out] = OUTWARD
        for side, child in zip("LR", node):
            inp = vname + "." + side.lower()
            flags.append(inp)
            boundary[inp] = vname
            orientation[inp] = TOWARD
            if isinstance(child, tuple):
                child_out = build(child, path + side)
                involution[inp] = child_out
                involution[child_out] = inp
            else:
                involution[inp] = inp      # leaf tail
                leaves.append((inp, child))
        return out

    if not isinstance(shape, tuple):
        # degenerate arity-1 tree
        v, leaf, out = "v", "v.i", "v.o"
        g = validate([leaf, out], [v], {leaf: v, out: v}, {leaf: leaf, out: out})
        return OrientedBinaryTree(g, {leaf: TOWARD, out: OUTWARD}, out,
                                  ((leaf, shape),), degenerate=True)

    root_out = build(shape, "")
    involution[root_out] = root_out
    g = validate(flags, vertices, boundary, involution)
    return OrientedBinaryTree(g, orientation, root_out, tuple(leaves))


def degenerate_magma_tree(label) -> OrientedBinaryTree:
    """The arity-1 unit: a single vertex carrying one labelled leaf and the root."""
    return _tree_from_shape(label)


def word_to_tree(w) -> OrientedBinaryTree:
    return _tree_from_shape(w)


def tree_to_word(t: OrientedBinaryTree):
    """Read the parenthesized word off an oriented tree.

    The two branches at each vertex are ordered by the position of their
    leaves in the linear leaf order; branches must cover contiguous runs.
    """
    if t.degenerate:
        return t.leaf_order[0][1]
    g = t.graph
    pos = {flag: i for i, (flag, _) in enumerate(t.leaf_order)}
    label = dict(t.leaf_order)

    def read(out_flag):
        # out_flag: the outward flag of the subtree's top vertex
        v = g.boundary[out_flag]
        inputs = [f for f in g.flags_at(v) if f != out_flag]
        if len(inputs) != 2 or any(t.orientation[f] != TOWARD for f in inputs):
            raise MalformedWord(f"vertex {v!r} is not binary with two inputs")
        branches = []
        for f in inputs:
            if g.involution[f] == f:
                branches.append((pos[f], pos[f], label[f]))
            else:
                child_out = g.involution[f]
                lo, hi, sub = read(child_out)
                branches.append((lo, hi, sub))
        branches.sort()
        (lo1, hi1, w1), (lo2, hi2, w2) = branches
        if hi1 + 1 != lo2:
            raise MalformedWord("branch leaves are not contiguous in the leaf order")
        return (lo1, hi2, (w1, w2))

    lo, hi, w = read(t.root_flag)
    if (lo, hi) != (0, len(t.leaf_order) - 1):
        raise MalformedWord("leaf order does not cover the tree")
    return w


def _shapes(seq):
    if len(seq) == 1:
        return [seq[0]]
    out = []
    for p in range(1, len(seq)):
        for left in _shapes(seq[:p]):
            for right in _shapes(seq[p:]):
                out.append((left, right))
    return out


def enumerate_magma_trees(leaves) -> list[OrientedBinaryTree]:
    """All magma trees over a fixed left-to-right leaf order.

    With |leaves| = n >= 2 there are Catalan(n-1) trees, in lexicographic
    order of their word representation.
    """
    leaves = tuple(leaves)
    if len(leaves) < 2:
        raise TooSmall("need at least two leaves; the arity-1 tree is degenerate_magma_tree")
    shapes = sorted(_shapes(leaves), key=word_to_text)
    return [_tree_from_shape(s) for s in shapes]


def validate_magma_tree(t: OrientedBinaryTree) -> None:
    """Check the oriented-tree conditions; raises MalformedWord on failure."""
    g = t.graph
    if t.degenerate:
        if len(g.vertices) != 1 or g.edges or len(g.tails) != 2:
            raise MalformedWord("degenerate tree must be one vertex with two tails")
        return
    for v in g.vertices:
        fl = g.flags_at(v)
        if len(fl) != 3:
            raise MalformedWord(f"vertex {v!r} does not bound exactly three flags")
        inward = [f for f in fl if t.orientation[f] == TOWARD]
        outward = [f for f in fl if t.orientation[f] == OUTWARD]
        if len(inward) != 2 or len(outward) != 1:
            raise MalformedWord(f"vertex {v!r} must have two inputs and one output")
    for e in g.edges:
        a, b = sorted(e)
        if t.orientation[a] == t.orientation[b]:
            raise MalformedWord("edge halves must carry opposite orientations")
    if g.involution[t.root_flag] != t.root_flag or t.orientation[t.root_flag] != OUTWARD:
        raise MalformedWord("root flag must be an outward tail")
    root_vertex = g.boundary[t.root_flag]
    for v in g.vertices:
        cur, seen = v, set()
        while cur != root_vertex:
            if cur in seen:
                raise MalformedWord("outward path revisits a vertex")
            seen.add(cur)
            out = [f for f in g.flags_at(cur) if t.orientation[f] == OUTWARD][0]
            if g.involution[out] == out:
                raise MalformedWord(f"outward path from {v!r} exits at a non-root tail")
            cur = g.boundary[g.involution[out]]


def graft_magma(t1: OrientedBinaryTree, t2: OrientedBinaryTree, leaf_label) -> OrientedBinaryTree:
    """Graft the root of t1 onto the leaf of t2 carrying `leaf_label`.

    Grafting onto the root is not a magma composition and is rejected.
    """
    target = [f for f, lab in t2.leaf_order if lab == leaf_label]
    if not target:
        if leaf_label == t2.root_flag:
            raise RootGraftNotAllowed("the root tail is not a composition site")
        raise NotATail(f"t2 has no leaf labelled {leaf_label!r}")
    leaf_flag = target[0]
    g, fmap1, fmap2 = graft_with_maps(t1.graph, t1.root_flag, t2.graph, leaf_flag)
    orientation = {fmap1[f]: o for f, o in t1.orientation.items()}
    orientation.update({fmap2[f]: o for f, o in t2.orientation.items()})
    leaf_order = []
    for f, lab in t2.leaf_order:
        if f == leaf_flag:
            leaf_order.extend((fmap1[g1f], l1) for g1f, l1 in t1.leaf_order)
        else:
            leaf_order.append((fmap2[f], lab))
    return OrientedBinaryTree(g, orientation, fmap2[t2.root_flag], tuple(leaf_order))


def enumeration_to_json(items) -> list[str]:
    """Words or oriented trees as a list of parenthesized word texts."""
    out = []
    for item in items:
        if isinstance(item, OrientedBinaryTree):
            item = tree_to_word(item)
        out.append(word_to_text(item))
    return out


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)
