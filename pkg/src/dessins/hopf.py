"""The commutative Hopf algebra of labelled rooted trees over exact rationals.

Trees are non-planar (children unordered) and represented as canonical nested
tuples (label, children); forests are sorted tuples of trees; algebra elements
are sparse maps forest -> exact coefficient.  The coproduct runs over
admissible cuts (edge sets meeting each root-to-leaf path at most once)
together with a distinguished full cut contributing 1 (x) X_t, so counit and
antipode satisfy the usual Hopf identities.

Coefficients are Python ints or fractions.Fraction; both are exact and mix
freely.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction


class TreeSyntaxError(ValueError):
    pass


# --- trees and forests ------------------------------------------------------

def node(label, *children):
    """A rooted tree: label plus canonically sorted child subtrees."""
    return (label, tuple(sorted(children)))


def leaf(label):
    return (label, ())


def tree_nodes(t) -> int:
    return 1 + sum(tree_nodes(c) for c in t[1])


def tree_edges(t) -> int:
    return tree_nodes(t) - 1


def label_sum(t) -> int:
    return t[0] + sum(label_sum(c) for c in t[1])


def tree_labels(t) -> list:
    out = [t[0]]
    for c in t[1]:
        out.extend(tree_labels(c))
    return out


def canonicalize(t):
    label, children = t
    return (label, tuple(sorted(canonicalize(c) for c in children)))


def forest(*trees) -> tuple:
    return tuple(sorted(trees))


EMPTY_FOREST = ()


def forest_nodes(f) -> int:
    return sum(tree_nodes(t) for t in f)


# --- text form --------------------------------------------------------------

_LABEL_RE = re.compile(r"\s*(j?\d+|[A-Za-z_]\w*)\s*")


def parse_tree(text: str):
    """Parse nested bracket syntax like "j3[j1, j2[j0]]".

    Labels "j<k>" or bare digits become ints; other identifiers stay strings.
    """
    pos = 0

    def parse_label():
        nonlocal pos
        m = _LABEL_RE.match(text, pos)
        if not m:
            raise TreeSyntaxError(f"expected a label at position {pos} in {text!r}")
        pos = m.end()
        raw = m.group(1)
        if raw.isdigit():
            return int(raw)
        if raw[0] == "j" and raw[1:].isdigit():
            return int(raw[1:])
        return raw

    def parse_node():
        nonlocal pos
        label = parse_label()
        children = []
        if pos < len(text) and text[pos] == "[":
            pos += 1
            while True:
                children.append(parse_node())
                if pos < len(text) and text[pos] == ",":
                    pos += 1
                    continue
                break
            if pos >= len(text) or text[pos] != "]":
                raise TreeSyntaxError(f"expected ']' at position {pos} in {text!r}")
            pos += 1
        while pos < len(text) and text[pos].isspace():
            pos += 1
        return node(*([label] + children))

    t = parse_node()
    if pos != len(text):
        raise TreeSyntaxError(f"trailing input at position {pos} in {text!r}")
    return t


def format_tree(t) -> str:
    label, children = t
    head = f"j{label}" if isinstance(label, int) else str(label)
    if not children:
        return head
    return head + "[" + ", ".join(format_tree(c) for c in children) + "]"


def format_forest(f) -> str:
    return " ".join(format_tree(t) for t in f) if f else "1"


# --- polynomials ------------------------------------------------------------

class ForestPolynomial:
    """Finite exact linear combination of forests (monomials in trees)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for f, c in terms.items():
                if c:
                    self.terms[f] = c

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({EMPTY_FOREST: 1})

    @classmethod
    def generator(cls, tree):
        return cls({(tree,): 1})

    @classmethod
    def from_forest(cls, f, coeff=1):
        return cls({tuple(sorted(f)): coeff})

    def __eq__(self, other):
        return isinstance(other, ForestPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for f, c in other.terms.items():
            s = out.get(f, 0) + c
            if s:
                out[f] = s
            else:
                out.pop(f, None)
        return ForestPolynomial(out) if out else ForestPolynomial()

    def __neg__(self):
        return ForestPolynomial({f: -c for f, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar):
        if not scalar:
            return ForestPolynomial()
        return ForestPolynomial({f: c * scalar for f, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, ForestPolynomial):
            return self.scale(other)
        out: dict = {}
        for f1, c1 in self.terms.items():
            for f2, c2 in other.terms.items():
                f = tuple(sorted(f1 + f2))
                s = out.get(f, 0) + c1 * c2
                if s:
                    out[f] = s
                else:
                    out.pop(f, None)
        return ForestPolynomial(out)

    __rmul__ = scale

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for f in sorted(self.terms):
            c = self.terms[f]
            bits.append(f"{c}*{format_forest(f)}")
        return " + ".join(bits)


class PairPolynomial:
    """Linear combination of forest (x) forest pairs."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for k, c in terms.items():
                if c:
                    self.terms[k] = c

    @classmethod
    def of(cls, left, right, coeff=1):
        return cls({(tuple(sorted(left)), tuple(sorted(right))): coeff})

    def __eq__(self, other):
        return isinstance(other, PairPolynomial) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return PairPolynomial(out)

    def __mul__(self, other):
        out: dict = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                k = (tuple(sorted(a1 + a2)), tuple(sorted(b1 + b2)))
                s = out.get(k, 0) + c1 * c2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return PairPolynomial(out)

    def scale(self, scalar):
        if not scalar:
            return PairPolynomial()
        return PairPolynomial({k: c * scalar for k, c in self.terms.items()})

    def __repr__(self):
        bits = [f"{c}*({format_forest(a)} (x) {format_forest(b)})"
                for (a, b), c in sorted(self.terms.items())]
        return " + ".join(bits) or "0"


# --- admissible cuts --------------------------------------------------------

FULL_CUT = "full-cut"

_cuts_cache: dict = {}


def admissible_cuts(t):
    """All edge-subset cuts of a tree, with multiplicity.

    Returns tuples (edges, trunk, pruned): `edges` is a frozenset of vertex
    paths (each non-root vertex names its parent edge), `trunk` is the rooted
    component containing the root, `pruned` the forest of removed branches.
    The empty cut (t, empty forest) is included; the full cut is not.
    """
    cached = _cuts_cache.get(t)
    if cached is not None:
        return cached

    label, children = t
    options_per_child = []
    for i, c in enumerate(children):
        opts = [(frozenset(((i,),)), None, (c,))]  # cut the edge to child i
        for edges, trunk_c, pruned_c in admissible_cuts(c):
            shifted = frozenset((i,) + p for p in edges)
            opts.append((shifted, trunk_c, pruned_c))
        options_per_child.append(opts)

    out = []

    def combine(i, edges, trunks, pruned):
        if i == len(children):
            out.append((edges, (label, tuple(sorted(trunks))), tuple(sorted(pruned))))
            return
        for e, trunk_c, pruned_c in options_per_child[i]:
            combine(i + 1, edges | e, trunks + (() if trunk_c is None else (trunk_c,)),
                    pruned + pruned_c)

    combine(0, frozenset(), (), ())
    out = tuple(out)
    _cuts_cache[t] = out
    return out


_coproduct_tree_cache: dict = {}
_coproduct_forest_cache: dict = {}


def _coproduct_tree(t) -> PairPolynomial:
    cached = _coproduct_tree_cache.get(t)
    if cached is not None:
        return cached
    terms: dict = {}
    for _, trunk, pruned in admissible_cuts(t):
        k = ((trunk,), pruned)
        terms[k] = terms.get(k, 0) + 1
    full = (EMPTY_FOREST, (t,))
    terms[full] = terms.get(full, 0) + 1
    out = PairPolynomial(terms)
    _coproduct_tree_cache[t] = out
    return out


def _coproduct_forest(f) -> PairPolynomial:
    if not f:
        return PairPolynomial.of(EMPTY_FOREST, EMPTY_FOREST)
    cached = _coproduct_forest_cache.get(f)
    if cached is not None:
        return cached
    out = _coproduct_tree(f[0])
    for t in f[1:]:
        out = out * _coproduct_tree(t)
    _coproduct_forest_cache[f] = out
    return out


def coproduct(x: ForestPolynomial) -> PairPolynomial:
    """Cut coproduct, an algebra morphism to the pair algebra."""
    out = PairPolynomial()
    for f, c in x.terms.items():
        out = out + _coproduct_forest(f).scale(c)
    return out


def counit(x: ForestPolynomial):
    """Coefficient of the empty forest."""
    return x.terms.get(EMPTY_FOREST, 0)


_antipode_tree_cache: dict = {}


def _antipode_tree(t) -> ForestPolynomial:
    cached = _antipode_tree_cache.get(t)
    if cached is not None:
        return cached
    # S(X_t) = -X_t - sum over nonempty cuts of S(X_trunk) * X_pruned
    acc = ForestPolynomial({(t,): -1})
    for edges, trunk, pruned in admissible_cuts(t):
        if not edges:
            continue
        acc = acc - _antipode_tree(trunk) * ForestPolynomial({pruned: 1})
    _antipode_tree_cache[t] = acc
    return acc


def antipode(x: ForestPolynomial) -> ForestPolynomial:
    """Hopf antipode: S(1) = 1, multiplicative on forests, linear."""
    out = ForestPolynomial()
    for f, c in x.terms.items():
        term = ForestPolynomial.one()
        for t in f:
            term = term * _antipode_tree(t)
        out = out + term.scale(c)
    return out


def clear_caches():
    _cuts_cache.clear()
    _coproduct_tree_cache.clear()
    _coproduct_forest_cache.clear()
    _antipode_tree_cache.clear()


# --- Hopf identity checks (used by tests and the command line) --------------

def coassociativity_holds(t) -> bool:
    """(coproduct (x) id) coproduct == (id (x) coproduct) coproduct on X_t."""
    delta = _coproduct_tree(t)
    left: dict = {}
    right: dict = {}
    for (a, b), c in delta.terms.items():
        for (a1, a2), c2 in _coproduct_forest(a).terms.items():
            k = (a1, a2, b)
            s = left.get(k, 0) + c * c2
            if s:
                left[k] = s
            else:
                left.pop(k, None)
        for (b1, b2), c2 in _coproduct_forest(b).terms.items():
            k = (a, b1, b2)
            s = right.get(k, 0) + c * c2
            if s:
                right[k] = s
            else:
                right.pop(k, None)
    return left == right


def counit_axioms_hold(t) -> bool:
    x = ForestPolynomial.generator(t)
    delta = coproduct(x)
    left = ForestPolynomial()
    right = ForestPolynomial()
    for (a, b), c in delta.terms.items():
        if a == EMPTY_FOREST:
            left = left + ForestPolynomial({b: c})
        if b == EMPTY_FOREST:
            right = right + ForestPolynomial({a: c})
    return left == x and right == x


def antipode_identity_holds(t) -> bool:
    """m(S (x) id) coproduct == unit . counit == m(id (x) S) coproduct on X_t."""
    x = ForestPolynomial.generator(t)
    delta = coproduct(x)
    left = ForestPolynomial()
    right = ForestPolynomial()
    for (a, b), c in delta.terms.items():
        left = left + (antipode(ForestPolynomial({a: 1})) * ForestPolynomial({b: 1})).scale(c)
        right = right + (ForestPolynomial({a: 1}) * antipode(ForestPolynomial({b: 1}))).scale(c)
    target = ForestPolynomial.one().scale(counit(x))
    return left == target and right == target


# --- relabelling and the group action ----------------------------------------

def relabel_tree(t, fn):
    label, children = t
    return (fn(label), tuple(sorted(relabel_tree(c, fn) for c in children)))


def relabel(x: ForestPolynomial, fn) -> ForestPolynomial:
    out: dict = {}
    for f, c in x.terms.items():
        k = tuple(sorted(relabel_tree(t, fn) for t in f))
        out[k] = out.get(k, 0) + c
    return ForestPolynomial(out)


def g_act(gamma, x):
    """Relabel every vertex by a group element; an algebra and coalgebra map.

    `gamma` is a group element exposing on_label (see galois.GroupElement).
    """
    if isinstance(x, tuple):
        return relabel_tree(x, gamma.on_label)
    return relabel(x, gamma.on_label)


def balanced_cuts(t, group):
    """Admissible cuts whose trunk/pruned pair stays an admissible cut of the
    relabelled tree for every group element.

    For label-only actions this is all of admissible_cuts(t)."""
    cuts = admissible_cuts(t)
    out = []
    for edges, trunk, pruned in cuts:
        ok = True
        for a in group.elements:
            gamma = group.element(a)
            gt = relabel_tree(t, gamma.on_label)
            pair = (relabel_tree(trunk, gamma.on_label),
                    tuple(sorted(relabel_tree(p, gamma.on_label) for p in pruned)))
            if pair not in {(tr, pr) for _, tr, pr in admissible_cuts(gt)}:
                ok = False
                break
        if ok:
            out.append((edges, trunk, pruned))
    return out


# --- grafting of rooted trees ------------------------------------------------

def vertex_paths(t) -> list[tuple]:
    """All vertices of the canonical form, as child-index paths from the root."""
    out = [()]
    for i, c in enumerate(t[1]):
        out.extend((i,) + p for p in vertex_paths(c))
    return out


def leaf_paths(t) -> list[tuple]:
    return [p for p in vertex_paths(t) if not _subtree_at(t, p)[1]]


def _subtree_at(t, path):
    for i in path:
        t = t[1][i]
    return t


def graft_at(t1, path, t2):
    """Attach the root of t2 as a new child of the vertex of t1 at `path`."""
    label, children = t1
    if not path:
        return (label, tuple(sorted(children + (t2,))))
    i = path[0]
    new_child = graft_at(children[i], path[1:], t2)
    return (label, tuple(sorted(children[:i] + (new_child,) + children[i + 1:])))


def relabel_tracked(t, fn):
    """Relabel and report where each vertex path lands in the new canonical form."""
    label, children = t
    rebuilt = []
    submaps = []
    for c in children:
        nc, sm = relabel_tracked(c, fn)
        rebuilt.append(nc)
        submaps.append(sm)
    order = sorted(range(len(rebuilt)), key=lambda i: (rebuilt[i], i))
    new_children = tuple(rebuilt[i] for i in order)
    path_map = {(): ()}
    for new_pos, old_pos in enumerate(order):
        for old_sub, new_sub in submaps[old_pos].items():
            path_map[(old_pos,) + old_sub] = (new_pos,) + new_sub
    return (fn(label), new_children), path_map


class LabelTreeAction:
    """Tree action induced by a label map (a genuinely grafting-compatible action)."""

    def __init__(self, fn):
        self.fn = fn

    def on_tree(self, t):
        return relabel_tree(t, self.fn)

    def on_site(self, t, path):
        _, pmap = relabel_tracked(t, self.fn)
        return pmap[path]


def graft_equivariance_check(action, t1, path, t2) -> bool:
    """Whether acting then grafting equals grafting then acting.

    `action` provides on_tree and on_site; group elements and label maps are
    wrapped via LabelTreeAction.  Grafting attaches the root of t2 under the
    vertex of t1 at `path`.
    """
    if hasattr(action, "on_label"):
        action = LabelTreeAction(action.on_label)
    elif callable(action) and not hasattr(action, "on_tree"):
        action = LabelTreeAction(action)
    left = action.on_tree(graft_at(t1, path, t2))
    right = graft_at(action.on_tree(t1), action.on_site(t1, path), action.on_tree(t2))
    return left == right


# --- the forest partial order -------------------------------------------------

class TooLarge(ValueError):
    pass


def _sub_multisets(f):
    seen = set()
    n = len(f)
    for mask in range(1 << n):
        sub = tuple(sorted(f[i] for i in range(n) if mask & (1 << i)))
        if sub not in seen:
            seen.add(sub)
            yield sub


def forest_leq(f, g, max_nodes: int = 8) -> bool:
    """Whether forest g is reachable from a sub-multiset of f by graftings.

    One grafting step attaches the root of one component under a leaf of
    another.  Search is breadth-first over canonical forests; inputs above
    `max_nodes` total vertices are rejected.
    """
    f = tuple(sorted(f))
    g = tuple(sorted(g))
    if forest_nodes(f) > max_nodes or forest_nodes(g) > max_nodes:
        raise TooLarge(f"forest order exceeds the search budget ({max_nodes})")
    target_nodes = forest_nodes(g)
    target_labels = sorted(x for t in g for x in tree_labels(t))
    for start in _sub_multisets(f):
        if forest_nodes(start) != target_nodes:
            continue
        if sorted(x for t in start for x in tree_labels(t)) != target_labels:
            continue
        if _reachable_by_grafts(start, g):
            return True
    return False


def _reachable_by_grafts(start, target) -> bool:
    seen = {start}
    frontier = [start]
    while frontier:
        cur = frontier.pop()
        if cur == target:
            return True
        if len(cur) < 2:
            continue
        for i in range(len(cur)):
            for j in range(len(cur)):
                if i == j:
                    continue
                rest = tuple(cur[k] for k in range(len(cur)) if k not in (i, j))
                for lp in leaf_paths(cur[i]):
                    nxt = tuple(sorted(rest + (graft_at(cur[i], lp, cur[j]),)))
                    if nxt not in seen:
                        seen.add(nxt)
                        frontier.append(nxt)
    return target in seen


# --- enumeration of labelled rooted trees -------------------------------------

def trees_with_n_nodes(labels, n: int) -> list:
    """All canonical labelled rooted trees with exactly n vertices."""
    labels = tuple(labels)
    return _trees_cached(labels, n)


def enumerate_trees(labels, max_nodes: int) -> list:
    out = []
    for n in range(1, max_nodes + 1):
        out.extend(trees_with_n_nodes(labels, n))
    return out


_trees_cache: dict = {}
_forest_lists_cache: dict = {}


def _trees_cached(labels, n):
    key = (labels, n)
    if key in _trees_cache:
        return _trees_cache[key]
    if n < 1:
        out = []
    else:
        out = [(lab, f) for lab in labels for f in _forest_lists(labels, n - 1)]
    _trees_cache[key] = out
    return out


def _forest_lists(labels, total):
    """All canonical forests (sorted tuples of trees) with `total` vertices."""
    key = (labels, total)
    if key in _forest_lists_cache:
        return _forest_lists_cache[key]
    if total == 0:
        out = [()]
    else:
        out = []
        # choose the minimal tree of the forest first, never exceeding the rest
        def build(remaining, min_tree):
            if remaining == 0:
                yield ()
                return
            for size in range(1, remaining + 1):
                for t in _trees_cached(labels, size):
                    if min_tree is not None and t < min_tree:
                        continue
                    for rest in build(remaining - size, t):
                        yield (t,) + rest

        out = [tuple(f) for f in build(total, None)]
        out = [f for f in out]
    _forest_lists_cache[key] = out
    return out


# --- serialization -------------------------------------------------------------

def polynomial_to_json(x: ForestPolynomial) -> list:
    out = []
    for f in sorted(x.terms):
        c = x.terms[f]
        frac = c if isinstance(c, Fraction) else Fraction(c)
        out.append({"forest": [format_tree(t) for t in f],
                    "coeff": f"{frac.numerator}/{frac.denominator}"})
    return out


def polynomial_from_json(obj) -> ForestPolynomial:
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    terms: dict = {}
    for item in obj:
        f = tuple(sorted(parse_tree(s) for s in item["forest"]))
        c = Fraction(item["coeff"])
        terms[f] = terms.get(f, 0) + (int(c) if c.denominator == 1 else c)
    return ForestPolynomial(terms)
