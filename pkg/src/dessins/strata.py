"""Boundary strata of genus-zero moduli spaces as stable S-labelled trees.

A stratum is a connected stable tree whose tails are labelled bijectively by a
finite set S; its codimension is the edge count and its dimension is
|S| - 3 - codim.  Strata are identified up to label-respecting isomorphism via
a canonical encoding rooted at the tree centroid.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from dessins import graphs, operads
from dessins.graphs import CombinatorialGraph, structure_report, validate


class StrataError(ValueError):
    pass


class TooSmall(StrataError):
    pass


class TargetTooSmall(StrataError):
    pass


class NoSuchEdge(StrataError):
    pass


class LabelSetMismatch(StrataError):
    pass


class LabelCollision(StrataError):
    pass


class NotCaterpillar(StrataError):
    pass


class UnstableComponent(StrataError):
    pass


class NotATreeOfComponents(StrataError):
    pass


def _labelkey(x):
    return (type(x).__name__, x)


@dataclass(frozen=True, eq=False)
class StableSTree:
    """Connected stable tree with tails labelled bijectively by a set S."""

    graph: CombinatorialGraph
    tail_labels: dict[str, object]

    def __post_init__(self):
        g = self.graph
        rep = structure_report(g)
        if rep.n_components != 1:
            raise StrataError("tree must be connected")
        if not rep.is_stable:
            raise StrataError("tree must be stable (every vertex bounds >= 3 flags)")
        if sorted(self.tail_labels) != list(g.tails):
            raise StrataError("tail_labels must be defined exactly on the tails")
        if len(set(self.tail_labels.values())) != len(self.tail_labels):
            raise StrataError("tail labels must be pairwise distinct")

    @property
    def labels(self) -> frozenset:
        return frozenset(self.tail_labels.values())

    @property
    def n_edges(self) -> int:
        return self.graph.n_edges

    def canonical_key(self):
        key = getattr(self, "_key", None)
        if key is None:
            key = _canonical_key(self)
            object.__setattr__(self, "_key", key)
        return key

    def __eq__(self, other):
        return isinstance(other, StableSTree) and self.canonical_key() == other.canonical_key()

    def __hash__(self):
        return hash(self.canonical_key())


@dataclass(frozen=True, eq=False)
class Stratum:
    tree: StableSTree
    codim: int = field(init=False)
    dim: int = field(init=False)

    def __post_init__(self):
        codim = self.tree.n_edges
        dim = len(self.tree.labels) - 3 - codim
        if dim < 0:
            raise StrataError(f"negative dimension: |S|={len(self.tree.labels)}, codim={codim}")
        object.__setattr__(self, "codim", codim)
        object.__setattr__(self, "dim", dim)

    def canonical_key(self):
        return self.tree.canonical_key()

    def __eq__(self, other):
        return isinstance(other, Stratum) and self.tree == other.tree

    def __hash__(self):
        return hash(self.tree)


# --- canonical form ---------------------------------------------------------

def _adjacency(t: StableSTree):
    g = t.graph
    nbrs: dict[str, list[tuple[str, frozenset]]] = {v: [] for v in g.vertices}
    for e in g.edges:
        a, b = sorted(e)
        u, w = g.boundary[a], g.boundary[b]
        nbrs[u].append((w, e))
        nbrs[w].append((u, e))
    tails_at: dict[str, list] = {v: [] for v in g.vertices}
    for f in g.tails:
        tails_at[g.boundary[f]].append(t.tail_labels[f])
    return nbrs, tails_at


def _centroids(t: StableSTree):
    g = t.graph
    verts = list(g.vertices)
    if len(verts) == 1:
        return verts
    nbrs, _ = _adjacency(t)
    n = len(verts)

    def subtree_size(v, parent):
        return 1 + sum(subtree_size(w, v) for w, _ in nbrs[v] if w != parent)

    best, out = None, []
    for v in verts:
        heaviest = max(subtree_size(w, v) for w, _ in nbrs[v])
        if best is None or heaviest < best:
            best, out = heaviest, [v]
        elif heaviest == best:
            out.append(v)
    return out


def _encode_from(t: StableSTree, root, nbrs, tails_at):
    def enc(v, parent):
        children = sorted(enc(w, v) for w, _ in nbrs[v] if w != parent)
        labels = tuple(sorted(_labelkey(x) for x in tails_at[v]))
        return (labels, tuple(children))

    return enc(root, None)


def _canonical_key(t: StableSTree):
    nbrs, tails_at = _adjacency(t)
    return min(_encode_from(t, r, nbrs, tails_at) for r in _centroids(t))


# --- constructors -----------------------------------------------------------

def s_tree(graph: CombinatorialGraph, tail_labels) -> StableSTree:
    return StableSTree(graph, dict(tail_labels))


def s_corolla(labels) -> StableSTree:
    labels = sorted(labels, key=_labelkey)
    if len(labels) < 3:
        raise TooSmall("a stable corolla needs at least 3 labels")
    names = {lab: f"t{i}" for i, lab in enumerate(labels)}
    g = graphs.corolla("v0", list(names.values()))
    return StableSTree(g, {names[lab]: lab for lab in labels})


def stratum(tree: StableSTree) -> Stratum:
    return Stratum(tree)


def two_part_tree(part1, part2) -> StableSTree:
    """One-edge tree for a 2-partition of S, both parts of size >= 2."""
    part1 = sorted(part1, key=_labelkey)
    part2 = sorted(part2, key=_labelkey)
    if len(part1) < 2 or len(part2) < 2:
        raise TooSmall("both parts of a divisorial partition need >= 2 labels")
    if set(part1) & set(part2):
        raise LabelCollision("partition parts overlap")
    flags, boundary, involution, tail_labels = [], {}, {}, {}
    for i, lab in enumerate(part1):
        f = f"a{i}"
        flags.append(f)
        boundary[f] = "v0"
        involution[f] = f
        tail_labels[f] = lab
    for i, lab in enumerate(part2):
        f = f"b{i}"
        flags.append(f)
        boundary[f] = "v1"
        involution[f] = f
        tail_labels[f] = lab
    flags += ["h0", "h1"]
    boundary.update({"h0": "v0", "h1": "v1"})
    involution.update({"h0": "h1", "h1": "h0"})
    g = validate(flags, ["v0", "v1"], boundary, involution)
    return StableSTree(g, tail_labels)


@dataclass(frozen=True)
class CurveCombinatorics:
    """Components, double points and marked points of a stable genus-zero curve."""

    components: tuple
    double_points: tuple        # pairs (component, component)
    marked: dict                # label -> component


def curve_to_dessin(curve: CurveCombinatorics) -> StableSTree:
    """Dual tree: vertices are components, edges are double points, tails are
    labelled marked points.  Raises if a component carries fewer than three
    special points or the components fail to form a tree.
    """
    comps = [str(c) for c in curve.components]
    flags, boundary, involution, tail_labels = [], {}, {}, {}
    for i, (ca, cb) in enumerate(curve.double_points):
        ca, cb = str(ca), str(cb)
        if ca not in comps or cb not in comps:
            raise StrataError(f"double point on unknown component {(ca, cb)!r}")
        ha, hb = f"dp{i}.a", f"dp{i}.b"
        flags += [ha, hb]
        boundary[ha], boundary[hb] = ca, cb
        involution[ha], involution[hb] = hb, ha
    for j, (lab, comp) in enumerate(sorted(curve.marked.items(), key=lambda kv: _labelkey(kv[0]))):
        comp = str(comp)
        if comp not in comps:
            raise StrataError(f"marked point {lab!r} on unknown component {comp!r}")
        f = f"m{j}"
        flags.append(f)
        boundary[f] = comp
        involution[f] = f
        tail_labels[f] = lab
    g = validate(flags, comps, boundary, involution)
    rep = structure_report(g)
    unstable = [v for v, m in rep.vertex_multiplicities.items() if m < 3]
    if unstable:
        raise UnstableComponent(f"components with < 3 special points: {sorted(unstable)}")
    if rep.n_components != 1 or not rep.is_tree:
        raise NotATreeOfComponents("component graph must be a connected tree")
    return StableSTree(g, tail_labels)


# --- enumeration ------------------------------------------------------------

def _fresh_names(g: CombinatorialGraph, count, kind):
    used = set(g.flags) | set(g.vertices)
    out, i = [], 0
    while len(out) < count:
        name = f"{kind}{i}"
        if name not in used:
            out.append(name)
            used.add(name)
        i += 1
    return out


def _insert_label(t: StableSTree, label):
    """All stable trees obtained by adding one labelled tail to t."""
    g = t.graph
    out = []
    # (1) new tail at an existing vertex
    for v in g.vertices:
        (f,) = _fresh_names(g, 1, "t")
        gg = validate(g.flags + (f,), g.vertices,
                      {**g.boundary, f: v}, {**g.involution, f: f})
        out.append(StableSTree(gg, {**t.tail_labels, f: label}))
    # (2) split an edge with a new trivalent vertex carrying the tail
    for e in sorted(g.edges, key=sorted):
        a, b = sorted(e)
        (v,) = _fresh_names(g, 1, "v")
        f, ha, hb = _fresh_names(g, 3, "f")
        boundary = dict(g.boundary)
        involution = dict(g.involution)
        boundary.update({f: v, ha: v, hb: v})
        involution.update({a: ha, ha: a, b: hb, hb: b, f: f})
        gg = validate(g.flags + (f, ha, hb), g.vertices + (v,), boundary, involution)
        out.append(StableSTree(gg, {**t.tail_labels, f: label}))
    # (3) split a tail: the old tail moves to a new trivalent vertex
    for tf in g.tails:
        (v,) = _fresh_names(g, 1, "v")
        f, ha, hb = _fresh_names(g, 3, "f")
        boundary = dict(g.boundary)
        involution = dict(g.involution)
        old_vertex = g.boundary[tf]
        boundary[tf] = v
        boundary.update({f: v, hb: v, ha: old_vertex})
        involution.update({ha: hb, hb: ha, f: f})
        gg = validate(g.flags + (f, ha, hb), g.vertices + (v,), boundary, involution)
        out.append(StableSTree(gg, {**t.tail_labels, f: label}))
    return out


def enumerate_strata(labels) -> dict[int, list[Stratum]]:
    """One representative per isomorphism class of stable S-tree, by codim.

    Built by inserting labels one at a time into every vertex, edge and tail
    of the smaller trees, with canonical-form deduplication at each step.
    """
    labels = sorted(set(labels), key=_labelkey)
    if len(labels) < 3:
        raise TooSmall("need at least 3 labels")
    current = {_canonical_key(t): t for t in [s_corolla(labels[:3])]}
    for lab in labels[3:]:
        nxt: dict = {}
        for t in current.values():
            for t2 in _insert_label(t, lab):
                nxt.setdefault(t2.canonical_key(), t2)
        current = nxt
    grouped: dict[int, list[Stratum]] = {}
    for key in sorted(current):
        s = Stratum(current[key])
        grouped.setdefault(s.codim, []).append(s)
    return dict(sorted(grouped.items()))


def divisorial_strata(labels) -> list[Stratum]:
    """Codimension-one strata, one per unordered stable 2-partition of S."""
    labels = sorted(set(labels), key=_labelkey)
    if len(labels) < 4:
        raise TooSmall("divisorial strata need at least 4 labels")
    out = []
    seen = set()
    n = len(labels)
    for r in range(2, n - 1):
        for part1 in itertools.combinations(labels, r):
            part2 = tuple(l for l in labels if l not in part1)
            key = frozenset((frozenset(part1), frozenset(part2)))
            if key in seen:
                continue
            seen.add(key)
            out.append(Stratum(two_part_tree(part1, part2)))
    return sorted(out, key=lambda s: s.canonical_key())


def trivalent_strata(labels) -> list[Stratum]:
    """Dimension-zero strata, enumerated by inserting each new label into an
    edge or tail of the smaller trivalent trees (never at a vertex)."""
    labels = sorted(set(labels), key=_labelkey)
    if len(labels) < 4:
        raise TooSmall("need at least 4 labels")
    current = {_canonical_key(t): t for t in [s_corolla(labels[:3])]}
    for lab in labels[3:]:
        nxt: dict = {}
        for t in current.values():
            for t2 in _insert_label(t, lab):
                if all(t2.graph.multiplicity(v) == 3 for v in t2.graph.vertices):
                    nxt.setdefault(t2.canonical_key(), t2)
        current = nxt
    return [Stratum(current[k]) for k in sorted(current)]


def maximal_codim_strata(labels) -> list[tuple[Stratum, bool]]:
    """All dimension-zero strata with a caterpillar flag (linear chains)."""
    return [(s, is_caterpillar(s.tree)) for s in trivalent_strata(labels)]


def is_caterpillar(t: StableSTree) -> bool:
    """True when the vertices form a linear chain (every vertex bounds at most
    two edges); single-vertex trees count as caterpillars."""
    g = t.graph
    edge_degree = {v: 0 for v in g.vertices}
    for e in g.edges:
        for f in e:
            edge_degree[g.boundary[f]] += 1
    return all(d <= 2 for d in edge_degree.values())


# --- poset operations -------------------------------------------------------

def contract_edge(t: StableSTree, edge) -> StableSTree:
    """Blow down one edge: its endpoints merge into one vertex."""
    e = frozenset(edge)
    if e not in t.graph.edges:
        raise NoSuchEdge(f"{sorted(edge)} is not an edge of the tree")
    g = t.graph
    a, b = sorted(e)
    u, w = g.boundary[a], g.boundary[b]
    keep = min(u, w)
    flags = tuple(f for f in g.flags if f not in e)
    vertices = tuple(v for v in g.vertices if v != max(u, w)) if u != w else g.vertices
    boundary = {f: keep if g.boundary[f] in (u, w) else g.boundary[f] for f in flags}
    involution = {f: g.involution[f] for f in flags}
    gg = validate(flags, vertices, boundary, involution)
    return StableSTree(gg, dict(t.tail_labels))


def _contract_edges(t: StableSTree, edges):
    """Contract a set of edges; order independent, smallest-first for determinism."""
    remaining = [tuple(sorted(e)) for e in edges]
    cur = t
    while remaining:
        remaining.sort()
        e = remaining.pop(0)
        cur = contract_edge(cur, frozenset(e))
    return cur


@dataclass(frozen=True)
class SubstratumWitness:
    holds: bool
    edges: tuple | None

    def __bool__(self):
        return self.holds


def is_substratum(inner: Stratum, outer: Stratum) -> SubstratumWitness:
    """Whether contracting some edge subset of `inner` gives `outer`.

    The witness is the lexicographically least such subset (edges as sorted
    flag pairs); contraction order does not matter.
    """
    if inner.tree.labels != outer.tree.labels:
        raise LabelSetMismatch("strata live over different label sets")
    d = inner.codim - outer.codim
    if d < 0:
        return SubstratumWitness(False, None)
    target = outer.canonical_key()
    all_edges = sorted(tuple(sorted(e)) for e in inner.tree.graph.edges)
    for subset in itertools.combinations(all_edges, d):
        if _contract_edges(inner.tree, subset).canonical_key() == target:
            return SubstratumWitness(True, subset)
    return SubstratumWitness(False, None)


def open_stratum_boundary(s: Stratum) -> list[Stratum]:
    """Codimension-one substrata of the closed stratum: insert one edge at a
    vertex, distributing its flags along a 2-partition with parts of size >= 2."""
    g = s.tree.graph
    out: dict = {}
    for v in g.vertices:
        fl = sorted(g.flags_at(v))
        for r in range(2, len(fl) - 1):
            for part1 in itertools.combinations(fl, r):
                part2 = [f for f in fl if f not in part1]
                if part1[0] != fl[0]:
                    continue  # unordered partitions: keep the side with the least flag
                (nv,) = _fresh_names(g, 1, "v")
                ha, hb = _fresh_names(g, 2, "h")
                boundary = dict(g.boundary)
                involution = dict(g.involution)
                for f in part2:
                    boundary[f] = nv
                boundary[ha], boundary[hb] = v, nv
                involution[ha], involution[hb] = hb, ha
                gg = validate(g.flags + (ha, hb), g.vertices + (nv,), boundary, involution)
                t2 = StableSTree(gg, dict(s.tree.tail_labels))
                out.setdefault(t2.canonical_key(), Stratum(t2))
    return [out[k] for k in sorted(out)]


def compose_strata(s1: Stratum, label1, s2: Stratum, label2) -> Stratum:
    """Graft two strata at the tails carrying the given labels.

    The composite is labelled by (S1 - {label1}) + (S2 - {label2}); its
    codimension is codim1 + codim2 + 1.
    """
    rest1 = s1.tree.labels - {label1}
    rest2 = s2.tree.labels - {label2}
    if rest1 & rest2:
        raise LabelCollision(f"shared labels {sorted(rest1 & rest2, key=_labelkey)}")
    (t1,) = [f for f, lab in s1.tree.tail_labels.items() if lab == label1] or [None]
    (t2,) = [f for f, lab in s2.tree.tail_labels.items() if lab == label2] or [None]
    if t1 is None or t2 is None:
        raise StrataError("label not present on the stratum")
    g, fmap1, fmap2 = operads.graft_with_maps(s1.tree.graph, t1, s2.tree.graph, t2)
    tail_labels = {fmap1[f]: lab for f, lab in s1.tree.tail_labels.items() if f != t1}
    tail_labels.update({fmap2[f]: lab for f, lab in s2.tree.tail_labels.items() if f != t2})
    return Stratum(StableSTree(g, tail_labels))


# --- admissible projections -------------------------------------------------

def admissible_projection(s: Stratum, target_labels) -> Stratum:
    """Forget the tails outside `target_labels`, then stabilize.

    Stabilization repeatedly contracts an edge at a vertex bounding fewer than
    three flags (smallest edge first, order independent).
    """
    target = set(target_labels)
    if len(target) < 3:
        raise TargetTooSmall("target label set needs at least 3 labels")
    if not target <= s.tree.labels:
        raise LabelSetMismatch("target labels must be a subset of the stratum labels")
    g = s.tree.graph
    drop = {f for f, lab in s.tree.tail_labels.items() if lab not in target}
    flags = tuple(f for f in g.flags if f not in drop)
    boundary = {f: g.boundary[f] for f in flags}
    involution = {f: g.involution[f] for f in flags}
    vertices = g.vertices
    tail_labels = {f: lab for f, lab in s.tree.tail_labels.items() if f not in drop}

    while True:
        mult = {v: 0 for v in vertices}
        for f in flags:
            mult[boundary[f]] += 1
        unstable = sorted(v for v in vertices if mult[v] < 3)
        if not unstable:
            break
        incident_edges = sorted(
            tuple(sorted((f, involution[f])))
            for f in flags
            if involution[f] != f and (boundary[f] in unstable or boundary[involution[f]] in unstable)
        )
        if not incident_edges:
            raise StrataError("unstable vertex with no incident edge")
        a, b = incident_edges[0]
        u, w = boundary[a], boundary[b]
        keep = min(u, w)
        flags = tuple(f for f in flags if f not in (a, b))
        vertices = tuple(v for v in vertices if v != max(u, w))
        boundary = {f: keep if boundary[f] in (u, w) else boundary[f] for f in flags}
        involution = {f: involution[f] for f in flags}
    gg = validate(flags, vertices, boundary, involution)
    return Stratum(StableSTree(gg, tail_labels))


def project_divisor_check(parts_big, parts_small) -> bool:
    """Whether a divisorial partition of S' projects onto one of S.

    True when each part of the S'-partition meets S in the matching part of
    the S-partition and both induced parts stay stable (size >= 2)."""
    b1, b2 = (set(p) for p in parts_big)
    s1, s2 = (set(p) for p in parts_small)
    small = s1 | s2
    if len(s1) < 2 or len(s2) < 2:
        return False
    direct = (b1 & small == s1) and (b2 & small == s2)
    swapped = (b1 & small == s2) and (b2 & small == s1)
    return direct or swapped


# --- clean dessins ----------------------------------------------------------

@dataclass(frozen=True)
class CleanDessin:
    black: tuple[str, ...]
    white: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]


def clean_dessin(s: Stratum) -> CleanDessin:
    """Re-encode a caterpillar stratum as a black/white vertex graph.

    A vertex is added at the free end of every leaf and at the midpoint of
    every old edge; old vertices and leaf-end vertices are black, midpoints
    are white.
    """
    t = s.tree
    if not is_caterpillar(t):
        raise NotCaterpillar("clean dessins are defined for caterpillar strata")
    g = t.graph
    black = list(g.vertices)
    white = []
    new_edges = []
    for i, e in enumerate(sorted(g.edges, key=sorted)):
        a, b = sorted(e)
        mid = f"w{i}"
        white.append(mid)
        new_edges.append(tuple(sorted((g.boundary[a], mid))))
        new_edges.append(tuple(sorted((g.boundary[b], mid))))
    for f in g.tails:
        end = f"end_{t.tail_labels[f]}"
        black.append(end)
        new_edges.append(tuple(sorted((g.boundary[f], end))))
    return CleanDessin(tuple(sorted(black)), tuple(sorted(white)), tuple(sorted(new_edges)))


def clean_dessin_is_bipartite(d: CleanDessin) -> bool:
    """Two-colorability of the re-encoded graph."""
    nbrs: dict[str, list[str]] = {}
    for a, b in d.edges:
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)
    color: dict[str, int] = {}
    for start in sorted(nbrs):
        if start in color:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            v = queue.pop()
            for w in nbrs[v]:
                if w not in color:
                    color[w] = 1 - color[v]
                    queue.append(w)
                elif color[w] == color[v]:
                    return False
    return True


def clean_dessin_is_connected(d: CleanDessin) -> bool:
    verts = set(d.black) | set(d.white)
    if not verts:
        return True
    nbrs: dict[str, set[str]] = {v: set() for v in verts}
    for a, b in d.edges:
        nbrs[a].add(b)
        nbrs[b].add(a)
    seen, queue = set(), [sorted(verts)[0]]
    while queue:
        v = queue.pop()
        if v in seen:
            continue
        seen.add(v)
        queue.extend(nbrs[v] - seen)
    return seen == verts


# --- serialization ----------------------------------------------------------

def stratum_to_json(s: Stratum) -> dict:
    return {
        "labels": sorted((str(l) for l in s.tree.labels)),
        "tree": graphs.graph_to_json(s.tree.graph),
        "tail_labels": {f: str(lab) for f, lab in sorted(s.tree.tail_labels.items())},
        "codim": s.codim,
    }


def stratum_from_json(obj) -> Stratum:
    g = graphs.graph_from_json(obj["tree"])
    return Stratum(StableSTree(g, dict(obj["tail_labels"])))


def stratum_to_dot(s: Stratum, name="stratum") -> str:
    return graphs.to_dot(s.tree.graph, tail_labels=s.tree.tail_labels, name=name)
