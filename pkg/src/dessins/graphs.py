"""Combinatorial graphs given by flags, vertices, a boundary map and an involution.

A graph is a pair of finite sets (flags, vertices) with a total boundary map
flags -> vertices and an involution flags -> flags.  Two-element orbits of the
involution are edges, fixed flags are tails (leaves).  All values are immutable
after validation and every operation here is a pure function.

Identifiers are opaque strings; canonical ordering is lexicographic, so all
outputs are deterministic across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations


class GraphError(ValueError):
    """Malformed graph data."""


class InvolutionNotInvolutive(GraphError):
    pass


class BoundaryNotTotal(GraphError):
    pass


class DanglingFlagReference(GraphError):
    pass


@dataclass(frozen=True)
class CombinatorialGraph:
    """Validated graph with cached derived structure (edges and tails)."""

    flags: tuple[str, ...]
    vertices: tuple[str, ...]
    boundary: dict[str, str]
    involution: dict[str, str]
    edges: frozenset[frozenset[str]] = field(compare=False)
    tails: tuple[str, ...] = field(compare=False)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_tails(self) -> int:
        return len(self.tails)

    def flags_at(self, v: str) -> tuple[str, ...]:
        return tuple(f for f in self.flags if self.boundary[f] == v)

    def multiplicity(self, v: str) -> int:
        return sum(1 for f in self.flags if self.boundary[f] == v)

    def edge_endpoints(self, edge) -> tuple[str, ...]:
        return tuple(sorted(self.boundary[f] for f in edge))

    def __repr__(self):
        return (f"CombinatorialGraph({len(self.vertices)} vertices, "
                f"{self.n_edges} edges, {self.n_tails} tails)")


def validate(flags, vertices, boundary, involution) -> CombinatorialGraph:
    """Check raw graph data and return a graph with derived sets cached.

    Raises InvolutionNotInvolutive, BoundaryNotTotal or DanglingFlagReference
    on malformed input.
    """
    flag_list = tuple(sorted(str(f) for f in flags))
    vertex_list = tuple(sorted(str(v) for v in vertices))
    flag_set, vertex_set = set(flag_list), set(vertex_list)
    if len(flag_set) != len(flag_list):
        raise GraphError("duplicate flag identifiers")
    if len(vertex_set) != len(vertex_list):
        raise GraphError("duplicate vertex identifiers")

    bdry = {str(k): str(v) for k, v in dict(boundary).items()}
    invl = {str(k): str(v) for k, v in dict(involution).items()}

    for f in bdry:
        if f not in flag_set:
            raise DanglingFlagReference(f"boundary defined on unknown flag {f!r}")
    for f, v in bdry.items():
        if v not in vertex_set:
            raise DanglingFlagReference(f"boundary of {f!r} is unknown vertex {v!r}")
    for f, g in invl.items():
        if f not in flag_set:
            raise DanglingFlagReference(f"involution defined on unknown flag {f!r}")
        if g not in flag_set:
            raise DanglingFlagReference(f"involution of {f!r} is unknown flag {g!r}")

    missing = flag_set - set(bdry)
    if missing:
        raise BoundaryNotTotal(f"flags without boundary vertex: {sorted(missing)}")
    missing = flag_set - set(invl)
    if missing:
        raise BoundaryNotTotal(f"involution not total, missing: {sorted(missing)}")
    for f in flag_list:
        if invl[invl[f]] != f:
            raise InvolutionNotInvolutive(f"involution squared moves {f!r}")

    edges = frozenset(frozenset((f, invl[f])) for f in flag_list if invl[f] != f)
    tails = tuple(f for f in flag_list if invl[f] == f)
    return CombinatorialGraph(flag_list, vertex_list, bdry, invl, edges, tails)


def graph_from_json(text_or_obj) -> CombinatorialGraph:
    """Build a graph from the JSON schema {flags, vertices, boundary, involution}."""
    obj = json.loads(text_or_obj) if isinstance(text_or_obj, (str, bytes)) else text_or_obj
    return validate(obj["flags"], obj["vertices"], obj["boundary"], obj["involution"])


def graph_to_json(g: CombinatorialGraph) -> dict:
    return {
        "flags": list(g.flags),
        "vertices": list(g.vertices),
        "boundary": dict(sorted(g.boundary.items())),
        "involution": dict(sorted(g.involution.items())),
    }


def corolla(vertex: str, tail_names) -> CombinatorialGraph:
    """One vertex, no edges, the given flags all fixed by the involution."""
    tails = [str(t) for t in tail_names]
    return validate(tails, [vertex], {t: vertex for t in tails}, {t: t for t in tails})


def empty_graph() -> CombinatorialGraph:
    return validate([], [], {}, {})


@dataclass(frozen=True)
class StructureReport:
    edges: int
    tails: int
    components: tuple[tuple[str, ...], ...]
    is_tree: bool
    is_stable: bool
    is_corolla: bool
    vertex_multiplicities: dict[str, int]

    @property
    def n_components(self) -> int:
        return len(self.components)


def _union_find_components(g: CombinatorialGraph):
    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    cyclic = False
    for edge in sorted(g.edges, key=sorted):
        u, w = (g.boundary[f] for f in sorted(edge))
        if u == w:
            cyclic = True          # self-loop
            continue
        ru, rw = find(u), find(w)
        if ru == rw:
            cyclic = True          # second path between two vertices
        else:
            parent[max(ru, rw)] = min(ru, rw)

    comps: dict[str, list[str]] = {}
    for v in g.vertices:
        comps.setdefault(find(v), []).append(v)
    components = tuple(tuple(sorted(c)) for c in sorted(comps.values()))
    return components, cyclic


def structure_report(g: CombinatorialGraph) -> StructureReport:
    """Connectivity, treeness, stability and multiplicities of a validated graph.

    A graph is a tree when no two vertices are joined by more than one edge and
    no path of length >= 2 revisits a vertex; stability asks every vertex to
    bound at least three flags and every component to be a tree.
    """
    components, cyclic = _union_find_components(g)
    mult = {v: g.multiplicity(v) for v in g.vertices}
    is_tree = not cyclic
    is_stable = is_tree and all(m >= 3 for m in mult.values())
    is_corolla = len(g.vertices) == 1 and not g.edges
    return StructureReport(
        edges=g.n_edges,
        tails=g.n_tails,
        components=components,
        is_tree=is_tree,
        is_stable=is_stable,
        is_corolla=is_corolla,
        vertex_multiplicities=mult,
    )


def _prefixed(g: CombinatorialGraph, prefix: str):
    fmap = {f: prefix + f for f in g.flags}
    vmap = {v: prefix + v for v in g.vertices}
    gg = validate(
        fmap.values(),
        vmap.values(),
        {fmap[f]: vmap[g.boundary[f]] for f in g.flags},
        {fmap[f]: fmap[g.involution[f]] for f in g.flags},
    )
    return gg, fmap, vmap


def disjoint_union_with_maps(g1: CombinatorialGraph, g2: CombinatorialGraph):
    """Disjoint union with the flag renamings used for namespacing."""
    a, fmap1, _ = _prefixed(g1, "0.")
    b, fmap2, _ = _prefixed(g2, "1.")
    g = validate(
        a.flags + b.flags,
        a.vertices + b.vertices,
        {**a.boundary, **b.boundary},
        {**a.involution, **b.involution},
    )
    return g, fmap1, fmap2


def disjoint_union(g1: CombinatorialGraph, g2: CombinatorialGraph) -> CombinatorialGraph:
    """Disjoint union; identifiers are namespaced so inputs may share names."""
    return disjoint_union_with_maps(g1, g2)[0]


@dataclass(frozen=True)
class GraphIso:
    """Witness of an isomorphism g1 -> g2.

    vertex_map sends vertices of g1 to vertices of g2 (covariant) and flag_map
    sends flags of g2 back to flags of g1 (contravariant), compatibly with
    boundaries and involutions.
    """

    vertex_map: dict[str, str]
    flag_map: dict[str, str]

    def flag_forward(self) -> dict[str, str]:
        return {v: k for k, v in self.flag_map.items()}

    def inverse(self) -> "GraphIso":
        return GraphIso({v: k for k, v in self.vertex_map.items()},
                        {v: k for k, v in self.flag_map.items()})

    def compose(self, other: "GraphIso") -> "GraphIso":
        """Witness for g1 -> g3 given self: g1 -> g2 and other: g2 -> g3."""
        return GraphIso({v: other.vertex_map[w] for v, w in self.vertex_map.items()},
                        {f: self.flag_map[g] for f, g in other.flag_map.items()})


def is_valid_iso(g1: CombinatorialGraph, g2: CombinatorialGraph, iso: GraphIso,
                 labels1=None, labels2=None) -> bool:
    vm, fm = iso.vertex_map, iso.flag_map
    if sorted(vm) != list(g1.vertices) or sorted(set(vm.values())) != list(g2.vertices):
        return False
    if sorted(fm) != list(g2.flags) or sorted(set(fm.values())) != list(g1.flags):
        return False
    fwd = iso.flag_forward()
    for f in g1.flags:
        if g2.boundary[fwd[f]] != vm[g1.boundary[f]]:
            return False
        if fwd[g1.involution[f]] != g2.involution[fwd[f]]:
            return False
    if labels1 is not None:
        for f in g1.tails:
            if labels1[f] != labels2[fwd[f]]:
                return False
    return True


def _vertex_signature(g: CombinatorialGraph, v: str, labels):
    tails = [f for f in g.flags_at(v) if g.involution[f] == f]
    tail_sig = tuple(sorted(str(labels[f]) for f in tails)) if labels is not None \
        else len(tails)
    return (g.multiplicity(v), tail_sig)


def find_isomorphism(g1: CombinatorialGraph, g2: CombinatorialGraph,
                     labels1=None, labels2=None) -> GraphIso | None:
    """Search for an isomorphism witness, or return None.

    When tail label maps are supplied, the witness must carry each tail of g1
    to the tail of g2 with the same label.  The search assigns vertices in
    lexicographic order trying lexicographically least images first, so the
    returned witness is deterministic (and the identity when g1 is g2).
    """
    if (len(g1.flags) != len(g2.flags) or len(g1.vertices) != len(g2.vertices)
            or g1.n_edges != g2.n_edges):
        return None
    sig1 = {v: _vertex_signature(g1, v, labels1) for v in g1.vertices}
    sig2 = {v: _vertex_signature(g2, v, labels2) for v in g2.vertices}
    if sorted(sig1.values()) != sorted(sig2.values()):
        return None

    verts1 = list(g1.vertices)
    vmap: dict[str, str] = {}
    used: set[str] = set()

    def vertex_ok(v, w):
        if sig1[v] != sig2[w]:
            return False
        # edge counts towards already-assigned vertices must agree
        for u, x in vmap.items():
            n1 = sum(1 for e in g1.edges if g1.edge_endpoints(e) == tuple(sorted((v, u))))
            n2 = sum(1 for e in g2.edges if g2.edge_endpoints(e) == tuple(sorted((w, x))))
            if n1 != n2:
                return False
        loops1 = sum(1 for e in g1.edges if g1.edge_endpoints(e) == (v, v))
        loops2 = sum(1 for e in g2.edges if g2.edge_endpoints(e) == (w, w))
        return loops1 == loops2

    def assign(i):
        if i == len(verts1):
            return _match_flags(g1, g2, vmap, labels1, labels2)
        v = verts1[i]
        for w in g2.vertices:
            if w in used or not vertex_ok(v, w):
                continue
            vmap[v] = w
            used.add(w)
            witness = assign(i + 1)
            if witness is not None:
                return witness
            del vmap[v]
            used.remove(w)
        return None

    return assign(0)


def _match_flags(g1, g2, vmap, labels1, labels2):
    """Extend a vertex bijection to a flag bijection, or fail."""
    fwd: dict[str, str] = {}
    # tails vertex by vertex, paired in sorted (or label) order
    for v in g1.vertices:
        t1 = [f for f in g1.flags_at(v) if g1.involution[f] == f]
        t2 = [f for f in g2.flags_at(vmap[v]) if g2.involution[f] == f]
        if len(t1) != len(t2):
            return None
        if labels1 is not None:
            by_label = {str(labels2[f]): f for f in t2}
            try:
                pairing = [(f, by_label[str(labels1[f])]) for f in t1]
            except KeyError:
                return None
        else:
            pairing = list(zip(sorted(t1), sorted(t2)))
        fwd.update(pairing)

    # edges: group by endpoint pair, rely on backtracking only for parallels
    def edge_key(g, e):
        return g.edge_endpoints(e)

    buckets1: dict[tuple, list] = {}
    for e in g1.edges:
        buckets1.setdefault(edge_key(g1, e), []).append(sorted(e))
    buckets2: dict[tuple, list] = {}
    for e in g2.edges:
        buckets2.setdefault(edge_key(g2, e), []).append(sorted(e))

    for key1, group1 in sorted(buckets1.items()):
        u, w = key1
        key2 = tuple(sorted((vmap[u], vmap[w])))
        group2 = buckets2.get(key2, [])
        if len(group1) != len(group2):
            return None
        group1 = sorted(group1)
        group2 = sorted(group2)
        matched = _pair_edge_group(g1, g2, vmap, group1, group2)
        if matched is None:
            return None
        fwd.update(matched)

    if len(fwd) != len(g1.flags):
        return None
    iso = GraphIso(dict(vmap), {v: k for k, v in fwd.items()})
    if not is_valid_iso(g1, g2, iso, labels1, labels2):
        return None
    return iso


def _pair_edge_group(g1, g2, vmap, group1, group2):
    """Match parallel edges between one endpoint pair (tiny brute force)."""
    if not group1:
        return {}
    for perm in permutations(range(len(group2))):
        fwd = {}
        ok = True
        for (h1a, h1b), j in zip(group1, perm):
            h2a, h2b = group2[j]
            # orient halves so boundaries correspond
            if vmap[g1.boundary[h1a]] == g2.boundary[h2a] and \
               vmap[g1.boundary[h1b]] == g2.boundary[h2b]:
                fwd[h1a], fwd[h1b] = h2a, h2b
            elif vmap[g1.boundary[h1a]] == g2.boundary[h2b] and \
                 vmap[g1.boundary[h1b]] == g2.boundary[h2a]:
                fwd[h1a], fwd[h1b] = h2b, h2a
            else:
                ok = False
                break
        if ok:
            return fwd
    return None


def to_dot(g: CombinatorialGraph, tail_labels=None, name: str = "g") -> str:
    """DOT text; tails are drawn as half-edges to anonymous point nodes."""
    lines = [f"graph {name} {{"]
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for e in sorted(g.edges, key=sorted):
        u, w = (g.boundary[f] for f in sorted(e))
        lines.append(f'  "{u}" -- "{w}";')
    for t in g.tails:
        stub = f"__tail_{t}"
        lines.append(f'  "{stub}" [shape=point, label=""];')
        label = "" if tail_labels is None else f' [label="{tail_labels[t]}"]'
        lines.append(f'  "{g.boundary[t]}" -- "{stub}"{label};')
    lines.append("}")
    return "\n".join(lines) + "\n"
