"""Finite directed graphs, homomorphisms and directed-graph insplitting.

Edges carry a range ``r`` and a source ``s``; an edge points from its source
to its range.  Labels are opaque strings.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Optional

from .errors import GraphError, HomomorphismError, PartitionError


def child(label: str, i: int) -> str:
    # suffix naming is injective: the text after the last '^' recovers i
    return f"{label}^{i}"


@dataclass(frozen=True)
class DirectedGraph:
    vertices: frozenset
    r: Mapping[str, str]
    s: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "r", dict(self.r))
        object.__setattr__(self, "s", dict(self.s))
        if set(self.r) != set(self.s):
            raise GraphError("range and source maps must have the same edges")
        for e in self.r:
            for end, v in (("range", self.r[e]), ("source", self.s[e])):
                if v not in self.vertices:
                    raise GraphError(f"{end} {v!r} of edge {e!r} is not a vertex")

    __hash__ = None

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[tuple]) -> "DirectedGraph":
        """Build from ``(id, source, range)`` triples."""
        r, s = {}, {}
        for e, src, rng in edges:
            if e in r:
                raise GraphError(f"duplicate edge id {e!r}")
            r[e], s[e] = rng, src
        return cls(frozenset(vertices), r, s)

    @cached_property
    def edges(self) -> tuple:
        return tuple(sorted(self.r))

    @cached_property
    def sorted_vertices(self) -> tuple:
        return tuple(sorted(self.vertices))

    @cached_property
    def _in(self):
        d = defaultdict(list)
        for e in self.edges:
            d[self.r[e]].append(e)
        return {v: tuple(d.get(v, ())) for v in self.vertices}

    @cached_property
    def _out(self):
        d = defaultdict(list)
        for e in self.edges:
            d[self.s[e]].append(e)
        return {v: tuple(d.get(v, ())) for v in self.vertices}

    def in_edges(self, v: str) -> tuple:
        """r^{-1}(v), sorted."""
        return self._in[v]

    def out_edges(self, v: str) -> tuple:
        """s^{-1}(v), sorted."""
        return self._out[v]

    def is_edge(self, x: str) -> bool:
        return x in self.r

    def relabel(self, vmap: Mapping[str, str], emap: Mapping[str, str]) -> "DirectedGraph":
        return DirectedGraph(
            frozenset(vmap[v] for v in self.vertices),
            {emap[e]: vmap[self.r[e]] for e in self.r},
            {emap[e]: vmap[self.s[e]] for e in self.s},
        )

    def __repr__(self):
        return f"DirectedGraph({len(self.vertices)} vertices, {len(self.r)} edges)"


def is_essential_graph(g: DirectedGraph) -> bool:
    return set(g.r.values()) == g.vertices and set(g.s.values()) == g.vertices


def count_paths(g: DirectedGraph, n: int) -> int:
    """Number of paths e_1...e_n with s(e_i) = r(e_{i+1})."""
    if n == 0:
        return len(g.vertices)
    ways = {e: 1 for e in g.edges}
    for _ in range(n - 1):
        nxt = Counter()
        for e, w in ways.items():
            for f in g.in_edges(g.s[e]):
                nxt[f] += w
        ways = nxt
    return sum(ways.values())


@dataclass(frozen=True)
class GraphHom:
    domain: DirectedGraph
    codomain: DirectedGraph
    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "vertex_map", dict(self.vertex_map))
        object.__setattr__(self, "edge_map", dict(self.edge_map))

    __hash__ = None

    def __call__(self, x: str) -> str:
        # caller must know which namespace x lives in when labels overlap
        if x in self.edge_map and x in self.domain.r:
            return self.edge_map[x]
        return self.vertex_map[x]

    def v(self, x: str) -> str:
        return self.vertex_map[x]

    def e(self, x: str) -> str:
        return self.edge_map[x]


def hom_violation(h: GraphHom) -> Optional[str]:
    """First reason h fails to be a homomorphism, or None."""
    dom, cod = h.domain, h.codomain
    for v in sorted(dom.vertices):
        if v not in h.vertex_map:
            return f"vertex {v!r} is unmapped"
        if h.vertex_map[v] not in cod.vertices:
            return f"vertex {v!r} maps to {h.vertex_map[v]!r}, not a codomain vertex"
    for f in dom.edges:
        if f not in h.edge_map:
            return f"edge {f!r} is unmapped"
        e = h.edge_map[f]
        if e not in cod.r:
            return f"edge {f!r} maps to {e!r}, not a codomain edge"
        if h.vertex_map[dom.r[f]] != cod.r[e]:
            return f"edge {f!r}: range mismatch"
        if h.vertex_map[dom.s[f]] != cod.s[e]:
            return f"edge {f!r}: source mismatch"
    return None


def validate_hom(h: GraphHom) -> bool:
    return hom_violation(h) is None


def require_hom(h: GraphHom, name: str = "map") -> GraphHom:
    msg = hom_violation(h)
    if msg:
        raise HomomorphismError(f"{name} is not a graph homomorphism: {msg}")
    return h


@dataclass(frozen=True)
class GraphInsplitPartition:
    """Ordered partition of r^{-1}(v) for every vertex v; class i names child v^i."""

    classes: Mapping[str, tuple]

    def __post_init__(self):
        object.__setattr__(
            self, "classes",
            {v: tuple(frozenset(c) for c in cs) for v, cs in self.classes.items()},
        )

    __hash__ = None

    @classmethod
    def trivial(cls, g: DirectedGraph) -> "GraphInsplitPartition":
        return cls({v: (frozenset(g.in_edges(v)),) for v in g.vertices})

    def m(self, v: str) -> int:
        return len(self.classes[v])

    @cached_property
    def _index(self):
        return {(v, f): i for v, cs in self.classes.items()
                for i, c in enumerate(cs, 1) for f in c}

    def class_of(self, v: str, f: str) -> int:
        """1-based index of the class at v containing f."""
        return self._index[(v, f)]

    def is_trivial(self) -> bool:
        return all(len(cs) == 1 for cs in self.classes.values())

    def check(self, g: DirectedGraph) -> None:
        if set(self.classes) != set(g.vertices):
            missing = sorted(set(g.vertices) - set(self.classes))
            extra = sorted(set(self.classes) - set(g.vertices))
            raise PartitionError(f"partition vertices mismatch (missing {missing}, extra {extra})")
        for v in g.sorted_vertices:
            cs = self.classes[v]
            incoming = set(g.in_edges(v))
            if not cs:
                raise PartitionError(f"vertex {v!r} has no classes")
            if not incoming:
                if len(cs) != 1 or cs[0]:
                    raise PartitionError(f"vertex {v!r} has no incoming edges: expected one empty class")
                continue
            seen = set()
            for i, c in enumerate(cs, 1):
                if not c:
                    raise PartitionError(f"class {i} at {v!r} is empty")
                if seen & c:
                    raise PartitionError(f"classes at {v!r} overlap on {sorted(seen & c)}")
                seen |= c
            if seen != incoming:
                raise PartitionError(
                    f"classes at {v!r} do not cover r^-1({v}): "
                    f"missing {sorted(incoming - seen)}, extra {sorted(seen - incoming)}")


class Relabel(NamedTuple):
    vertex_parent: dict  # child vertex -> (parent, i)
    edge_parent: dict    # child edge -> (parent, j)


def insplit_graph(g: DirectedGraph, P: GraphInsplitPartition):
    """Insplit g along P. Returns ``(graph, Relabel)``."""
    P.check(g)
    vp, ep, r, s = {}, {}, {}, {}
    for v in g.vertices:
        for i in range(1, P.m(v) + 1):
            vp[child(v, i)] = (v, i)
    for f in g.edges:
        k = P.class_of(g.r[f], f)
        for j in range(1, P.m(g.s[f]) + 1):
            fj = child(f, j)
            ep[fj] = (f, j)
            s[fj] = child(g.s[f], j)
            r[fj] = child(g.r[f], k)
    return DirectedGraph(frozenset(vp), r, s), Relabel(vp, ep)


class Isomorphism(NamedTuple):
    vertex_map: dict
    edge_map: dict


def graphs_isomorphic(g1: DirectedGraph, g2: DirectedGraph) -> Optional[Isomorphism]:
    """Backtracking isomorphism search; meant for small graphs."""
    if len(g1.vertices) != len(g2.vertices) or len(g1.r) != len(g2.r):
        return None

    def mult(g):
        c = Counter((g.s[e], g.r[e]) for e in g.edges)
        return c

    m1, m2 = mult(g1), mult(g2)

    def sig(g, m, v):
        return (len(g.in_edges(v)), len(g.out_edges(v)), m[(v, v)])

    sig2 = defaultdict(list)
    for v in g2.sorted_vertices:
        sig2[sig(g2, m2, v)].append(v)
    order = sorted(g1.vertices, key=lambda v: (len(sig2.get(sig(g1, m1, v), ())), v))
    if sorted(sig(g1, m1, v) for v in g1.vertices) != sorted(sig(g2, m2, v) for v in g2.vertices):
        return None

    assign, used = {}, set()

    def ok(u, x):
        for w, y in assign.items():
            if m1[(u, w)] != m2[(x, y)] or m1[(w, u)] != m2[(y, x)]:
                return False
        return m1[(u, u)] == m2[(x, x)]

    def search(k):
        if k == len(order):
            return True
        u = order[k]
        for x in sig2.get(sig(g1, m1, u), ()):
            if x in used or not ok(u, x):
                continue
            assign[u] = x
            used.add(x)
            if search(k + 1):
                return True
            del assign[u]
            used.discard(x)
        return False

    if not search(0):
        return None
    buckets = defaultdict(list)
    for e in g2.edges:
        buckets[(g2.s[e], g2.r[e])].append(e)
    emap = {}
    for e in g1.edges:
        emap[e] = buckets[(assign[g1.s[e]], assign[g1.r[e]])].pop(0)
    return Isomorphism(dict(assign), emap)
