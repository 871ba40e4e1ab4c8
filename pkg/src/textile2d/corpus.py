"""Random small 2-graphs and textile systems for property tests."""
from __future__ import annotations

import random
from typing import NamedTuple, Optional

from .errors import InjectivityError
from .graph import DirectedGraph, GraphHom, GraphInsplitPartition
from .textile import TextileSystem, build_textile, restrict_edges
from .twograph import (EPS1, EPS2, CommutingSquare, TwoColoredGraph, TwoGraph,
                       twograph_to_textile, validate_twograph)


def _matmul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _random_matrix(rng, n, essential):
    while True:
        m = [[rng.choice((0, 0, 1, 1, 1, 2)) for _ in range(n)] for _ in range(n)]
        if not essential:
            return m
        if all(any(row) for row in m) and all(any(m[i][j] for i in range(n)) for j in range(n)):
            return m


def _commuting_pair(rng, n, essential):
    a = _random_matrix(rng, n, essential)
    for _ in range(40):
        b = _random_matrix(rng, n, essential)
        if _matmul(a, b) == _matmul(b, a):
            return a, b
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    choice = rng.choice(("same", "ident", "shift"))
    if choice == "same":
        return a, [row[:] for row in a]
    if choice == "ident":
        return a, ident
    return a, [[a[i][j] + ident[i][j] for j in range(n)] for i in range(n)]


def random_twograph(rng: random.Random, max_vertices: int = 3, max_squares: int = 12,
                    essential: bool = True) -> TwoGraph:
    """A random 2-graph whose color adjacency matrices commute.

    Entry [i][j] of a color matrix counts edges from vertex j to vertex i.
    Squares come from a random matching of left/top paths with bottom/right
    paths sharing the same endpoints.
    """
    while True:
        n = rng.randint(1, max_vertices)
        a1, a2 = _commuting_pair(rng, n, essential)
        sq = sum(map(sum, _matmul(a2, a1)))
        if 0 < sq <= max_squares:
            break
    vs = [f"x{i + 1}" for i in range(n)]
    r, s, deg = {}, {}, {}
    counters = {EPS1: 0, EPS2: 0}
    for color, mat, prefix in ((EPS1, a1, "a"), (EPS2, a2, "b")):
        for i in range(n):
            for j in range(n):
                for _ in range(mat[i][j]):
                    counters[color] += 1
                    e = f"{prefix}{counters[color]}"
                    r[e], s[e], deg[e] = vs[i], vs[j], color
    g = DirectedGraph(frozenset(vs), r, s)
    sk = TwoColoredGraph(g, deg)
    lt, br = {}, {}
    for w in sk.eps2:
        for e in sk.eps1:
            if s[w] == r[e]:
                lt.setdefault((r[w], s[e]), []).append((w, e))
    for e in sk.eps1:
        for w in sk.eps2:
            if s[e] == r[w]:
                br.setdefault((r[e], s[w]), []).append((e, w))
    squares, k = {}, 0
    for key in sorted(lt):
        pairs = br[key][:]
        rng.shuffle(pairs)
        for (w, e), (e2, w2) in zip(lt[key], pairs):
            k += 1
            lab = f"s{k}"
            squares[lab] = CommutingSquare(lab, top=e, left=w, bottom=e2, right=w2)
    return validate_twograph(sk, squares)


class Instance(NamedTuple):
    seed: int
    L: TwoGraph
    T: TextileSystem


def random_corpus(count: int, seed: int = 0, essential_fraction: float = 1.0, **kw) -> list:
    out = []
    for i in range(count):
        rng = random.Random(seed * 100003 + i)
        ess = rng.random() < essential_fraction
        L = random_twograph(rng, essential=ess, **kw)
        out.append(Instance(seed * 100003 + i, L, twograph_to_textile(L)))
    return out


def random_set_partition(rng: random.Random, items, max_blocks: Optional[int] = None) -> tuple:
    """Random ordered partition; classes ordered by their least element."""
    items = sorted(items)
    if not items:
        return (frozenset(),)
    k = rng.randint(1, max_blocks or len(items))
    labels = [rng.randrange(k) for _ in items]
    blocks = {}
    for x, b in zip(items, labels):
        blocks.setdefault(b, set()).add(x)
    return tuple(sorted((frozenset(c) for c in blocks.values()), key=min))


def random_nontrivial_jm_partition(rng: random.Random, F: DirectedGraph) -> Optional[GraphInsplitPartition]:
    """A partition of F with m(v) >= 2 at some vertex that emits an edge, or None."""
    good = [v for v in F.sorted_vertices if len(F.in_edges(v)) >= 2 and F.out_edges(v)]
    if not good:
        return None
    target = rng.choice(good)
    classes = {}
    for v in F.sorted_vertices:
        classes[v] = random_set_partition(rng, F.in_edges(v))
    while len(classes[target]) < 2:
        classes[target] = random_set_partition(rng, F.in_edges(target))
    return GraphInsplitPartition(classes)


def broken_variants(rng: random.Random, T: TextileSystem) -> list:
    """Mutations of an LR system: a deleted square, a duplicated square with a
    new bottom, and a square whose bottom is redirected.  Some may stay LR."""
    out = []
    edges = T.F.edges
    if len(edges) > 1:
        out.append(("delete", restrict_edges(T, [f for f in edges if f != rng.choice(edges)])))
    for f in rng.sample(list(edges), len(edges)):
        alt = [e for e in T.E.edges if e != T.q.edge_map[f]
               and T.E.r[e] == T.E.r[T.q.edge_map[f]] and T.E.s[e] == T.E.s[T.q.edge_map[f]]]
        if not alt:
            continue
        e = rng.choice(alt)
        dup = f + "_dup"
        F = DirectedGraph(T.F.vertices, {**T.F.r, dup: T.F.r[f]}, {**T.F.s, dup: T.F.s[f]})
        p = GraphHom(F, T.E, T.p.vertex_map, {**T.p.edge_map, dup: T.p.edge_map[f]})
        q = GraphHom(F, T.E, T.q.vertex_map, {**T.q.edge_map, dup: e})
        out.append(("duplicate", build_textile(F, T.E, p, q)))
        F2 = T.F
        q2 = GraphHom(F2, T.E, T.q.vertex_map, {**T.q.edge_map, f: e})
        try:
            out.append(("redirect", build_textile(F2, T.E, GraphHom(F2, T.E, T.p.vertex_map, T.p.edge_map), q2)))
        except InjectivityError:
            pass
        break
    return out
