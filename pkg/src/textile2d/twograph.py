"""2-graphs presented by a 2-colored skeleton and commuting squares.

Color 1 edges are horizontal, color 2 edges vertical.  A square
``(left, top, right, bottom)`` records the relation left.top ~ bottom.right,
composition reading right to left.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping, NamedTuple, Optional

from .errors import NotLRError, PairingError, PartitionError, SizeGuardError, TwoGraphError
from .graph import DirectedGraph, GraphHom, child
from .textile import TextileSystem, build_textile, lifting_report, lr_failures

EPS1, EPS2 = 1, 2
MAX_PARTITION_EDGES = 10


@dataclass(frozen=True)
class TwoColoredGraph:
    graph: DirectedGraph
    degree: Mapping[str, int]

    def __post_init__(self):
        object.__setattr__(self, "degree", dict(self.degree))
        if set(self.degree) != set(self.graph.r):
            raise TwoGraphError("degree must be defined on exactly the skeleton edges")
        bad = sorted(e for e, d in self.degree.items() if d not in (EPS1, EPS2))
        if bad:
            raise TwoGraphError(f"edges with invalid color: {bad}")

    __hash__ = None

    @cached_property
    def eps1(self) -> tuple:
        return tuple(e for e in self.graph.edges if self.degree[e] == EPS1)

    @cached_property
    def eps2(self) -> tuple:
        return tuple(e for e in self.graph.edges if self.degree[e] == EPS2)


class CommutingSquare(NamedTuple):
    label: str
    top: str
    left: str
    bottom: str
    right: str


@dataclass(frozen=True)
class TwoGraph:
    skeleton: TwoColoredGraph
    squares: Mapping[str, CommutingSquare]

    def __post_init__(self):
        object.__setattr__(self, "squares", dict(self.squares))

    __hash__ = None

    @property
    def graph(self) -> DirectedGraph:
        return self.skeleton.graph

    @property
    def vertices(self):
        return self.skeleton.graph.vertices

    def r(self, e):
        return self.graph.r[e]

    def s(self, e):
        return self.graph.s[e]

    def square_source(self, sq: CommutingSquare) -> str:
        return self.graph.s[sq.top]

    def __repr__(self):
        return (f"TwoGraph({len(self.vertices)} vertices, {len(self.skeleton.eps1)}+"
                f"{len(self.skeleton.eps2)} edges, {len(self.squares)} squares)")


def _square_errors(sk: TwoColoredGraph, sq: CommutingSquare) -> list:
    g, d = sk.graph, sk.degree
    errs = []
    for role, want in (("top", EPS1), ("bottom", EPS1), ("left", EPS2), ("right", EPS2)):
        e = getattr(sq, role)
        if e not in d:
            errs.append(f"square {sq.label}: {role} edge {e!r} is undefined")
        elif d[e] != want:
            errs.append(f"square {sq.label}: {role} edge {e!r} has color {d[e]}, expected {want}")
    if errs:
        return errs
    if g.s[sq.left] != g.r[sq.top]:
        errs.append(f"square {sq.label}: s(left) != r(top)")
    if g.r[sq.left] != g.r[sq.bottom]:
        errs.append(f"square {sq.label}: r(left) != r(bottom)")
    if g.s[sq.right] != g.s[sq.top]:
        errs.append(f"square {sq.label}: s(right) != s(top)")
    if g.r[sq.right] != g.s[sq.bottom]:
        errs.append(f"square {sq.label}: r(right) != s(bottom)")
    return errs


def twograph_violations(sk: TwoColoredGraph, squares: Mapping[str, CommutingSquare]) -> list:
    g = sk.graph
    errs = []
    for lab in sorted(squares):
        if squares[lab].label != lab:
            errs.append(f"square key {lab!r} does not match its label")
        errs.extend(_square_errors(sk, squares[lab]))
    if errs:
        return errs
    lt, br, quad = {}, {}, {}
    for lab in sorted(squares):
        sq = squares[lab]
        lt.setdefault((sq.left, sq.top), []).append(lab)
        br.setdefault((sq.bottom, sq.right), []).append(lab)
        key = (sq.top, sq.left, sq.bottom, sq.right)
        if key in quad:
            errs.append(f"squares {quad[key]} and {lab} share the boundary {key}")
        quad[key] = lab
    for w in sk.eps2:
        for e in sk.eps1:
            if g.s[w] == g.r[e]:
                n = lt.get((w, e), [])
                if len(n) != 1:
                    errs.append(f"left/top pair ({w}, {e}) lies in {len(n)} squares {n}")
    for e in sk.eps1:
        for w in sk.eps2:
            if g.s[e] == g.r[w]:
                n = br.get((e, w), [])
                if len(n) != 1:
                    errs.append(f"bottom/right pair ({e}, {w}) lies in {len(n)} squares {n}")
    return errs


def validate_twograph(sk: TwoColoredGraph, squares) -> TwoGraph:
    if not isinstance(squares, Mapping):
        squares = {sq.label: sq for sq in squares}
    errs = twograph_violations(sk, squares)
    if errs:
        raise TwoGraphError(f"invalid 2-graph ({len(errs)} problems): {errs[0]}", errs)
    return TwoGraph(sk, squares)


def textile_to_twograph(T: TextileSystem) -> TwoGraph:
    rep = lifting_report(T)
    if not rep.is_LR:
        fails = lr_failures(rep)
        x = fails[0]
        raise NotLRError(
            f"textile system is not LR: {x.flag} fails at vertex {x.vertex!r}, "
            f"edge {x.edge!r} (lifts {list(x.lifts)})", fails)
    clash = set(T.E.r) & set(T.F.vertices)
    if clash:
        raise TwoGraphError(f"E-edges and F-vertices share labels {sorted(clash)}")
    r = dict(T.E.r)
    s = dict(T.E.s)
    deg = {e: EPS1 for e in T.E.r}
    for w in T.F.vertices:
        r[w], s[w], deg[w] = T.q.vertex_map[w], T.p.vertex_map[w], EPS2
    sk = TwoColoredGraph(DirectedGraph(T.E.vertices, r, s), deg)
    squares = {}
    for f in T.F.edges:
        v = T.square(f)
        squares[f] = CommutingSquare(f, top=v.top, left=v.left, bottom=v.bottom, right=v.right)
    return validate_twograph(sk, squares)


def twograph_to_textile(L: TwoGraph) -> TextileSystem:
    g, sk = L.graph, L.skeleton
    E = DirectedGraph(g.vertices, {e: g.r[e] for e in sk.eps1}, {e: g.s[e] for e in sk.eps1})
    F = DirectedGraph(frozenset(sk.eps2), {k: sq.left for k, sq in L.squares.items()},
                      {k: sq.right for k, sq in L.squares.items()})
    p = GraphHom(F, E, {w: g.s[w] for w in sk.eps2}, {k: sq.top for k, sq in L.squares.items()})
    q = GraphHom(F, E, {w: g.r[w] for w in sk.eps2}, {k: sq.bottom for k, sq in L.squares.items()})
    T = build_textile(F, E, p, q)
    assert lifting_report(T).is_LR, "a valid 2-graph always yields an LR system"
    return T


def is_essential_twograph(L: TwoGraph) -> bool:
    g, d = L.graph, L.skeleton.degree
    need = {(c, end) for c in (EPS1, EPS2) for end in ("r", "s")}
    have = {v: set() for v in g.vertices}
    for e in g.edges:
        have[g.r[e]].add((d[e], "r"))
        have[g.s[e]].add((d[e], "s"))
    return all(h == need for h in have.values())


@dataclass(frozen=True)
class TwoGraphInsplitPartition:
    """Ordered partition of zG^1 (edges of both colors with range z) per vertex z."""

    classes: Mapping[str, tuple]

    def __post_init__(self):
        object.__setattr__(
            self, "classes",
            {v: tuple(frozenset(c) for c in cs) for v, cs in self.classes.items()})

    __hash__ = None

    @classmethod
    def trivial(cls, L: TwoGraph) -> "TwoGraphInsplitPartition":
        return cls({z: (frozenset(L.graph.in_edges(z)),) for z in L.vertices})

    def m(self, z) -> int:
        return len(self.classes[z])

    @cached_property
    def _index(self):
        return {(z, f): i for z, cs in self.classes.items()
                for i, c in enumerate(cs, 1) for f in c}

    def class_of(self, z, f) -> int:
        return self._index[(z, f)]

    def is_trivial(self) -> bool:
        return all(len(cs) == 1 for cs in self.classes.values())

    def check_cover(self, g: DirectedGraph) -> None:
        if set(self.classes) != set(g.vertices):
            raise PartitionError("partition must list every vertex exactly once")
        for z in g.sorted_vertices:
            cs, incoming = self.classes[z], set(g.in_edges(z))
            if not incoming:
                if len(cs) != 1 or cs[0]:
                    raise PartitionError(f"vertex {z!r} receives no edges: expected one empty class")
                continue
            seen = set()
            for i, c in enumerate(cs, 1):
                if not c:
                    raise PartitionError(f"class {i} at {z!r} is empty")
                if seen & c:
                    raise PartitionError(f"classes at {z!r} overlap on {sorted(seen & c)}")
                seen |= c
            if seen != incoming:
                raise PartitionError(f"classes at {z!r} do not cover the edges with range {z!r}")


class PairingViolation(NamedTuple):
    square: str
    vertex: str
    left: str
    left_class: int
    bottom: str
    bottom_class: int


def check_pairing(L: TwoGraph, P: TwoGraphInsplitPartition):
    """Return ``(ok, violations)``; coverage problems raise PartitionError."""
    P.check_cover(L.graph)
    out = []
    for lab in sorted(L.squares):
        sq = L.squares[lab]
        z = L.graph.r[sq.left]
        i, j = P.class_of(z, sq.left), P.class_of(z, sq.bottom)
        if i != j:
            out.append(PairingViolation(lab, z, sq.left, i, sq.bottom, j))
    return not out, out


class TwoGraphRelabel(NamedTuple):
    vertex_parent: dict
    edge_parent: dict
    square_parent: dict


def insplit_twograph(L: TwoGraph, P: TwoGraphInsplitPartition):
    ok, bad = check_pairing(L, P)
    if not ok:
        v = bad[0]
        raise PairingError(
            f"pairing condition fails at square {v.square}: left {v.left} in class "
            f"{v.left_class}, bottom {v.bottom} in class {v.bottom_class}", bad)
    g = L.graph
    vp, ep, sp, r, s, deg = {}, {}, {}, {}, {}, {}
    for z in g.vertices:
        for i in range(1, P.m(z) + 1):
            vp[child(z, i)] = (z, i)
    for f in g.edges:
        k = P.class_of(g.r[f], f)
        for i in range(1, P.m(g.s[f]) + 1):
            fi = child(f, i)
            ep[fi] = (f, i)
            s[fi] = child(g.s[f], i)
            r[fi] = child(g.r[f], k)
            deg[fi] = L.skeleton.degree[f]
    sk = TwoColoredGraph(DirectedGraph(frozenset(vp), r, s), deg)
    squares = {}
    for lab, sq in L.squares.items():
        u = g.s[sq.top]
        kl = P.class_of(g.r[sq.top], sq.top)
        kb = P.class_of(g.r[sq.right], sq.right)
        for i in range(1, P.m(u) + 1):
            li = child(lab, i)
            sp[li] = (lab, i)
            squares[li] = CommutingSquare(li, top=child(sq.top, i), left=child(sq.left, kl),
                                          bottom=child(sq.bottom, kb), right=child(sq.right, i))
    return validate_twograph(sk, squares), TwoGraphRelabel(vp, ep, sp)


def _restricted_growth(items: list, tied: list) -> Iterator[list]:
    """Set partitions of ``items`` as restricted-growth strings, keeping only
    those where every pair of indices in ``tied`` shares a block."""
    n = len(items)
    partners = [[] for _ in range(n)]
    for a, b in tied:
        if a != b:
            partners[max(a, b)].append(min(a, b))
    rgs = [0] * n

    def rec(k, top):
        if k == n:
            yield list(rgs)
            return
        for b in range(top + 2):
            if all(rgs[j] == b for j in partners[k]):
                rgs[k] = b
                yield from rec(k + 1, max(top, b))

    if n == 0:
        yield []
        return
    rgs[0] = 0
    yield from rec(1, 0)


def vertex_pairing_partitions(L: TwoGraph, z: str) -> list:
    """All pairing-compatible ordered partitions of zG^1, classes in first-element order."""
    items = list(L.graph.in_edges(z))
    if len(items) > MAX_PARTITION_EDGES:
        raise SizeGuardError(
            f"vertex {z!r} receives {len(items)} edges (limit {MAX_PARTITION_EDGES})")
    if not items:
        return [(frozenset(),)]
    pos = {e: i for i, e in enumerate(items)}
    tied = [(pos[sq.left], pos[sq.bottom]) for sq in L.squares.values()
            if L.graph.r[sq.left] == z]
    out = []
    for rgs in _restricted_growth(items, tied):
        k = max(rgs) + 1
        out.append(tuple(frozenset(items[i] for i in range(len(items)) if rgs[i] == b)
                         for b in range(k)))
    return out


def enumerate_pairing_partitions(L: TwoGraph, limit: Optional[int] = None) -> list:
    zs = L.graph.sorted_vertices
    per = [vertex_pairing_partitions(L, z) for z in zs]
    out = []
    for combo in itertools.product(*per):
        P = TwoGraphInsplitPartition(dict(zip(zs, combo)))
        assert check_pairing(L, P)[0]
        out.append(P)
        if limit is not None and len(out) >= limit:
            break
    return out
