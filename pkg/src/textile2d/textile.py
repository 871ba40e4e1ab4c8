"""Textile systems: validity, lifting properties, inversion, JM insplitting."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

from .errors import HomomorphismError, InjectivityError
from .graph import (DirectedGraph, GraphHom, GraphInsplitPartition,
                    insplit_graph, is_essential_graph, require_hom)


class SquareView(NamedTuple):
    label: str
    left: str    # r(f), an F-vertex
    top: str     # p(f), an E-edge
    right: str   # s(f), an F-vertex
    bottom: str  # q(f), an E-edge


@dataclass(frozen=True)
class TextileSystem:
    F: DirectedGraph
    E: DirectedGraph
    p: GraphHom
    q: GraphHom

    __hash__ = None

    def square(self, f: str) -> SquareView:
        F = self.F
        return SquareView(f, F.r[f], self.p.edge_map[f], F.s[f], self.q.edge_map[f])

    def squares(self) -> tuple:
        return tuple(self.square(f) for f in self.F.edges)

    def __repr__(self):
        return f"TextileSystem(|F0|={len(self.F.vertices)}, |F1|={len(self.F.r)}, " \
               f"|E0|={len(self.E.vertices)}, |E1|={len(self.E.r)})"


def build_textile(F: DirectedGraph, E: DirectedGraph, p: GraphHom, q: GraphHom) -> TextileSystem:
    for name, h in (("p", p), ("q", q)):
        if h.domain != F or h.codomain != E:
            raise HomomorphismError(f"{name} must map F to E")
        require_hom(h, name)
    seen = {}
    for f in F.edges:
        key = (F.r[f], p.edge_map[f], F.s[f], q.edge_map[f])
        if key in seen:
            raise InjectivityError(
                f"edges {seen[key]!r} and {f!r} share the boundary {key}")
        seen[key] = f
    return TextileSystem(F, E, p, q)


def textile_from_squares(E: DirectedGraph, vertices: Mapping[str, tuple],
                         squares: Mapping[str, tuple]) -> TextileSystem:
    """Convenience builder.

    ``vertices`` maps each F-vertex to ``(p(v), q(v))``; ``squares`` maps each
    F-edge to ``(left, top, right, bottom)``.
    """
    F = DirectedGraph(frozenset(vertices),
                      {f: sq[0] for f, sq in squares.items()},
                      {f: sq[2] for f, sq in squares.items()})
    p = GraphHom(F, E, {v: pq[0] for v, pq in vertices.items()},
                 {f: sq[1] for f, sq in squares.items()})
    q = GraphHom(F, E, {v: pq[1] for v, pq in vertices.items()},
                 {f: sq[3] for f, sq in squares.items()})
    return build_textile(F, E, p, q)


class LiftFailure(NamedTuple):
    flag: str      # e.g. "p_unique_r"
    vertex: str    # F-vertex
    edge: str      # E-edge
    lifts: tuple   # F-edges found (empty or several)


@dataclass(frozen=True)
class LiftingReport:
    p_r_lift: bool
    p_unique_r: bool
    p_s_lift: bool
    p_unique_s: bool
    q_r_lift: bool
    q_unique_r: bool
    q_s_lift: bool
    q_unique_s: bool
    failures: tuple = field(default=(), compare=False)

    @property
    def is_LR(self) -> bool:
        return self.p_unique_r and self.q_unique_s

    def as_dict(self) -> dict:
        keys = ("p_r_lift", "p_unique_r", "p_s_lift", "p_unique_s",
                "q_r_lift", "q_unique_r", "q_s_lift", "q_unique_s")
        d = {k: getattr(self, k) for k in keys}
        d["is_LR"] = self.is_LR
        return d


def lifting_report(T: TextileSystem) -> LiftingReport:
    F, E = T.F, T.E
    flags, failures = {}, []
    for hname, h in (("p", T.p), ("q", T.q)):
        for end in ("r", "s"):
            endF, endE = getattr(F, end), getattr(E, end)
            lifts = defaultdict(list)
            for f in F.edges:
                lifts[(endF[f], h.edge_map[f])].append(f)
            exists = unique = True
            for v in F.sorted_vertices:
                for e in E.edges:
                    if h.vertex_map[v] != endE[e]:
                        continue
                    found = tuple(lifts.get((v, e), ()))
                    if not found:
                        exists = unique = False
                        failures.append(LiftFailure(f"{hname}_{end}_lift", v, e, found))
                    elif len(found) > 1:
                        unique = False
                        failures.append(LiftFailure(f"{hname}_unique_{end}", v, e, found))
            flags[f"{hname}_{end}_lift"] = exists
            flags[f"{hname}_unique_{end}"] = unique
    return LiftingReport(**flags, failures=tuple(failures))


def lr_failures(report: LiftingReport) -> tuple:
    """The failures that break LR (p unique r-lifting, q unique s-lifting)."""
    return tuple(x for x in report.failures
                 if x.flag in ("p_r_lift", "p_unique_r", "q_s_lift", "q_unique_s"))


def _onto(h: GraphHom) -> bool:
    return (set(h.vertex_map.values()) == set(h.codomain.vertices)
            and set(h.edge_map.values()) == set(h.codomain.r))


def is_essential_textile(T: TextileSystem) -> bool:
    return is_essential_graph(T.F) and _onto(T.p) and _onto(T.q)


def invert_textile(T: TextileSystem) -> TextileSystem:
    F, E, p, q = T.F, T.E, T.p, T.q
    Eh = DirectedGraph(E.vertices, q.vertex_map, p.vertex_map)
    Fh = DirectedGraph(frozenset(E.r), q.edge_map, p.edge_map)
    ph = GraphHom(Fh, Eh, E.s, F.s)
    qh = GraphHom(Fh, Eh, E.r, F.r)
    return build_textile(Fh, Eh, ph, qh)


def insplit_textile_jm_relabel(T: TextileSystem, P: GraphInsplitPartition):
    """JM insplit that also returns the provenance of the new F."""
    FI, rel = insplit_graph(T.F, P)
    pv = {c: T.p.vertex_map[v] for c, (v, _) in rel.vertex_parent.items()}
    qv = {c: T.q.vertex_map[v] for c, (v, _) in rel.vertex_parent.items()}
    pe = {c: T.p.edge_map[f] for c, (f, _) in rel.edge_parent.items()}
    qe = {c: T.q.edge_map[f] for c, (f, _) in rel.edge_parent.items()}
    TI = build_textile(FI, T.E, GraphHom(FI, T.E, pv, pe), GraphHom(FI, T.E, qv, qe))
    return TI, rel


def insplit_textile_jm(T: TextileSystem, P: GraphInsplitPartition) -> TextileSystem:
    return insplit_textile_jm_relabel(T, P)[0]


def relabel_textile(T: TextileSystem, fv=None, fe=None, ev=None, ee=None) -> TextileSystem:
    """Rename labels; omitted maps default to the identity."""
    ident = lambda keys: {k: k for k in keys}  # noqa: E731
    fv = fv or ident(T.F.vertices)
    fe = fe or ident(T.F.r)
    ev = ev or ident(T.E.vertices)
    ee = ee or ident(T.E.r)
    F, E = T.F.relabel(fv, fe), T.E.relabel(ev, ee)

    def move(h):
        return GraphHom(F, E, {fv[v]: ev[w] for v, w in h.vertex_map.items()},
                        {fe[f]: ee[e] for f, e in h.edge_map.items()})

    return build_textile(F, E, move(T.p), move(T.q))


def restrict_edges(T: TextileSystem, keep, rename=None) -> TextileSystem:
    """Sub-system on the same vertices keeping only F-edges in ``keep``."""
    rename = rename or {}
    nm = lambda f: rename.get(f, f)  # noqa: E731
    keep = [f for f in T.F.edges if f in set(keep)]
    F = DirectedGraph(T.F.vertices, {nm(f): T.F.r[f] for f in keep},
                      {nm(f): T.F.s[f] for f in keep})
    p = GraphHom(F, T.E, T.p.vertex_map, {nm(f): T.p.edge_map[f] for f in keep})
    q = GraphHom(F, T.E, T.q.vertex_map, {nm(f): T.q.edge_map[f] for f in keep})
    return build_textile(F, T.E, p, q)
