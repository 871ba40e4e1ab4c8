"""Insplitting moves relating LR textile systems and 2-graphs.

Three partition flavours drive everything here: a 2-graph partition G of the
skeleton edges at each vertex, a partition Fpart of the F-edges by range, and a
partition Epart of the E-edges by range.  The functions below derive each from
the others, build the insplit systems they determine, and check that the
different routes agree.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .errors import HypothesisError, PairingError
from .graph import DirectedGraph, GraphHom, GraphInsplitPartition, child, insplit_graph
from .textile import (TextileSystem, build_textile, insplit_textile_jm_relabel,
                      invert_textile, lifting_report, lr_failures, restrict_edges)
from .twograph import (TwoGraph, TwoGraphInsplitPartition, check_pairing, insplit_twograph,
                       textile_to_twograph, twograph_to_textile)


@dataclass(frozen=True)
class DerivedPartitions:
    G: TwoGraphInsplitPartition
    Fpart: GraphInsplitPartition
    Epart: GraphInsplitPartition
    Hpart: Optional[GraphInsplitPartition] = None
    provenance: str = "G"

    __hash__ = None


def _require_lr(T: TextileSystem) -> None:
    rep = lifting_report(T)
    if not rep.is_LR:
        x = lr_failures(rep)[0]
        raise HypothesisError(f"system is not LR ({x.flag} at {x.vertex}, {x.edge})", x.vertex)


def _require_p_onto_source_free(T: TextileSystem) -> None:
    missing = sorted(set(T.E.r) - set(T.p.edge_map.values()))
    if missing:
        raise HypothesisError(f"p is not surjective: {missing[0]} not hit", missing[0])
    missing = sorted(set(T.E.vertices) - set(T.p.vertex_map.values()))
    if missing:
        raise HypothesisError(f"p is not surjective: vertex {missing[0]} not hit", missing[0])
    for v in T.F.sorted_vertices:
        if not T.F.in_edges(v):
            raise HypothesisError(f"F has a source: vertex {v!r} receives no edge", v)


def _fmt(P) -> str:
    return "; ".join(f"{z}: " + " | ".join("{" + ", ".join(sorted(c)) + "}" for c in cs)
                     for z, cs in sorted(P.classes.items()))


# partition conversions

def f_from_g(T: TextileSystem, G: TwoGraphInsplitPartition) -> GraphInsplitPartition:
    out = {}
    for v in T.F.vertices:
        z = T.p.vertex_map[v]
        incoming = T.F.in_edges(v)
        if not incoming:
            out[v] = (frozenset(),)
            continue
        out[v] = tuple(frozenset(f for f in incoming if T.p.edge_map[f] in c) for c in G.classes[z])
    return GraphInsplitPartition(out)


def e_from_g(T: TextileSystem, G: TwoGraphInsplitPartition) -> GraphInsplitPartition:
    out = {}
    for z in T.E.vertices:
        ez = set(T.E.in_edges(z))
        out[z] = (frozenset(),) if not ez else tuple(frozenset(c & ez) for c in G.classes[z])
    return GraphInsplitPartition(out)


def g_from_e(T: TextileSystem, Epart: GraphInsplitPartition) -> TwoGraphInsplitPartition:
    out = {}
    for z in T.E.vertices:
        classes = []
        for c in Epart.classes[z]:
            verts = {T.F.r[f] for f in T.F.edges if T.q.edge_map[f] in c}
            classes.append(frozenset(c) | frozenset(verts))
        out[z] = tuple(classes)
    return TwoGraphInsplitPartition(out)


def f_from_e(T: TextileSystem, Epart: GraphInsplitPartition) -> GraphInsplitPartition:
    out = {}
    for v in T.F.vertices:
        incoming = T.F.in_edges(v)
        if not incoming:
            out[v] = (frozenset(),)
            continue
        out[v] = tuple(frozenset(f for f in incoming if T.p.edge_map[f] in c)
                       for c in Epart.classes[T.p.vertex_map[v]])
    return GraphInsplitPartition(out)


def _p_image(T, c) -> frozenset:
    return frozenset(T.p.edge_map[f] for f in c)


def _q_image_in(T, v) -> frozenset:
    return frozenset(T.q.edge_map[f] for f in T.F.in_edges(v))


# hypothesis checks

def check_f_hypotheses(T: TextileSystem, Fpart: GraphInsplitPartition) -> None:
    Fpart.check(T.F)
    images = [((v, i), _p_image(T, c)) for v in T.F.sorted_vertices
              for i, c in enumerate(Fpart.classes[v], 1)]
    for a, (va, ia) in enumerate(images):
        for vb, ib in images[a + 1:]:
            if ia & ib and ia != ib:
                raise HypothesisError(
                    f"hypothesis (1) fails: p-images of classes {va} and {vb} overlap "
                    f"without being equal", va[0])
    imsets = [im for _, im in images]
    for v in T.F.sorted_vertices:
        need = _q_image_in(T, v)
        if need and not any(need <= im for im in imsets):
            raise HypothesisError(
                f"hypothesis (2) fails at {v!r}: q of its incoming edges lies in no single p-image", v)


def check_e_hypothesis(T: TextileSystem, Epart: GraphInsplitPartition) -> None:
    Epart.check(T.E)
    for u in T.F.sorted_vertices:
        need = _q_image_in(T, u)
        if need and not any(need <= c for c in Epart.classes[T.q.vertex_map[u]]):
            raise HypothesisError(
                f"vertex {u!r}: q of its incoming edges straddles classes at {T.q.vertex_map[u]!r}", u)


def check_g_hypothesis(T: TextileSystem, G: TwoGraphInsplitPartition) -> TwoGraph:
    L = textile_to_twograph(T)
    ok, bad = check_pairing(L, G)
    if not ok:
        v = bad[0]
        raise PairingError(f"pairing fails at square {v.square} (left {v.left}, bottom {v.bottom})", bad)
    return L


def normalize_fpart(T: TextileSystem, Fpart: GraphInsplitPartition) -> GraphInsplitPartition:
    """Reorder classes so that p(F_v^i) = p(F_w^i) whenever p(v) = p(w);
    the lexicographically least vertex over each z fixes the order."""
    anchors = {}
    out = {}
    for v in T.F.sorted_vertices:
        cs = Fpart.classes[v]
        if not T.F.in_edges(v):
            out[v] = cs
            continue
        z = T.p.vertex_map[v]
        if z not in anchors:
            anchors[z] = [_p_image(T, c) for c in cs]
            out[v] = cs
            continue
        order = anchors[z]
        by_image = {_p_image(T, c): c for c in cs}
        assert set(by_image) == set(order), f"classes at {v!r} cannot be aligned with the anchor"
        out[v] = tuple(by_image[im] for im in order)
    return GraphInsplitPartition(out)


def e_from_f(T: TextileSystem, Fpart: GraphInsplitPartition) -> GraphInsplitPartition:
    """Epart with E_z^i = p(F_v^i) for the anchor v over z; Fpart must be normalized."""
    out = {}
    for v in T.F.sorted_vertices:
        z = T.p.vertex_map[v]
        if z not in out and T.F.in_edges(v):
            out[z] = tuple(_p_image(T, c) for c in Fpart.classes[v])
    for z in T.E.vertices:
        out.setdefault(z, (frozenset(T.E.in_edges(z)),))
    return GraphInsplitPartition(out)


def derive_partitions(T: TextileSystem, kind: str, partition) -> DerivedPartitions:
    """Populate all three partitions from one of them (kind is "G", "F" or "E")."""
    _require_lr(T)
    if kind == "G":
        check_g_hypothesis(T, partition)
        G = partition
        Fp, Ep = f_from_g(T, G), e_from_g(T, G)
    elif kind == "F":
        check_f_hypotheses(T, partition)
        Fp = normalize_fpart(T, partition)
        Ep = e_from_f(T, Fp)
        G = g_from_e(T, Ep)
    elif kind == "E":
        check_e_hypothesis(T, partition)
        Ep = partition
        Fp, G = f_from_e(T, Ep), g_from_e(T, Ep)
    else:
        raise ValueError(f"unknown partition kind {kind!r}")
    Fp.check(T.F)
    Ep.check(T.E)
    return DerivedPartitions(G, Fp, Ep, provenance=kind)


# the three constructions

def _tilde(T, Fpart, Epart, q_index_edge, q_index_vertex) -> TextileSystem:
    Ft, relF = insplit_graph(T.F, Fpart)
    Et, _ = insplit_graph(T.E, Epart)
    pv, qv, pe, qe = {}, {}, {}, {}
    for vi, (v, i) in relF.vertex_parent.items():
        pv[vi] = child(T.p.vertex_map[v], i)
        qv[vi] = child(T.q.vertex_map[v], q_index_vertex(v))
    for fi, (f, i) in relF.edge_parent.items():
        pe[fi] = child(T.p.edge_map[f], i)
        qe[fi] = child(T.q.edge_map[f], q_index_edge(f))
    return build_textile(Ft, Et, GraphHom(Ft, Et, pv, pe), GraphHom(Ft, Et, qv, qe))


def thm_priyanga(T: TextileSystem, G: TwoGraphInsplitPartition) -> TextileSystem:
    """Insplit F and E together along a pairing partition G of the 2-graph of T."""
    _require_lr(T)
    if set(T.E.r) - set(T.p.edge_map.values()):
        warnings.warn("p is not surjective; the construction is outside its usual setting")
    check_g_hypothesis(T, G)
    Fp, Ep = f_from_g(T, G), e_from_g(T, G)

    def g_class(v):
        return G.class_of(T.q.vertex_map[v], v)

    return _tilde(T, Fp, Ep, lambda f: g_class(T.F.s[f]), g_class)


def thm_lr_insplit(T: TextileSystem, Fpart: GraphInsplitPartition):
    """Build the LR system determined by an F-partition.  Returns ``(T~, G)``."""
    _require_lr(T)
    _require_p_onto_source_free(T)
    check_f_hypotheses(T, Fpart)
    Fp = normalize_fpart(T, Fpart)
    Ep = e_from_f(T, Fp)
    images = {}
    for w in T.F.sorted_vertices:
        for j, c in enumerate(Fp.classes[w], 1):
            images.setdefault(T.p.vertex_map[w], {})[_p_image(T, c)] = j

    def q_index(v):
        need = _q_image_in(T, v)
        hits = {j for im, j in images.get(T.q.vertex_map[v], {}).items() if need <= im}
        assert len(hits) == 1, f"ambiguous class for {v!r}"
        return hits.pop()

    Tt = _tilde(T, Fp, Ep, lambda f: q_index(T.F.s[f]), q_index)
    return Tt, g_from_e(T, Ep)


def thm_main_iii(T: TextileSystem, Epart: GraphInsplitPartition):
    """Build the LR system determined by an E-partition.  Returns ``(Fpart, G, T~)``."""
    _require_lr(T)
    _require_p_onto_source_free(T)
    check_e_hypothesis(T, Epart)
    Fp, G = f_from_e(T, Epart), g_from_e(T, Epart)

    def q_index(v):
        need = _q_image_in(T, v)
        return next(j for j, c in enumerate(Epart.classes[T.q.vertex_map[v]], 1) if need <= c)

    Tt = _tilde(T, Fp, Epart, lambda f: q_index(T.F.s[f]), q_index)
    return Fp, G, Tt


# the four-move reconstruction

class PipelineResult(NamedTuple):
    T_A: TextileSystem
    T_B: TextileSystem
    T_C: TextileSystem
    T_D: TextileSystem
    pruned: TextileSystem
    relabel: dict          # F_D edge (kept) -> square of the insplit 2-graph
    excluded: tuple        # F_D edges with mismatched indices
    partitions: DerivedPartitions

    @property
    def sizes(self) -> tuple:
        return (len(self.T_A.F.r), len(self.T_B.F.vertices), len(self.T_C.F.r),
                len(self.T_D.F.r), len(self.pruned.F.r))


def thm61_pipeline(T: TextileSystem, G: TwoGraphInsplitPartition) -> PipelineResult:
    """Insplit, invert, insplit, invert, then prune to matching indices."""
    _require_lr(T)
    check_g_hypothesis(T, G)
    Fp = f_from_g(T, G)
    T_A, relA = insplit_textile_jm_relabel(T, Fp)
    T_B = invert_textile(T_A)
    H = {}
    for e in T_B.F.sorted_vertices:
        z = T.E.s[e]
        incoming = T_B.F.in_edges(e)
        H[e] = tuple(
            frozenset(x for x in incoming if T.F.s[relA.edge_parent[x][0]] in c)
            for c in G.classes[z]) if incoming else (frozenset(),)
    Hpart = GraphInsplitPartition(H)
    T_C, relC = insplit_textile_jm_relabel(T_B, Hpart)
    T_D = invert_textile(T_C)
    keep, rename, excluded = [], {}, []
    for x in T_D.F.edges:
        parent, j = relC.edge_parent[x]
        lam, i = relA.edge_parent[parent]
        if i == j:
            keep.append(x)
            rename[x] = child(lam, i)
        else:
            excluded.append(x)
    pruned = restrict_edges(T_D, keep, rename)
    parts = DerivedPartitions(G, Fp, e_from_g(T, G), Hpart, "G")
    return PipelineResult(T_A, T_B, T_C, T_D, pruned, rename, tuple(excluded), parts)


# agreement of the three routes

@dataclass
class EquivalenceReport:
    start: str
    mismatches: list = field(default_factory=list)
    partitions: Optional[DerivedPartitions] = None
    systems: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def roundtrip_equivalences(T: TextileSystem, start: str, partition) -> EquivalenceReport:
    rep = EquivalenceReport(start)
    d = derive_partitions(T, start, partition)
    rep.partitions = d
    G, Fp, Ep = d.G, d.Fpart, d.Epart

    def same(name, a, b):
        if a != b:
            rep.mismatches.append(f"{name}: {_fmt(a)}  !=  {_fmt(b)}")

    # cycle through every pair of routes
    same("F from G", f_from_g(T, G), Fp)
    same("E from G", e_from_g(T, G), Ep)
    same("E from F", e_from_f(T, normalize_fpart(T, Fp)), Ep)
    same("G from E", g_from_e(T, Ep), G)
    same("F from E", f_from_e(T, Ep), Fp)
    if start == "G":
        same("G recovered", g_from_e(T, e_from_f(T, Fp)), partition)
    elif start == "F":
        same("F recovered", f_from_e(T, e_from_g(T, G)), normalize_fpart(T, partition))
    else:
        same("E recovered", e_from_f(T, f_from_g(T, g_from_e(T, Ep))), partition)

    t72 = thm_priyanga(T, G)
    t76, g76 = thm_lr_insplit(T, Fp)
    _, g713, t713 = thm_main_iii(T, Ep)
    rep.systems = {"G": t72, "F": t76, "E": t713}
    same("G from F construction", g76, G)
    same("G from E construction", g713, G)
    if t72 != t76:
        rep.mismatches.append("G- and F-constructions give different systems")
    if t72 != t713:
        rep.mismatches.append("G- and E-constructions give different systems")
    LI, _ = insplit_twograph(textile_to_twograph(T), G)
    for k, Tt in rep.systems.items():
        if not lifting_report(Tt).is_LR:
            rep.mismatches.append(f"{k}-construction is not LR")
        elif textile_to_twograph(Tt) != LI:
            rep.mismatches.append(f"{k}-construction does not match the insplit 2-graph")
    return rep


def twograph_insplit_textile(T: TextileSystem, G: TwoGraphInsplitPartition) -> TextileSystem:
    """T_{Lambda_I}: the textile system of the insplit 2-graph."""
    LI, _ = insplit_twograph(textile_to_twograph(T), G)
    return twograph_to_textile(LI)
