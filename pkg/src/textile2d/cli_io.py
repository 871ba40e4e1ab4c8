"""Reading and writing the line-oriented spec format.

Grammar (one statement per line, ``#`` starts a comment)::

    format 1
    [graph NAME]
    vertex LABEL [LABEL ...]
    edge ID : SOURCE -> RANGE
    [hom NAME : DOMAIN -> CODOMAIN]
    map LABEL TARGET            # LABEL is a vertex or an edge of DOMAIN
    [textile NAME]
    F GRAPH
    E GRAPH
    p HOM
    q HOM
    [twograph NAME]
    vertex LABEL [LABEL ...]
    edge ID : SOURCE -> RANGE color 1|2
    square ID : left L top T right R bottom B
    [partition NAME : graph GRAPH]        # insplit partition of a graph
    [partition NAME : twograph TWOGRAPH]  # pairing partition of a 2-graph
    class VERTEX INDEX = {LABEL, LABEL, ...}
    [blocks NAME : system TEXTILE size MxN]
    block ROW / ROW / ...                 # rows bottom to top
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from .errors import ParseError, TextileError
from .graph import DirectedGraph, GraphHom, GraphInsplitPartition
from .shiftspace import RectBlock
from .textile import TextileSystem, build_textile
from .twograph import (CommutingSquare, TwoColoredGraph, TwoGraph, TwoGraphInsplitPartition,
                       validate_twograph)

FORMAT_VERSION = 1
_LABEL = r"[^\s,{}:=/\[\]#]+"
_SECTION = re.compile(r"^\[(\w+)\s+(" + _LABEL + r")(?:\s*:\s*(.*))?\]$")
_EDGE = re.compile(rf"^edge\s+({_LABEL})\s*:\s*({_LABEL})\s*->\s*({_LABEL})(?:\s+color\s+([12]))?$")
_SQUARE = re.compile(rf"^square\s+({_LABEL})\s*:\s*left\s+({_LABEL})\s+top\s+({_LABEL})"
                     rf"\s+right\s+({_LABEL})\s+bottom\s+({_LABEL})$")
_CLASS = re.compile(rf"^class\s+({_LABEL})\s+(\d+)\s*=\s*\{{(.*)\}}$")
_HOMHDR = re.compile(rf"^({_LABEL})\s*->\s*({_LABEL})$")
_PARTHDR = re.compile(rf"^(graph|twograph)\s+({_LABEL})$")
_BLOCKHDR = re.compile(rf"^system\s+({_LABEL})\s+size\s+(\d+)x(\d+)$")


@dataclass
class PartitionEntry:
    kind: str        # "graph" or "twograph"
    target: str
    partition: object


@dataclass
class BlockSet:
    system: str
    size: tuple
    blocks: list


@dataclass
class SpecDocument:
    format_version: int = FORMAT_VERSION
    graphs: dict = field(default_factory=dict)
    homs: dict = field(default_factory=dict)          # name -> (GraphHom, domain, codomain)
    textiles: dict = field(default_factory=dict)      # name -> (TextileSystem, F, E, p, q)
    twographs: dict = field(default_factory=dict)
    partitions: dict = field(default_factory=dict)
    blocks: dict = field(default_factory=dict)

    def textile(self, name: str) -> TextileSystem:
        try:
            return self.textiles[name][0]
        except KeyError:
            raise TextileError(f"no textile system named {name!r}") from None

    def twograph(self, name: str) -> TwoGraph:
        try:
            return self.twographs[name]
        except KeyError:
            raise TextileError(f"no 2-graph named {name!r}") from None

    def partition(self, name: str) -> PartitionEntry:
        try:
            return self.partitions[name]
        except KeyError:
            raise TextileError(f"no partition named {name!r}") from None

    def add_textile(self, name: str, T: TextileSystem) -> None:
        F, E, p, q = f"{name}.F", f"{name}.E", f"{name}.p", f"{name}.q"
        self.graphs[F], self.graphs[E] = T.F, T.E
        self.homs[p] = (T.p, F, E)
        self.homs[q] = (T.q, F, E)
        self.textiles[name] = (T, F, E, p, q)

    def add_partition(self, name: str, kind: str, target: str, P) -> None:
        self.partitions[name] = PartitionEntry(kind, target, P)


def _split_labels(text: str) -> list:
    return [t.strip() for t in text.split(",") if t.strip()]


def parse_spec(text: str) -> SpecDocument:
    doc = SpecDocument()
    errors = []
    sections = []  # (kind, name, header-arg, line, body lines)
    cur = None
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            m = _SECTION.match(line)
            if not m:
                errors.append((ln, f"malformed section header {line!r}"))
                cur = None
                continue
            cur = (m.group(1), m.group(2), (m.group(3) or "").strip(), ln, [])
            sections.append(cur)
        elif cur is None:
            if line.startswith("format"):
                parts = line.split()
                if len(parts) != 2 or parts[1] != str(FORMAT_VERSION):
                    errors.append((ln, f"unsupported format line {line!r}"))
            else:
                errors.append((ln, f"statement outside any section: {line!r}"))
        else:
            cur[4].append((ln, line))
    seen_names = set()
    for kind, name, arg, ln, body in sections:
        if name in seen_names:
            errors.append((ln, f"duplicate section name {name!r}"))
            continue
        seen_names.add(name)
        handler = _HANDLERS.get(kind)
        if handler is None:
            errors.append((ln, f"unknown section kind {kind!r}"))
            continue
        try:
            handler(doc, name, arg, ln, body, errors)
        except TextileError as exc:
            errors.append((ln, f"{kind} {name}: {exc}"))
        except ValueError as exc:
            errors.append((ln, f"{kind} {name}: {exc}"))
    if errors:
        raise ParseError(errors)
    return doc


def _vertices_edges(body, errors, colored=False):
    vertices, edges, squares, order = [], [], [], []
    for ln, line in body:
        if line.startswith("vertex "):
            vertices.extend((ln, v) for v in line.split()[1:])
        elif line.startswith("edge "):
            m = _EDGE.match(line)
            if not m or (m.group(4) is None) == colored:
                errors.append((ln, f"malformed edge line {line!r}"))
                continue
            edges.append((ln, m.group(1), m.group(2), m.group(3), m.group(4)))
        elif colored and line.startswith("square "):
            m = _SQUARE.match(line)
            if not m:
                errors.append((ln, f"malformed square line {line!r}"))
                continue
            squares.append((ln,) + m.groups())
        else:
            errors.append((ln, f"unexpected statement {line!r}"))
    return vertices, edges, squares


def _check_unique(items, errors, what):
    seen = {}
    for ln, lab in items:
        if lab in seen:
            errors.append((ln, f"{what} label {lab!r} already used on line {seen[lab]}"))
        else:
            seen[lab] = ln
    return seen


def _graph(doc, name, arg, ln, body, errors):
    if arg:
        errors.append((ln, "graph headers take no argument"))
    nerr = len(errors)
    vertices, edges, _ = _vertices_edges(body, errors)
    vs = _check_unique(vertices, errors, "vertex")
    es = _check_unique([(e[0], e[1]) for e in edges], errors, "edge")
    for lab in set(vs) & set(es):
        errors.append((es[lab], f"label {lab!r} is both a vertex and an edge"))
    for eln, e, src, rng, _ in edges:
        for v in (src, rng):
            if v not in vs:
                errors.append((eln, f"edge {e!r} refers to undefined vertex {v!r}"))
    if len(errors) == nerr:
        doc.graphs[name] = DirectedGraph.from_edges(vs, [(e, s, r) for _, e, s, r, _ in edges])


def _hom(doc, name, arg, ln, body, errors):
    m = _HOMHDR.match(arg)
    if not m:
        errors.append((ln, "hom header must read [hom NAME : DOMAIN -> CODOMAIN]"))
        return
    dn, cn = m.groups()
    for g in (dn, cn):
        if g not in doc.graphs:
            errors.append((ln, f"hom {name!r} refers to undefined graph {g!r}"))
            return
    dom, cod = doc.graphs[dn], doc.graphs[cn]
    vm, em = {}, {}
    for bln, line in body:
        parts = line.split()
        if len(parts) != 3 or parts[0] != "map":
            errors.append((bln, f"expected 'map LABEL TARGET', got {line!r}"))
            continue
        x, y = parts[1], parts[2]
        if x in dom.vertices:
            if x in vm:
                errors.append((bln, f"vertex {x!r} mapped twice"))
            vm[x] = y
        elif x in dom.r:
            if x in em:
                errors.append((bln, f"edge {x!r} mapped twice"))
            em[x] = y
        else:
            errors.append((bln, f"{x!r} is not a vertex or edge of {dn!r}"))
    doc.homs[name] = (GraphHom(dom, cod, vm, em), dn, cn)


def _textile(doc, name, arg, ln, body, errors):
    refs = {}
    for bln, line in body:
        parts = line.split()
        if len(parts) != 2 or parts[0] not in ("F", "E", "p", "q"):
            errors.append((bln, f"expected one of F/E/p/q and a name, got {line!r}"))
            continue
        refs[parts[0]] = (bln, parts[1])
    missing = [k for k in ("F", "E", "p", "q") if k not in refs]
    if missing:
        errors.append((ln, f"textile {name!r} lacks {missing}"))
        return
    for k, table in (("F", doc.graphs), ("E", doc.graphs), ("p", doc.homs), ("q", doc.homs)):
        if refs[k][1] not in table:
            errors.append((refs[k][0], f"undefined reference {refs[k][1]!r}"))
            return
    F, E = doc.graphs[refs["F"][1]], doc.graphs[refs["E"][1]]
    for k in ("p", "q"):
        _, dn, cn = doc.homs[refs[k][1]]
        if (dn, cn) != (refs["F"][1], refs["E"][1]):
            errors.append((refs[k][0], f"{k} must map {refs['F'][1]} to {refs['E'][1]}"))
            return
    pools = {"F0": F.vertices, "F1": set(F.r), "E0": E.vertices, "E1": set(E.r)}
    keys = sorted(pools)
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            clash = set(pools[a]) & set(pools[b])
            if clash:
                errors.append((ln, f"labels {sorted(clash)} are shared by {a} and {b}"))
                return
    T = build_textile(F, E, doc.homs[refs["p"][1]][0], doc.homs[refs["q"][1]][0])
    doc.textiles[name] = (T, refs["F"][1], refs["E"][1], refs["p"][1], refs["q"][1])


def _twograph(doc, name, arg, ln, body, errors):
    nerr = len(errors)
    vertices, edges, squares = _vertices_edges(body, errors, colored=True)
    vs = _check_unique(vertices, errors, "vertex")
    es = _check_unique([(e[0], e[1]) for e in edges], errors, "edge")
    ss = _check_unique([(s[0], s[1]) for s in squares], errors, "square")
    for a, b in ((vs, es), (vs, ss), (es, ss)):
        for lab in set(a) & set(b):
            errors.append((b[lab], f"label {lab!r} is reused across namespaces"))
    for eln, e, src, rng, _ in edges:
        for v in (src, rng):
            if v not in vs:
                errors.append((eln, f"edge {e!r} refers to undefined vertex {v!r}"))
    for sln, lab, *sides in squares:
        for x in sides:
            if x not in es:
                errors.append((sln, f"square {lab!r} refers to undefined edge {x!r}"))
    if len(errors) != nerr:
        return
    g = DirectedGraph.from_edges(vs, [(e, s, r) for _, e, s, r, _ in edges])
    sk = TwoColoredGraph(g, {e: int(c) for _, e, _, _, c in edges})
    sq = {lab: CommutingSquare(lab, top=t, left=lft, bottom=b, right=rt)
          for _, lab, lft, t, rt, b in squares}
    doc.twographs[name] = validate_twograph(sk, sq)


def _partition(doc, name, arg, ln, body, errors):
    m = _PARTHDR.match(arg)
    if not m:
        errors.append((ln, "partition header must read [partition NAME : graph|twograph TARGET]"))
        return
    kind, target = m.groups()
    if kind == "graph":
        if target not in doc.graphs:
            errors.append((ln, f"undefined graph {target!r}"))
            return
        g = doc.graphs[target]
    else:
        if target not in doc.twographs:
            errors.append((ln, f"undefined 2-graph {target!r}"))
            return
        g = doc.twographs[target].graph
    classes = {}
    for bln, line in body:
        cm = _CLASS.match(line)
        if not cm:
            errors.append((bln, f"malformed class line {line!r}"))
            continue
        z, idx, items = cm.group(1), int(cm.group(2)), _split_labels(cm.group(3))
        if z not in g.vertices:
            errors.append((bln, f"{z!r} is not a vertex of {target!r}"))
            continue
        for x in items:
            if x not in g.r:
                errors.append((bln, f"{x!r} is not an edge of {target!r}"))
        classes.setdefault(z, {})[idx] = frozenset(items)
    ordered = {}
    for z, byidx in classes.items():
        if sorted(byidx) != list(range(1, len(byidx) + 1)):
            errors.append((ln, f"class indices at {z!r} must be 1..m"))
            continue
        ordered[z] = tuple(byidx[i] for i in range(1, len(byidx) + 1))
    for z in g.vertices:
        ordered.setdefault(z, (frozenset(g.in_edges(z)),))  # unlisted vertices: one class
    if kind == "graph":
        P = GraphInsplitPartition(ordered)
        P.check(g)
    else:
        P = TwoGraphInsplitPartition(ordered)
        P.check_cover(g)
    doc.partitions[name] = PartitionEntry(kind, target, P)


def _blocks(doc, name, arg, ln, body, errors):
    m = _BLOCKHDR.match(arg)
    if not m:
        errors.append((ln, "blocks header must read [blocks NAME : system T size MxN]"))
        return
    bs = []
    for bln, line in body:
        if not line.startswith("block "):
            errors.append((bln, f"expected a block line, got {line!r}"))
            continue
        rows = [tuple(r.split()) for r in line[len("block "):].split("/")]
        try:
            bs.append(RectBlock(tuple(rows)))
        except ValueError as exc:
            errors.append((bln, str(exc)))
    doc.blocks[name] = BlockSet(m.group(1), (int(m.group(2)), int(m.group(3))), bs)


_HANDLERS = {"graph": _graph, "hom": _hom, "textile": _textile, "twograph": _twograph,
             "partition": _partition, "blocks": _blocks}


# serialization

def _ser_graph(name, g):
    out = [f"[graph {name}]"]
    if g.vertices:
        out.append("vertex " + " ".join(g.sorted_vertices))
    out += [f"edge {e} : {g.s[e]} -> {g.r[e]}" for e in g.edges]
    return out


def _ser_hom(name, h, dn, cn):
    out = [f"[hom {name} : {dn} -> {cn}]"]
    out += [f"map {v} {h.vertex_map[v]}" for v in h.domain.sorted_vertices]
    out += [f"map {e} {h.edge_map[e]}" for e in h.domain.edges]
    return out


def _ser_twograph(name, L):
    g, d = L.graph, L.skeleton.degree
    out = [f"[twograph {name}]"]
    if g.vertices:
        out.append("vertex " + " ".join(g.sorted_vertices))
    out += [f"edge {e} : {g.s[e]} -> {g.r[e]} color {d[e]}" for e in g.edges]
    for lab in sorted(L.squares):
        sq = L.squares[lab]
        out.append(f"square {lab} : left {sq.left} top {sq.top} right {sq.right} bottom {sq.bottom}")
    return out


def _ser_partition(name, entry):
    out = [f"[partition {name} : {entry.kind} {entry.target}]"]
    for z in sorted(entry.partition.classes):
        for i, c in enumerate(entry.partition.classes[z], 1):
            out.append(f"class {z} {i} = {{{', '.join(sorted(c))}}}")
    return out


def serialize(doc: SpecDocument) -> str:
    out = [f"format {doc.format_version}", ""]
    for n in sorted(doc.graphs):
        out += _ser_graph(n, doc.graphs[n]) + [""]
    for n in sorted(doc.homs):
        out += _ser_hom(n, *doc.homs[n]) + [""]
    for n in sorted(doc.textiles):
        _, F, E, p, q = doc.textiles[n]
        out += [f"[textile {n}]", f"F {F}", f"E {E}", f"p {p}", f"q {q}", ""]
    for n in sorted(doc.twographs):
        out += _ser_twograph(n, doc.twographs[n]) + [""]
    for n in sorted(doc.partitions):
        out += _ser_partition(n, doc.partitions[n]) + [""]
    for n in sorted(doc.blocks):
        b = doc.blocks[n]
        out.append(f"[blocks {n} : system {b.system} size {b.size[0]}x{b.size[1]}]")
        out += [f"block {blk}" for blk in b.blocks] + [""]
    return "\n".join(out).rstrip("\n") + "\n"


def load_spec(path) -> SpecDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


def fixture_text(name: str) -> str:
    return resources.files("textile2d").joinpath("fixtures", name).read_text(encoding="utf-8")


def load_fixture(name: str) -> SpecDocument:
    """Parse one of the bundled example files, e.g. ``"path3.spec"``."""
    return parse_spec(fixture_text(name))


def fixture_names() -> list:
    d = resources.files("textile2d").joinpath("fixtures")
    return sorted(p.name for p in d.iterdir() if p.name.endswith(".spec"))
