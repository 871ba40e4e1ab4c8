"""Finite-window view of the tiling shift of a textile system.

Blocks are stored as rows listed bottom to top, cells left to right.  A block
is admissible when horizontally adjacent cells satisfy s(left) = r(right) and
vertically adjacent cells satisfy p(lower) = q(upper).
"""
from __future__ import annotations

import os
from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Optional, Sequence

from .errors import BlockMapError, HypothesisError, SizeGuardError, TextileError
from .graph import GraphInsplitPartition
from .textile import TextileSystem, insplit_textile_jm_relabel, lifting_report


def max_cells() -> int:
    return int(os.environ.get("TEXTILE2D_MAX_CELLS", "36"))


def max_frontier() -> int:
    return int(os.environ.get("TEXTILE2D_MAX_FRONTIER", "1000000"))


@dataclass(frozen=True, order=True)
class RectBlock:
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        if not rows or not rows[0] or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("a block needs equal-length nonempty rows")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def _make(cls, rows: tuple) -> "RectBlock":
        # trusted constructor: rows already a rectangular tuple of tuples
        obj = object.__new__(cls)
        object.__setattr__(obj, "rows", rows)
        return obj

    @property
    def width(self) -> int:
        return len(self.rows[0])

    @property
    def height(self) -> int:
        return len(self.rows)

    def cell(self, col: int, row: int) -> str:
        """0-based; row 0 is the bottom row."""
        return self.rows[row][col]

    def crop(self, col: int, row: int, width: int, height: int) -> "RectBlock":
        return RectBlock._make(tuple(r[col:col + width] for r in self.rows[row:row + height]))

    def relabel(self, mapping: Mapping[str, str]) -> "RectBlock":
        return RectBlock(tuple(tuple(mapping.get(x, x) for x in r) for r in self.rows))

    def __str__(self):
        return " / ".join(" ".join(r) for r in self.rows)


def block_violation(T: TextileSystem, b: RectBlock) -> Optional[str]:
    Fr, Fs, p, q = T.F.r, T.F.s, T.p.edge_map, T.q.edge_map
    rows = b.rows
    w, h = len(rows[0]), len(rows)
    for y, row in enumerate(rows):
        above = rows[y + 1] if y + 1 < h else None
        for x, f in enumerate(row):
            if f not in Fr:
                return f"cell ({x},{y}) holds {f!r}, not an edge of F"
            if x + 1 < w and Fs[f] != Fr[row[x + 1]]:
                return f"cells ({x},{y}) and ({x + 1},{y}) are not horizontally adjacent"
            if above is not None and p[f] != q[above[x]]:
                return f"cells ({x},{y}) and ({x},{y + 1}) are not vertically adjacent"
    return None


def is_admissible(T: TextileSystem, b: RectBlock) -> bool:
    return block_violation(T, b) is None


class _Index:
    def __init__(self, T: TextileSystem):
        F, p, q = T.F, T.p.edge_map, T.q.edge_map
        self.all = F.edges
        self.by_r, self.by_q, self.by_rq = defaultdict(list), defaultdict(list), defaultdict(list)
        for f in F.edges:
            self.by_r[F.r[f]].append(f)
            self.by_q[q[f]].append(f)
            self.by_rq[(F.r[f], q[f])].append(f)
        self.s, self.p = F.s, p


def enumerate_blocks(T: TextileSystem, m: int, n: int) -> tuple:
    """All locally admissible blocks of width m and height n, in lexicographic order."""
    if m < 1 or n < 1:
        raise ValueError("block sides must be positive")
    if m * n > max_cells():
        raise SizeGuardError(f"{m}x{n} exceeds the cell limit {max_cells()}")
    ix, budget = _Index(T), max_frontier()
    cells = [[None] * m for _ in range(n)]
    out, visited = [], 0

    def candidates(x, y):
        if x and y:
            return ix.by_rq.get((ix.s[cells[y][x - 1]], ix.p[cells[y - 1][x]]), ())
        if x:
            return ix.by_r.get(ix.s[cells[y][x - 1]], ())
        if y:
            return ix.by_q.get(ix.p[cells[y - 1][x]], ())
        return ix.all

    def rec(k):
        nonlocal visited
        if k == m * n:
            out.append(RectBlock._make(tuple(tuple(r) for r in cells)))
            return
        y, x = divmod(k, m)
        for f in candidates(x, y):
            visited += 1
            if visited > budget:
                raise SizeGuardError(f"search frontier exceeded {budget} nodes")
            cells[y][x] = f
            rec(k + 1)
        cells[y][x] = None

    rec(0)
    return tuple(out)


def extendable_blocks(T: TextileSystem, m: int, n: int) -> frozenset:
    """m x n blocks that occur as the lower-left corner of an admissible (m+1) x (n+1) block."""
    return frozenset(b.crop(0, 0, m, n) for b in enumerate_blocks(T, m + 1, n + 1))


def transpose_block(b: RectBlock, T: Optional[TextileSystem] = None) -> RectBlock:
    """Swap the two axes; the result is a block of the inverted system."""
    return RectBlock(tuple(zip(*b.rows)))


def _as_row(row) -> tuple:
    if isinstance(row, RectBlock):
        if row.height != 1:
            raise ValueError("expected a single row")
        return row.rows[0]
    return tuple(row)


def lift_row(T: TextileSystem, row, check: bool = True) -> RectBlock:
    """Find the lexicographically least row y with q(y_i) = p(row_i), horizontally admissible.

    With ``check`` the hypotheses (q has r-path lifting, q onto E^0) are
    verified first; under them the search never backtracks.
    """
    row = _as_row(row)
    if block_violation(T, RectBlock((row,))):
        raise TextileError("input row is not admissible")
    if check:
        rep = lifting_report(T)
        if not rep.q_r_lift:
            x = next(f for f in rep.failures if f.flag == "q_r_lift")
            raise HypothesisError(
                f"q lacks r-path lifting at vertex {x.vertex!r}, edge {x.edge!r}", x.vertex)
        missing = sorted(set(T.E.vertices) - set(T.q.vertex_map.values()))
        if missing:
            raise HypothesisError(f"q is not onto E^0: {missing} not hit", missing[0])
    ix = _Index(T)
    qv = T.q.vertex_map
    targets = [T.p.edge_map[f] for f in row]
    start = T.E.r[targets[0]]
    y = []

    def rec(k, prev):
        if k == len(targets):
            return True
        if prev is None:
            cand = [f for w in sorted(v for v in T.F.vertices if qv[v] == start)
                    for f in ix.by_rq.get((w, targets[0]), ())]
            cand.sort()
        else:
            cand = ix.by_rq.get((ix.s[prev], targets[k]), ())
        for f in cand:
            y.append(f)
            if rec(k + 1, f):
                return True
            y.pop()
        return False

    if not rec(0, None):
        raise TextileError(f"no lift exists for row {list(row)}")
    return RectBlock((tuple(y),))


def build_block_by_lifting(T: TextileSystem, base_row, height: int, check: bool = True) -> RectBlock:
    rows = [_as_row(base_row)]
    while len(rows) < height:
        rows.append(lift_row(T, rows[-1], check=check).rows[0])
    return RectBlock(tuple(rows))


def reconstruct_from_left_top(T: TextileSystem, lefts: Sequence[str], tops: Sequence[str]) -> Optional[RectBlock]:
    """Fill a block from the r-vertices of its left column (bottom to top) and
    the p-edges of its top row, using unique r-lifting of p."""
    pr = {}
    for f in T.F.edges:
        pr.setdefault((T.F.r[f], T.p.edge_map[f]), []).append(f)
    n, m = len(lefts), len(tops)
    rows = [None] * n
    above = list(tops)
    for y in range(n - 1, -1, -1):
        row, left = [], lefts[y]
        for x in range(m):
            hits = pr.get((left, above[x]), [])
            if len(hits) != 1:
                return None
            row.append(hits[0])
            left = T.F.s[hits[0]]
        rows[y] = tuple(row)
        above = [T.q.edge_map[f] for f in row]
    return RectBlock(tuple(rows))


def reconstruct_from_bottom_right(T: TextileSystem, bottoms: Sequence[str], rights: Sequence[str]) -> Optional[RectBlock]:
    """Fill a block from the q-edges of its bottom row and the s-vertices of its
    right column (bottom to top), using unique s-lifting of q."""
    qs = {}
    for f in T.F.edges:
        qs.setdefault((T.F.s[f], T.q.edge_map[f]), []).append(f)
    m, n = len(bottoms), len(rights)
    rows = []
    below = list(bottoms)
    for y in range(n):
        row, right = [None] * m, rights[y]
        for x in range(m - 1, -1, -1):
            hits = qs.get((right, below[x]), [])
            if len(hits) != 1:
                return None
            row[x] = hits[0]
            right = T.F.r[hits[0]]
        rows.append(tuple(row))
        below = [T.p.edge_map[f] for f in row]
    return RectBlock(tuple(rows))


def block_boundary(T: TextileSystem, b: RectBlock) -> dict:
    return {
        "lefts": [T.F.r[r[0]] for r in b.rows],
        "tops": [T.p.edge_map[f] for f in b.rows[-1]],
        "bottoms": [T.q.edge_map[f] for f in b.rows[0]],
        "rights": [T.F.s[r[-1]] for r in b.rows],
    }


@dataclass(frozen=True)
class BlockMap:
    window: tuple                 # (l1, l2): extra columns, extra rows
    table: Mapping[RectBlock, str]

    def __post_init__(self):
        object.__setattr__(self, "window", tuple(self.window))
        object.__setattr__(self, "table", dict(self.table))
        object.__setattr__(self, "raw_table", {k.rows: v for k, v in self.table.items()})
        # windows one row tall are looked up by the row slice alone
        object.__setattr__(self, "row_table", {k.rows[0]: v for k, v in self.table.items()
                                               if k.height == 1})

    __hash__ = None


def apply_block_map(bm: BlockMap, b: RectBlock) -> RectBlock:
    l1, l2 = bm.window
    rows = b.rows
    w, h = len(rows[0]) - l1, len(rows) - l2
    if w < 1 or h < 1:
        raise BlockMapError(f"a {b.width}x{b.height} block is too small for window {bm.window}")
    try:
        if l2 == 0:
            table = bm.row_table
            out = tuple(tuple([table[r[x:x + l1 + 1]] for x in range(w)]) for r in rows)
        else:
            table = bm.raw_table
            out = tuple(tuple([table[tuple(r[x:x + l1 + 1] for r in rows[y:y + l2 + 1])]
                               for x in range(w)]) for y in range(h))
    except KeyError as exc:
        win = exc.args[0]
        win = win if l2 else (win,)
        raise BlockMapError(f"no table entry for window {RectBlock._make(win)}") from None
    return RectBlock._make(out)


def identity_block_map(T: TextileSystem) -> BlockMap:
    return BlockMap((0, 0), {RectBlock(((f,),)): f for f in T.F.edges})


def block_map_violation(bm: BlockMap, src: TextileSystem, tgt: TextileSystem) -> Optional[str]:
    """Check that the table covers every admissible window and that images of
    adjacent windows are adjacent in the target."""
    l1, l2 = bm.window
    dom = set(enumerate_blocks(src, l1 + 1, l2 + 1))
    if dom != set(bm.table):
        return "table domain differs from the admissible windows of the source"
    for b in enumerate_blocks(src, l1 + 2, l2 + 1) + enumerate_blocks(src, l1 + 1, l2 + 2):
        img = apply_block_map(bm, b)
        if not is_admissible(tgt, img):
            return f"block {b} maps to non-admissible {img}"
    return None


class JMConjugacy(NamedTuple):
    phi: BlockMap     # T_I -> T, 0-block map
    psi: BlockMap     # T -> T_I, window one column wide
    TI: TextileSystem


def jm_conjugacy_block_maps(T: TextileSystem, P: GraphInsplitPartition) -> JMConjugacy:
    TI, rel = insplit_textile_jm_relabel(T, P)
    child_of = {parent_j: c for c, parent_j in rel.edge_parent.items()}
    phi = {RectBlock(((fj,),)): f for fj, (f, _) in rel.edge_parent.items()}
    psi = {}
    for b in enumerate_blocks(T, 2, 1):
        f, g = b.rows[0]
        psi[b] = child_of[(f, P.class_of(T.F.s[f], g))]
    out = JMConjugacy(BlockMap((0, 0), phi), BlockMap((1, 0), psi), TI)
    assert block_map_violation(out.phi, TI, T) is None
    assert block_map_violation(out.psi, T, TI) is None
    return out


class ConjugacyReport(NamedTuple):
    ok: bool
    blocks_checked: int
    counterexample: Optional[str]


def verify_conjugacy_on_blocks(T1: TextileSystem, T2: TextileSystem, phi: BlockMap,
                               psi: BlockMap, max_size=(4, 4)) -> ConjugacyReport:
    """phi: T1 -> T2 and psi: T2 -> T1.  For every admissible block up to
    ``max_size``, images must be admissible and both round trips must equal
    the lower-left crop of the input."""
    if isinstance(max_size, int):
        max_size = (max_size, max_size)
    checked = 0
    sides = ((T1, T2, phi, psi, "phi"), (T2, T1, psi, phi, "psi"))
    for m in range(1, max_size[0] + 1):
        for n in range(1, max_size[1] + 1):
            for src, tgt, f, g, name in sides:
                if m <= f.window[0] or n <= f.window[1]:
                    continue
                for b in enumerate_blocks(src, m, n):
                    checked += 1
                    try:
                        img = apply_block_map(f, b)
                    except BlockMapError as exc:
                        return ConjugacyReport(False, checked, f"{name} on {b}: {exc}")
                    bad = block_violation(tgt, img)
                    if bad:
                        return ConjugacyReport(False, checked, f"{name} sends {b} to {img}: {bad}")
                    if img.width <= g.window[0] or img.height <= g.window[1]:
                        continue
                    try:
                        back = apply_block_map(g, img)
                    except BlockMapError as exc:
                        return ConjugacyReport(False, checked, f"round trip of {b}: {exc}")
                    if back != b.crop(0, 0, back.width, back.height):
                        return ConjugacyReport(False, checked, f"round trip of {b} gives {back}")
    return ConjugacyReport(True, checked, None)
