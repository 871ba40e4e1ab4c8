"""Brute-force reference implementations, written without the package's
search code so that they can cross-check it."""
import itertools


def blocks_bruteforce(T, m, n):
    """All |F1|^(m*n) arrays filtered cell by cell."""
    F, p, q = T.F, T.p.edge_map, T.q.edge_map
    out = []
    for cells in itertools.product(sorted(F.r), repeat=m * n):
        rows = [cells[y * m:(y + 1) * m] for y in range(n)]
        ok = all(F.s[rows[y][x]] == F.r[rows[y][x + 1]] for y in range(n) for x in range(m - 1))
        ok = ok and all(p[rows[y][x]] == q[rows[y + 1][x]] for y in range(n - 1) for x in range(m))
        if ok:
            out.append(tuple(rows))
    return out


def lifts_bruteforce(T, row):
    """Every row y with q(y_i) = p(row_i) and s(y_i) = r(y_{i+1})."""
    F, p, q = T.F, T.p.edge_map, T.q.edge_map
    return [y for y in itertools.product(sorted(F.r), repeat=len(row))
            if all(q[y[i]] == p[row[i]] for i in range(len(row)))
            and all(F.s[y[i]] == F.r[y[i + 1]] for i in range(len(row) - 1))]


def lifting_flags_bruteforce(T):
    """The eight lifting flags from direct counting over all (vertex, edge) pairs."""
    F, E = T.F, T.E
    flags = {}
    for hn, h in (("p", T.p), ("q", T.q)):
        for end in ("r", "s"):
            eF, eE = getattr(F, end), getattr(E, end)
            counts = [sum(1 for f in F.r if eF[f] == v and h.edge_map[f] == e)
                      for v in F.vertices for e in E.r if h.vertex_map[v] == eE[e]]
            flags[f"{hn}_{end}_lift"] = all(c >= 1 for c in counts)
            flags[f"{hn}_unique_{end}"] = all(c == 1 for c in counts)
    return flags


def set_partitions(items):
    """All set partitions of a list, by inserting each element into an existing block or a new one."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def pairing_partitions_bruteforce(L):
    """Per vertex: every set partition of the incoming edges respecting left ~ bottom."""
    g = L.graph
    out = {}
    for z in g.vertices:
        incoming = [e for e in g.r if g.r[e] == z]
        good = []
        for part in set_partitions(incoming):
            where = {x: i for i, blk in enumerate(part) for x in blk}
            if all(where[sq.left] == where[sq.bottom] for sq in L.squares.values()
                   if g.r[sq.left] == z):
                good.append(frozenset(frozenset(b) for b in part))
        out[z] = good
    return out
