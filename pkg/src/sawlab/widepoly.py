"""Wide polygons, the side-by-side plaquette join, the bridge-to-polygon count check
and round honeycomb polygons."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .enumerate import X_CRIT, count_square, hex_polygons, sap_traces
from .lattice import axis_mid, edge as hex_edge, hex_neighbors, lambda_faces, face_vertices, vertex_xy
from .walkmodel import PolygonTrace, SqEdge, Site, diameter, geometry_of_sites, sq_edge

SQ, HEX = "z2", "hex"


# ---------------------------------------------------------------- wide polygons


def hex_geometry(edges: Iterable) -> Tuple[Fraction, int]:
    """(line-width, vertical span in chart units) of a honeycomb edge set.

    Line-width is measured along vertex levels in face-width units; the span is
    the difference of chart q coordinates (one unit is sqrt(3)/6 face widths).
    """
    rows: Dict[int, List[int]] = {}
    for e in edges:
        for v in e:
            X, Y = vertex_xy(v)
            rows.setdefault(Y, []).append(X)
    lw = max(max(r) - min(r) for r in rows.values())
    return Fraction(lw, 6), max(rows) - min(rows)


def is_wide(poly, u: float, lattice: str = SQ) -> bool:
    """Lw >= u and h <= 16u."""
    if lattice == SQ:
        sites = poly.vertices if isinstance(poly, PolygonTrace) else {v for e in poly for v in e}
        g = geometry_of_sites(sites)
        return g.lw >= u and g.h <= 16 * u
    lw, dq = hex_geometry(poly)
    # Euclidean height is dq * sqrt(3) / 6, compared squared to stay exact
    return lw >= u and Fraction(dq * dq, 12) <= (16 * Fraction(u)) ** 2


@lru_cache(maxsize=None)
def _square_table(m_max: int):
    return sap_traces(m_max)


@lru_cache(maxsize=None)
def _hex_table(m_max: int):
    return hex_polygons(m_max)


def wide_polygons(u: float, m: int, lattice: str = SQ) -> list:
    if lattice == SQ:
        pool = _square_table(max(m, 4)).get(m, [])
    elif lattice == HEX:
        pool = _hex_table(max(m, 6)).get(m, [])
    else:
        raise ValueError(f"unknown lattice {lattice!r}")
    return [p for p in pool if is_wide(p, u, lattice)]


def wsap_count(u: float, m: int, lattice: str = SQ) -> int:
    return len(wide_polygons(u, m, lattice))


# ---------------------------------------------------------------- plaquette join


def _verts(edges) -> set:
    return {v for e in edges for v in e}


def ws_vertex(edges) -> Site:
    """Lowest among the leftmost vertices."""
    vs = _verts(edges)
    x0 = min(v[0] for v in vs)
    return (x0, min(v[1] for v in vs if v[0] == x0))


def en_vertex(edges) -> Site:
    """Highest among the rightmost vertices."""
    vs = _verts(edges)
    x1 = max(v[0] for v in vs)
    return (x1, max(v[1] for v in vs if v[0] == x1))


def _shift(edges, dx: int, dy: int) -> FrozenSet[SqEdge]:
    return frozenset(sq_edge((a[0] + dx, a[1] + dy), (b[0] + dx, b[1] + dy)) for a, b in edges)


def _mirror(edges) -> FrozenSet[SqEdge]:
    return frozenset(sq_edge((-a[0], a[1]), (-b[0], b[1])) for a, b in edges)


def ws_rooted(poly) -> FrozenSet[SqEdge]:
    edges = poly.edges if isinstance(poly, PolygonTrace) else poly
    x, y = ws_vertex(edges)
    return _shift(edges, -x, -y)


def in_overbar_class(poly, u: float) -> bool:
    """w >= u/2 and h <= u."""
    edges = poly.edges if isinstance(poly, PolygonTrace) else poly
    g = geometry_of_sites(_verts(edges))
    return 2 * g.w >= u and g.h <= u


def plaquette_join_J(p, q, u: Optional[float] = None) -> FrozenSet[SqEdge]:
    """Place the mirror image of q just right of p and fuse them through one plaquette.

    Returns the joined edge set with its lowest-leftmost vertex at the origin.
    """
    pe, qe = ws_rooted(p), ws_rooted(q)
    if u is not None and not (in_overbar_class(pe, u) and in_overbar_class(qe, u)):
        raise ValueError("inputs must satisfy w >= u/2 and h <= u")
    ex, ey = en_vertex(pe)
    if en_vertex(qe)[1] != ey:
        raise ValueError("inputs must have their upper-right corners at the same height")
    mq = _mirror(qe)
    # en_vertex of q becomes the highest-leftmost vertex of its mirror image
    xl = min(v[0] for v in _verts(mq))
    mq = _shift(mq, ex + 1 - xl, 0)
    west = sq_edge((ex, ey - 1), (ex, ey))
    east = sq_edge((ex + 1, ey - 1), (ex + 1, ey))
    if west not in pe or east not in mq:
        raise ValueError("plaquette sides missing; inputs are not valid polygons")
    out = (set(pe) | set(mq)) - {west, east}
    out |= {sq_edge((ex, ey), (ex + 1, ey)), sq_edge((ex, ey - 1), (ex + 1, ey - 1))}
    return frozenset(out)


def _components(edges) -> List[FrozenSet[SqEdge]]:
    adj: Dict[Site, List[SqEdge]] = {}
    for e in edges:
        for v in e:
            adj.setdefault(v, []).append(e)
    left = set(edges)
    out = []
    while left:
        e0 = left.pop()
        comp = {e0}
        todo = [e0[0], e0[1]]
        while todo:
            v = todo.pop()
            for e in adj[v]:
                if e in left:
                    left.discard(e)
                    comp.add(e)
                    todo.extend(e)
        out.append(frozenset(comp))
    return out


def unjoin_candidates(r) -> List[Tuple[FrozenSet[SqEdge], FrozenSet[SqEdge]]]:
    """Every cut line x = k + 1/2 through two stacked horizontal edges whose swap leaves
    two polygons, the one through the origin holding half the edges."""
    re = ws_rooted(r)
    half = len(re) // 2
    out = []
    for a, b in sorted(re):
        if a[1] != b[1]:
            continue
        (k, y) = a
        lower = sq_edge((k, y - 1), (k + 1, y - 1))
        if lower not in re:
            continue
        west = sq_edge((k, y - 1), (k, y))
        east = sq_edge((k + 1, y - 1), (k + 1, y))
        if west in re or east in re:
            continue
        cut = (set(re) - {sq_edge(a, b), lower}) | {west, east}
        comps = _components(cut)
        if len(comps) != 2:
            continue
        home = [c for c in comps if (0, 0) in _verts(c)]
        if len(home) != 1 or len(home[0]) != half:
            continue
        other = comps[0] if comps[1] is home[0] else comps[1]
        out.append((ws_rooted(home[0]), ws_rooted(_mirror(other))))
    return out


def unjoin_J(r) -> Tuple[FrozenSet[SqEdge], FrozenSet[SqEdge]]:
    cands = unjoin_candidates(r)
    if len(cands) != 1:
        raise ValueError(f"expected one cut line, found {len(cands)}")
    return cands[0]


def j_admissible_pairs(u: float, length: int):
    """All ordered pairs of over-bar class polygons of one length with equal corner heights."""
    pool = [ws_rooted(p) for p in _square_table(length).get(length, []) if in_overbar_class(p, u)]
    by_h: Dict[int, list] = {}
    for p in pool:
        by_h.setdefault(en_vertex(p)[1], []).append(p)
    for group in by_h.values():
        for p in group:
            for q in group:
                yield p, q


# ---------------------------------------------------------------- bridge/polygon count check


@dataclass(frozen=True)
class KestenRow:
    n: int
    lhs: int
    rhs: Fraction
    passed: bool

    def csv(self) -> str:
        return f"{self.n},{self.lhs},{float(self.rhs):.12g},{'pass' if self.passed else 'FAIL'}"


def kesten_rhs(n: int, sab_n: int) -> Fraction:
    return Fraction(sab_n * sab_n, 4 * (2 * n + 1) * n * (n + 1) ** 3)


def kesten_check(n_max: int, threads: Optional[int] = None) -> List[KestenRow]:
    sab = count_square("sab", n_max, threads=threads).counts
    saps = _square_table(2 * n_max + 2)
    rows = []
    for n in range(1, n_max + 1):
        lhs = len(saps[2 * n + 2])
        rhs = kesten_rhs(n, sab[n])
        rows.append(KestenRow(n, lhs, rhs, lhs >= rhs))
    return rows


def diameter_sandwich(m_max: int) -> List[Tuple[int, int, int]]:
    """(length, min diameter, max diameter) over SAP_{2m+2} for m <= m_max."""
    table = _square_table(2 * m_max + 2)
    out = []
    for m in range(1, m_max + 1):
        ds = [diameter(p) for p in table[2 * m + 2]]
        out.append((m, min(ds), max(ds)))
    return out


# ---------------------------------------------------------------- round polygons


@dataclass(frozen=True)
class RoundPolygon:
    edges: FrozenSet
    k: int

    @property
    def length(self) -> int:
        return len(self.edges)


def positive_axis_crossings(edges) -> List[int]:
    """j >= 0 with the axis edge at x = j + 1/2 in the set."""
    return _crossings(edges, True)


def _crossings(edges, positive: bool) -> List[int]:
    out = []
    for e in edges:
        j = _axis_index(e)
        if j is not None and (j >= 0) == positive:
            out.append(j)
    return sorted(out)


def _axis_index(e) -> Optional[int]:
    """j when e is the vertical edge crossing the x-axis at j + 1/2, else None."""
    (p1, q1), (p2, q2) = e
    if {q1, q2} != {1, -1}:
        return None
    X = (2 * p1 + q1 + 2 * p2 + q2) // 2
    if X % 6 != 3:
        return None
    return (X - 3) // 6


def winding_about_origin(edges) -> int:
    """Crossings with the negative x-axis, mod 2 (ray casting on the face centre)."""
    return len(_crossings(edges, False)) % 2


def is_round(edges, k: int) -> bool:
    es = set(edges)
    inside = _lambda_vertices(8 * k)
    if not all(v in inside for e in es for v in e):
        return False
    if _crossings(es, True) != [k]:
        return False
    # the segment [0, k] meets no edge once the only positive crossing is at k + 1/2,
    # so surrounding it is decided by the origin alone
    return winding_about_origin(es) == 1 and _is_polygon(es)


def _is_polygon(es) -> bool:
    deg: Dict = {}
    for a, b in es:
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
    if any(d != 2 for d in deg.values()):
        return False
    return len(_components_hex(es)) == 1


def _components_hex(es):
    adj: Dict = {}
    for a, b in es:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen = set()
    comps = 0
    for v in adj:
        if v in seen:
            continue
        comps += 1
        stack = [v]
        seen.add(v)
        while stack:
            w = stack.pop()
            for z in adj[w]:
                if z not in seen:
                    seen.add(z)
                    stack.append(z)
    return [None] * comps


@lru_cache(maxsize=None)
def _lambda_vertices(k: int) -> FrozenSet:
    return frozenset(v for f in lambda_faces(k) for v in face_vertices(f))


def round_polygons(k: int, length_cap: int, x: float = X_CRIT) -> Tuple[List[RoundPolygon], float]:
    """Round polygons up to the length cap and their weighted sum at x."""
    if k < 1 or length_cap < 6:
        raise ValueError("need k >= 1 and a length cap of at least 6")
    inside = _lambda_vertices(8 * k)
    gate = axis_mid(k)
    a, b = sorted(gate, key=lambda v: -v[1])  # a above the axis, b below

    def blocked(u, v) -> bool:
        j = _axis_index(hex_edge(u, v))
        return j is not None and j >= 0

    # graph distance to b through allowed edges bounds the remaining length
    dist = {b: 0}
    dq = deque([b])
    while dq:
        v = dq.popleft()
        for w in hex_neighbors(v):
            if w in inside and w not in dist and not blocked(v, w):
                dist[w] = dist[v] + 1
                dq.append(w)

    found: List[RoundPolygon] = []
    path = [a]
    seen = {a}

    def dfs():
        v = path[-1]
        steps = len(path) - 1
        for w in sorted(hex_neighbors(v)):
            if w not in inside or blocked(v, w):
                continue
            if w == b:
                if steps + 2 <= length_cap and steps >= 1:
                    es = frozenset(hex_edge(s, t) for s, t in zip(path + [b], path[1:] + [b, a]))
                    if winding_about_origin(es) == 1:
                        found.append(RoundPolygon(es, k))
                continue
            if w in seen or w not in dist:
                continue
            if steps + 1 + dist[w] + 1 > length_cap:
                continue
            seen.add(w)
            path.append(w)
            dfs()
            path.pop()
            seen.discard(w)

    dfs()
    found.sort(key=lambda r: (r.length, sorted(r.edges)))
    total = math.fsum(x ** r.length for r in found)
    return found, total
