"""Walks, bridges, half-space walks and polygon traces on Z^2 (plus hex walk helpers).

A square walk is a tuple of sites.  Walk text is the step string over NESW
read from the first site.  Polygon traces are edge sets modulo translation,
anchored so the lexicographically least vertex is the origin.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .lattice import (
    STEP_OF,
    STEPS,
    Edge as HexEdge,
    hex_edges_at,
    mid_path_vertices,
    other_end,
    vertex_xy,
)

Site = Tuple[int, int]
Walk = Tuple[Site, ...]
SqEdge = Tuple[Site, Site]

ORIGIN: Site = (0, 0)


class SelfIntersection(ValueError):
    def __init__(self, site, index):
        super().__init__(f"walk revisits {site} at index {index}")
        self.site = site
        self.index = index


# ---------------------------------------------------------------- text form


def from_steps(steps: str, start: Site = ORIGIN) -> Walk:
    x, y = start
    pts = [(x, y)]
    for ch in steps:
        dx, dy = STEPS[ch]
        x, y = x + dx, y + dy
        pts.append((x, y))
    return tuple(pts)


def to_steps(w: Sequence[Site]) -> str:
    out = []
    for a, b in zip(w, w[1:]):
        d = (b[0] - a[0], b[1] - a[1])
        if d not in STEP_OF:
            raise ValueError(f"non-adjacent consecutive sites {a} {b}")
        out.append(STEP_OF[d])
    return "".join(out)


# ---------------------------------------------------------------- predicates


def first_repeat(w: Sequence[Site]) -> Optional[int]:
    seen = set()
    for i, s in enumerate(w):
        if s in seen:
            return i
        seen.add(s)
    return None


def is_nearest_neighbour(w: Sequence[Site]) -> bool:
    return all(abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1 for a, b in zip(w, w[1:]))


def is_saw(w: Sequence[Site]) -> bool:
    return is_nearest_neighbour(w) and first_repeat(w) is None


def is_bridge(w: Sequence[Site]) -> bool:
    """Starts at a site of height y0 with y0 < y_k <= y_n for k >= 1."""
    if not is_saw(w):
        return False
    y0, yn = w[0][1], w[-1][1]
    return all(y0 < s[1] <= yn for s in w[1:])


def is_reflected_bridge(w: Sequence[Site]) -> bool:
    return is_bridge(reflect_horizontal(w))


def is_hsw(w: Sequence[Site]) -> bool:
    if not is_saw(w):
        return False
    y0 = w[0][1]
    return all(s[1] > y0 for s in w[1:])


def is_closing(w: Sequence[Site]) -> bool:
    a, b = w[0], w[-1]
    return abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


# ---------------------------------------------------------------- algebra


def translate(w: Iterable[Site], dx: int, dy: int) -> Walk:
    return tuple((x + dx, y + dy) for x, y in w)


def anchor(w: Sequence[Site]) -> Walk:
    """Translate so the walk starts at the origin."""
    x0, y0 = w[0]
    return translate(w, -x0, -y0)


def concatenate(g: Sequence[Site], g2: Sequence[Site], check: bool = True) -> Walk:
    """(g o g2)_k = g_k for k <= n, g_n + g2_{k-n} - g2_0 afterwards."""
    if not g:
        return tuple(g2)
    if not g2:
        return tuple(g)
    xn, yn = g[-1]
    x0, y0 = g2[0]
    tail = [(x - x0 + xn, y - y0 + yn) for x, y in g2[1:]]
    out = tuple(g) + tuple(tail)
    if check:
        i = first_repeat(out)
        if i is not None:
            raise SelfIntersection(out[i], i)
    return out


def reflect_horizontal(w: Iterable[Site]) -> Walk:
    """tau: reflection in the horizontal axis, (x, y) -> (x, -y)."""
    return tuple((x, -y) for x, y in w)


def reflect_vertical(w: Iterable[Site]) -> Walk:
    """Mirror in the vertical axis, (x, y) -> (-x, y)."""
    return tuple((-x, y) for x, y in w)


def rotate90(w: Iterable[Site]) -> Walk:
    """Counterclockwise quarter turn about the origin."""
    return tuple((-y, x) for x, y in w)


def reverse(w: Sequence[Site]) -> Walk:
    return tuple(reversed(w))


def height(w: Sequence[Site]) -> int:
    ys = [s[1] for s in w]
    return max(ys) - min(ys)


def bridge_height(w: Sequence[Site]) -> int:
    return w[-1][1] - w[0][1]


def sq_edge(a: Site, b: Site) -> SqEdge:
    return (a, b) if a <= b else (b, a)


def walk_edges(w: Sequence[Site]) -> List[SqEdge]:
    return [sq_edge(a, b) for a, b in zip(w, w[1:])]


# ---------------------------------------------------------------- polygons


@dataclass(frozen=True)
class Geometry:
    h: int
    w: int
    lw: int


def geometry_of_sites(sites: Iterable[Site]) -> Geometry:
    rows: Dict[int, List[int]] = {}
    for x, y in sites:
        rows.setdefault(y, []).append(x)
    xs = [x for r in rows.values() for x in r]
    lw = max(max(r) - min(r) for r in rows.values())
    return Geometry(max(rows) - min(rows), max(xs) - min(xs), lw)


def signed_area2(cycle: Sequence[Site]) -> int:
    """Twice the signed area of a closed vertex cycle (first site not repeated)."""
    s = 0
    n = len(cycle)
    for i in range(n):
        x1, y1 = cycle[i]
        x2, y2 = cycle[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return s


@dataclass(frozen=True)
class PolygonTrace:
    """A self-avoiding polygon modulo translation, anchored at its least vertex."""

    edges: FrozenSet[SqEdge]

    @staticmethod
    def from_cycle(points: Sequence[Site]) -> "PolygonTrace":
        pts = list(points)
        if pts[0] == pts[-1]:
            pts = pts[:-1]
        es = {sq_edge(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))}
        return PolygonTrace.from_edges(es)

    @staticmethod
    def from_edges(es: Iterable[SqEdge]) -> "PolygonTrace":
        es = list(es)
        m = min(min(e) for e in es)
        dx, dy = -m[0], -m[1]
        return PolygonTrace(frozenset(sq_edge((a[0] + dx, a[1] + dy), (b[0] + dx, b[1] + dy)) for a, b in es))

    @property
    def length(self) -> int:
        return len(self.edges)

    @cached_property
    def vertices(self) -> FrozenSet[Site]:
        return frozenset(v for e in self.edges for v in e)

    @cached_property
    def geometry(self) -> Geometry:
        return geometry_of_sites(self.vertices)

    def is_valid(self) -> bool:
        deg: Dict[Site, int] = {}
        for a, b in self.edges:
            if abs(a[0] - b[0]) + abs(a[1] - b[1]) != 1:
                return False
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        if any(d != 2 for d in deg.values()):
            return False
        return len(self.cycle()) == len(self.edges)

    def cycle(self, start: Optional[Site] = None, ccw: bool = True) -> List[Site]:
        """Vertex cycle (start not repeated) in the requested orientation."""
        adj: Dict[Site, List[Site]] = {}
        for a, b in self.edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        if start is None:
            start = min(adj)
        cyc = [start]
        prev, cur = None, start
        while True:
            nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
            if nxt == start:
                break
            cyc.append(nxt)
            prev, cur = cur, nxt
            if len(cyc) > len(self.edges):
                break
        if (signed_area2(cyc) > 0) != ccw:
            cyc = [cyc[0]] + cyc[1:][::-1]
        return cyc

    def translated(self, dx: int, dy: int) -> FrozenSet[SqEdge]:
        return frozenset(sq_edge((a[0] + dx, a[1] + dy), (b[0] + dx, b[1] + dy)) for a, b in self.edges)


def closing_walks_of(p: PolygonTrace) -> List[Walk]:
    """All 2n closing walks of length n-1 that trace p, anchored at the origin."""
    cyc = p.cycle()
    n = len(cyc)
    out = []
    for orient in (cyc, [cyc[0]] + cyc[1:][::-1]):
        for i in range(n):
            seq = orient[i:] + orient[:i]
            out.append(anchor(seq))
    return out


def lowest_widest_row(sites: Iterable[Site]) -> Tuple[int, int]:
    """(row, leftmost x) of the lowest row realising the line-width."""
    rows: Dict[int, List[int]] = {}
    for x, y in sites:
        rows.setdefault(y, []).append(x)
    lw = max(max(r) - min(r) for r in rows.values())
    y = min(y for y, r in rows.items() if max(r) - min(r) == lw)
    return y, min(rows[y])


def root_wide(p: PolygonTrace) -> Walk:
    """Closed counterclockwise walk from O: O is the leftmost point of the lowest widest row."""
    y, x = lowest_widest_row(p.vertices)
    cyc = p.cycle(start=(x, y), ccw=True)
    cyc = cyc + [cyc[0]]
    return translate(cyc, -x, -y)


def unroot(w: Sequence[Site]) -> PolygonTrace:
    return PolygonTrace.from_cycle(w)


def polygon_text(p: PolygonTrace) -> str:
    return to_steps(root_wide(p))


def polygon_from_text(text: str) -> PolygonTrace:
    w = from_steps(text)
    if w[-1] != w[0] or first_repeat(w[:-1]) is not None:
        raise ValueError("not a closed self-avoiding step string")
    return PolygonTrace.from_cycle(w)


def diameter(p: PolygonTrace) -> int:
    g = p.geometry
    return max(g.h, g.w)


# ---------------------------------------------------------------- hex walks
#
# A hex walk is a list of edge midpoints; consecutive midpoints share an
# endpoint.  Its length is the number of traversed vertices.


def hex_walk_length(mids: Sequence[HexEdge]) -> int:
    return max(len(mids) - 1, 0)


def hex_is_saw(mids: Sequence[HexEdge]) -> bool:
    try:
        vs = mid_path_vertices(list(mids))
    except ValueError:
        return False
    if len(set(vs)) != len(vs):
        return False
    # consecutive midpoints must leave through the far end of the previous edge
    for i in range(1, len(vs)):
        if vs[i] != other_end(mids[i], vs[i - 1]):
            return False
    return True


def _turn(u, v, w) -> str:
    (x1, y1), (x2, y2), (x3, y3) = vertex_xy(u), vertex_xy(v), vertex_xy(w)
    cross = (x2 - x1) * (y3 - y2) - (y2 - y1) * (x3 - x2)
    return "L" if cross > 0 else "R"


def hex_turns(mids: Sequence[HexEdge], first_vertex=None) -> Tuple[HexEdge, object, str]:
    """Serialize as (start midpoint, first traversed vertex, L/R turn string)."""
    if len(mids) < 2:
        return (mids[0], first_vertex, "")
    vs = mid_path_vertices(list(mids))
    turns = []
    for i, v in enumerate(vs):
        u = other_end(mids[i], v)
        w = other_end(mids[i + 1], v)
        turns.append(_turn(u, v, w))
    return (mids[0], vs[0], "".join(turns))


def hex_from_turns(start: HexEdge, first_vertex, turns: str) -> List[HexEdge]:
    mids = [start]
    if not turns:
        return mids
    v = first_vertex
    u = other_end(start, v)
    for t in turns:
        options = [e for e in hex_edges_at(v) if other_end(e, v) != u]
        nxt = [e for e in options if _turn(u, v, other_end(e, v)) == t][0]
        mids.append(nxt)
        u, v = v, other_end(nxt, v)
    return mids
