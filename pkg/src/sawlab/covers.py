"""Walks and polygons on finite pieces of the eight-fold and universal covers of the honeycomb.

Heights on a cover are lifted arguments about the origin face, measured from
the positive y-axis on sheet 0.  Cover vertices are ``(vertex, sheet)``;
cover midpoints are ``(edge, sheet of the lower endpoint)``, matching the
lattice module.
"""
from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .enumerate import X_CRIT, _turn_sign, _visit_walks, hex_polygons
from .lattice import (
    Edge,
    Vertex,
    WindowExit,
    axis_mid,
    edge,
    hex_neighbors,
    is_cut_edge,
    lambda_domain,
    lift_vertices,
    mid_path_vertices,
    sheet_step,
    vertex_xy,
)
from .observable import SIGMA_CRIT, histogram, pick_z0

CoverVertex = Tuple[Vertex, int]
CoverMid = Tuple[Edge, int]

_TOL = 1e-9
SIXTH = math.pi / 3


# ---------------------------------------------------------------- geometry


def rotate_vertex(v: Vertex, m: int = 1) -> Vertex:
    """Rotation by m * pi/3 about the origin face centre."""
    p, q = v
    for _ in range(m % 6):
        p, q = -q, p + q
    return (p, q)


def rotate_edge(e: Edge, m: int = 1) -> Edge:
    return edge(rotate_vertex(e[0], m), rotate_vertex(e[1], m))


def axis_edge(i: int) -> Optional[Edge]:
    """Vertical edge centred on (0, i*sqrt(3)/2); None when no edge sits there (i even)."""
    if i % 2 == 0 or i <= 0:
        return None
    # endpoints at x = 0 on chart levels 3i - 1 and 3i + 1
    lo, hi = 3 * i - 1, 3 * i + 1
    return edge((-lo // 2, lo), (-hi // 2, hi))


def _arg(X: int, Y: int) -> float:
    """Argument in [0, 2pi) of the point with chart coordinates (X, Y)."""
    a = math.atan2(Y * math.sqrt(3), X)
    return a + 2 * math.pi if a < 0 else a


def vertex_height(cv: CoverVertex) -> float:
    v, s = cv
    X, Y = vertex_xy(v)
    return _arg(X, Y) + 2 * math.pi * s - math.pi / 2


def mid_height(e: Edge, sheet_of_lower: int) -> float:
    """Lifted argument of a cover midpoint, relative to the positive y-axis."""
    (X1, Y1), (X2, Y2) = vertex_xy(e[0]), vertex_xy(e[1])
    X, Y = X1 + X2, Y1 + Y2
    if is_cut_edge(e):
        return 2 * math.pi * (sheet_of_lower + 1) - math.pi / 2
    return _arg(X, Y) + 2 * math.pi * sheet_of_lower - math.pi / 2


def cover_mid(a: CoverVertex, b: CoverVertex) -> CoverMid:
    lower = a if a[0][1] < b[0][1] else b
    return (edge(a[0], b[0]), lower[1])


# ---------------------------------------------------------------- cover graphs


class CoverGraph:
    """Integer-indexed cover of a base vertex set, shaped for the domain walker.

    ``j`` sheets taken cyclically, or the universal cover cut to ``|sheet| <= cap``
    when ``j`` is None.  Neighbour slot order follows the sorted base neighbours,
    so turn signs are those of the base lattice.
    """

    def __init__(self, base: FrozenSet[Vertex], j: Optional[int] = 8, cap: int = 3):
        self.j, self.cap = j, cap
        sheets = range(j) if j is not None else range(-cap, cap + 1)
        inner = [(v, s) for v in sorted(base) for s in sheets]
        index = {c: i for i, c in enumerate(inner)}
        outer: List[CoverVertex] = []
        self.nbr: List[Tuple[int, ...]] = []
        self.turn = []
        for v, s in inner:
            row = []
            for w in sorted(hex_neighbors(v)):
                c = (w, self.wrap(s + sheet_step(v, w)))
                if c not in index:
                    index[c] = len(inner) + len(outer)
                    outer.append(c)
                row.append(index[c])
            self.nbr.append(tuple(row))
            ws = sorted(hex_neighbors(v))
            pv = vertex_xy(v)
            self.turn.append(
                tuple(
                    tuple(0 if a == b else _turn_sign(vertex_xy(ws[a]), pv, vertex_xy(ws[b])) for b in range(3))
                    for a in range(3)
                )
            )
        self.verts = inner + outer
        self.index = index
        self.n_inner = len(inner)
        self.back = [
            tuple(self.nbr[k].index(i) if k < self.n_inner else -1 for k in self.nbr[i]) for i in range(self.n_inner)
        ]

    def wrap(self, s: int) -> int:
        if self.j is not None:
            return s % self.j
        # sheets past the cap become unreachable outer vertices
        return s

    def mid_at(self, i: int, slot: int) -> CoverMid:
        return cover_mid(self.verts[i], self.verts[self.nbr[i][slot]])


@dataclass
class CoverHistogram:
    """Walk tallies from one cover midpoint: end cover midpoint -> {(length, turns): count}."""

    start: CoverMid
    length_cap: int
    counts: Dict[CoverMid, Dict[Tuple[int, int], int]]
    # end midpoint -> entry cover vertex -> {(length, turns): count}
    by_entry: Dict[CoverMid, Dict[CoverVertex, Dict[Tuple[int, int], int]]] = field(repr=False, default_factory=dict)

    def g(self, z: CoverMid, x: float = X_CRIT) -> float:
        return math.fsum(c * x ** n for (n, _), c in self.counts.get(z, {}).items())

    def g_entry(self, z: CoverMid, entry: CoverVertex, x: float = X_CRIT) -> float:
        return math.fsum(c * x ** n for (n, _), c in self.by_entry.get(z, {}).get(entry, {}).items())


def cover_histogram(n: int, z0: Edge, length_cap: int, j: int = 8, start_sheet: int = 0) -> CoverHistogram:
    """Self-avoiding walks in the j-fold cover of the ball of radius n from a lift of z0, up to a length cap."""
    dom = lambda_domain(n)
    g = CoverGraph(dom.vertices, j)
    start = dom.inner_end(z0)
    i0 = g.index[(start, start_sheet)]
    slot0 = sorted(hex_neighbors(start)).index(z0[0] if z0[1] == start else z0[1])
    visits: dict = {}
    _visit_walks(g, ([i0], slot0, 1, 0), length_cap, visits)
    s_mid = g.mid_at(i0, slot0)
    counts: Dict[CoverMid, Dict[Tuple[int, int], int]] = {s_mid: {(0, 0): 1}}
    by_entry: Dict[CoverMid, Dict[CoverVertex, Dict[Tuple[int, int], int]]] = {}
    for (i, a, ln, t), c in sorted(visits.items()):
        row = g.turn[i][a]
        for b in (0, 1, 2):
            if b == a:
                continue
            z = g.mid_at(i, b)
            key = (ln, t + row[b])
            bucket = counts.setdefault(z, {})
            bucket[key] = bucket.get(key, 0) + c
            eb = by_entry.setdefault(z, {}).setdefault(g.verts[i], {})
            eb[key] = eb.get(key, 0) + c
    return CoverHistogram(s_mid, length_cap, counts, by_entry)


# ---------------------------------------------------------------- inner / outer


def classify_inner_outer(mids: Sequence[Edge], n: int) -> str:
    """'inner', 'outer' or 'neither' for a walk between boundary midpoints of the ball of radius n.

    Only the projection matters: the lifted ball is the full preimage of the ball.
    """
    dom = lambda_domain(n)
    bnd = dom.boundary
    if mids[0] not in bnd or mids[-1] not in bnd:
        raise ValueError("walk endpoints must be boundary midpoints")
    verts = mid_path_vertices(list(mids))
    inside = [v in dom.vertices for v in verts]
    if all(inside):
        return "inner"
    if not any(inside):
        return "outer"
    return "neither"


def preimages(z: Edge, j: int = 8) -> List[CoverMid]:
    """The j lifts of a base midpoint."""
    return [(z, s) for s in range(j)]


# ---------------------------------------------------------------- lemma check


@dataclass
class LemmaCheck:
    n: int
    z0: Edge
    length_cap: int
    lhs: float
    rhs: float
    rhs_without_trivial: float
    lift_sum: float
    plus_minus: List[Tuple[int, float, float, float]]
    holds: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "z0": [list(self.z0[0]), list(self.z0[1])],
            "length_cap": self.length_cap,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "rhs_without_trivial": self.rhs_without_trivial,
            "lift_sum": self.lift_sum,
            "holds": self.holds,
        }


DEFAULT_CAPS = {1: 36, 2: 28}


def lemma_a1_check(n: int, z0: Optional[Edge] = None, length_cap: Optional[int] = None, x: float = X_CRIT) -> LemmaCheck:
    """Base walk sum from o to z0 against 8/cos(3pi/16) times the cover boundary sum from a lift of z0.

    The base side is exact.  The cover side is summed over walks up to
    ``length_cap`` vertices; all terms are positive, so it is a lower bound and
    ``holds`` is a certificate for the full inequality.
    """
    if n not in (1, 2):
        raise ValueError("cover enumeration is only feasible for n in {1, 2}")
    dom = lambda_domain(n)
    z0 = pick_z0(dom) if z0 is None else z0
    cap = length_cap or DEFAULT_CAPS[n]
    o = axis_mid(0)
    lhs = histogram(dom, z0).g(o, x)
    ch = cover_histogram(n, z0, cap)
    bnd = dom.boundary
    ends = [z for z in ch.counts if z[0] in bnd]
    total = math.fsum(ch.g(z, x) for z in sorted(ends))
    factor = 8 / math.cos(3 * math.pi / 16)
    rhs = factor * total
    rhs_nt = factor * (total - 1.0)
    # every base walk from z0 to o lifts to one ending at some lift of o
    lift_sum = math.fsum(ch.g(v, x) for v in preimages(o))
    pm = []
    upper = max(o, key=lambda w: w[1])
    for z in preimages(o):
        e, s = z
        entries = sorted(ch.by_entry.get(z, {}))
        gp = gm = 0.0
        for cv in entries:
            if cv[0] == upper:
                gp += ch.g_entry(z, cv, x)
            else:
                gm += ch.g_entry(z, cv, x)
        pm.append((s, gp, gm, ch.g(z, x)))
    return LemmaCheck(n, z0, cap, lhs, rhs, rhs_nt, lift_sum, pm, lhs <= rhs)


# ---------------------------------------------------------------- winding phases


@dataclass
class PhaseAudit:
    n: int
    length_cap: int
    max_spread: float
    offsets: List[complex]
    expected_offset: complex
    turn_residues: Dict[int, Tuple[List[int], List[int]]]
    plus_end: str

    @property
    def offset_error(self) -> float:
        return max((abs(o - self.expected_offset) for o in self.offsets), default=0.0)


def winding_phase_audit(n: int = 1, z0: Optional[Edge] = None, length_cap: Optional[int] = None, sigma: float = SIGMA_CRIT) -> PhaseAudit:
    """Phases of cover walks ending at each lift of o, split by the end they arrive through.

    Within one class the turn counts agree modulo 48 (winding modulo 16pi),
    so at sigma = 5/8 the phases coincide.  The class whose winding is pi
    larger is labelled plus; the minus/plus phase ratio is then e^{i sigma pi}.
    """
    dom = lambda_domain(n)
    z0 = pick_z0(dom) if z0 is None else z0
    cap = length_cap or DEFAULT_CAPS.get(n, 24)
    ch = cover_histogram(n, z0, cap)
    o = axis_mid(0)

    def phase(t: int) -> complex:
        return cmath.exp(-1j * sigma * t * math.pi / 3)

    spread = 0.0
    offsets = []
    residues = {}
    plus_end = ""
    for z in preimages(o):
        classes = []
        for cv, bucket in sorted(ch.by_entry.get(z, {}).items()):
            ts = sorted({t for (_, t) in bucket})
            ph = [phase(t) for t in ts]
            spread = max([spread] + [abs(p - ph[0]) for p in ph])
            classes.append((cv, ts))
        if len(classes) != 2:
            continue
        (ca, ta), (cb, tb) = classes
        residues[z[1]] = (sorted({t % 48 for t in ta}), sorted({t % 48 for t in tb}))
        # the plus class has winding larger by pi, i.e. three more left turns
        if (ta[0] - tb[0]) % 48 == 3:
            plus, minus = ta[0], tb[0]
            plus_v = ca
        else:
            plus, minus = tb[0], ta[0]
            plus_v = cb
        plus_end = "upper" if plus_v[0] == max(o, key=lambda w: w[1]) else "lower"
        offsets.append(phase(minus) / phase(plus))
    return PhaseAudit(n, cap, spread, offsets, cmath.exp(1j * sigma * math.pi), residues, plus_end)


# ---------------------------------------------------------------- sheet algebra


def loop_winding_number(cycle: Sequence[Vertex]) -> int:
    """Winding number about the origin of a closed vertex cycle, from summed angle increments."""
    total = 0.0
    pts = [vertex_xy(v) for v in cycle]
    for (X1, Y1), (X2, Y2) in zip(pts, pts[1:] + pts[:1]):
        a1 = math.atan2(Y1 * math.sqrt(3), X1)
        a2 = math.atan2(Y2 * math.sqrt(3), X2)
        d = a2 - a1
        while d > math.pi:
            d -= 2 * math.pi
        while d <= -math.pi:
            d += 2 * math.pi
        total += d
    return round(total / (2 * math.pi))


def _cycle_of(edges: FrozenSet[Edge]) -> List[Vertex]:
    adj: Dict[Vertex, List[Vertex]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    start = min(adj)
    cyc = [start]
    prev, cur = None, start
    while True:
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        if nxt == start:
            return cyc
        cyc.append(nxt)
        prev, cur = cur, nxt


def ball_perimeter(r: int) -> List[Vertex]:
    """Perimeter cycle of the ball of radius r, counterclockwise."""
    from .lattice import face_vertices, lambda_faces

    seen: Dict[Edge, int] = {}
    for f in lambda_faces(r):
        vs = face_vertices(f)
        for a, b in zip(vs, vs[1:] + vs[:1]):
            e = edge(a, b)
            seen[e] = seen.get(e, 0) + 1
    cyc = _cycle_of(frozenset(e for e, c in seen.items() if c == 1))
    return cyc if loop_winding_number(cyc) == 1 else [cyc[0]] + cyc[:0:-1]


def sheet_algebra_audit(n_max: int = 14, radius: int = 3, rings: Sequence[int] = (1, 2, 3)) -> Tuple[int, int]:
    """Lift closed loops to the universal cover; the sheet displacement after one circuit
    must equal the winding number about the origin.  Loops are every polygon of length
    <= n_max at every translate near the origin, plus ball perimeters in both
    orientations.  Returns (checked, failures)."""
    from .lattice import lambda_faces

    ring = lambda_domain(0).vertices
    loops: List[List[Vertex]] = []
    shifts = sorted(lambda_faces(radius))
    for length, polys in sorted(hex_polygons(n_max).items()):
        for poly in polys:
            cyc = _cycle_of(poly)
            for a, b in shifts:
                moved = [(p + 3 * a, q + 3 * b) for p, q in cyc]
                if not any(v in ring for v in moved):
                    loops.append(moved)
    for r in rings:
        cyc = ball_perimeter(r)
        loops += [cyc, cyc[::-1]]
    failures = 0
    for cyc in loops:
        lifted = lift_vertices(cyc + [cyc[0]], 0)
        failures += lifted[-1][1] - lifted[0][1] != loop_winding_number(cyc)
    return len(loops), failures


# ---------------------------------------------------------------- good polygons


@dataclass(frozen=True)
class GoodPolygon:
    vertices: Tuple[CoverVertex, ...]
    i: int
    j: int
    rotation: int

    @property
    def length(self) -> int:
        return len(self.vertices)


def _window_base(k: int, radius: int) -> FrozenSet[Vertex]:
    return frozenset(lambda_domain(radius).vertices - lambda_domain(k).vertices)


def _bfs(base: FrozenSet[Vertex], target: Vertex) -> Dict[Vertex, int]:
    dist = {target: 0}
    dq = deque([target])
    while dq:
        v = dq.popleft()
        for w in hex_neighbors(v):
            if w in base and w not in dist:
                dist[w] = dist[v] + 1
                dq.append(w)
    return dist


def _ray_index(e: Edge, height: float) -> Optional[Tuple[int, int]]:
    """(j, m) when the midpoint at this height is the (0, j) axis edge rotated by m * pi/3."""
    m = round(height / SIXTH)
    if abs(height - m * SIXTH) > _TOL or m < 0:
        return None
    base = rotate_edge(e, -m)
    (X1, Y1), (X2, Y2) = vertex_xy(base[0]), vertex_xy(base[1])
    if X1 + X2 != 0 or Y1 + Y2 <= 0 or (Y1 + Y2) % 6:
        return None
    j = (Y1 + Y2) // 6
    return (j, m) if axis_edge(j) == base else None


def good_polygons(k: int, i: int, n_cap: int, sheet_cap: int = 3) -> List[GoodPolygon]:
    """Polygons in the universal cover window outside the ball of radius k whose unique
    lowest edge is the (0, i) axis edge on sheet 0 and whose unique highest edge lies on a ray."""
    e = axis_edge(i)
    if e is None:
        return []
    if e[0] in lambda_domain(k).vertices or e[1] in lambda_domain(k).vertices:
        raise ValueError(f"edge ({0}, {i}) meets the excluded ball of radius {k}")
    radius = (i + 1) // 2 + n_cap // 2 + 2
    base = _window_base(k, radius)
    lo_v, hi_v = sorted(e, key=lambda v: v[1])
    a, b = (hi_v, 0), (lo_v, 0)
    dist = _bfs(base, lo_v)
    ball = lambda_domain(k).vertices
    rim = {v for v in base if any(w not in base and w not in ball for w in hex_neighbors(v))}
    out: List[GoodPolygon] = []
    path = [a]
    on = {a}
    heights: List[float] = []

    def close():
        hb = mid_height(*_mid_sheet(path[-1], b))
        if hb <= _TOL:
            return
        hs = heights + [hb]
        top = max(hs)
        if sum(1 for h in hs if h > top - _TOL) != 1:
            return
        idx = hs.index(top)
        ends = (path[idx], path[idx + 1]) if idx < len(path) - 1 else (path[-1], b)
        ray = _ray_index(edge(ends[0][0], ends[1][0]), top)
        if ray is None:
            return
        out.append(GoodPolygon(tuple(path) + (b,), i, ray[0], ray[1]))

    def rec():
        v, s = path[-1]
        used = len(path)  # edges so far, counting the closing axis edge
        for w in sorted(hex_neighbors(v)):
            if w not in base:
                continue
            s2 = s + sheet_step(v, w)
            if abs(s2) > sheet_cap:
                raise WindowExit(f"sheet {s2} outside |sheet| <= {sheet_cap}")
            c = (w, s2)
            if c == b:
                if len(path) >= 2 and used + 1 <= n_cap:
                    close()
                continue
            if c in on:
                continue
            if used + 1 + dist.get(w, n_cap + 1) > n_cap:
                continue
            h = mid_height(*_mid_sheet((v, s), c))
            if h <= _TOL:
                continue
            if w in rim:
                raise WindowExit("polygon reached the window edge")
            on.add(c)
            path.append(c)
            heights.append(h)
            rec()
            heights.pop()
            path.pop()
            on.discard(c)

    rec()
    # traversal order already fixes a canonical listing
    return out


def _mid_sheet(c1: CoverVertex, c2: CoverVertex) -> Tuple[Edge, int]:
    return cover_mid(c1, c2)


def good_polygon_census(k: int, indices: Iterable[int], n_cap: int) -> Dict[Tuple[int, int, int], int]:
    """g_n(i, j) for the listed lowest-edge indices: {(n, i, j): count}."""
    table: Dict[Tuple[int, int, int], int] = {}
    for i in indices:
        for p in good_polygons(k, i, n_cap):
            key = (p.length, p.i, p.j)
            table[key] = table.get(key, 0) + 1
    return dict(sorted(table.items()))


def census_csv(table: Dict[Tuple[int, int, int], int]) -> str:
    lines = ["n,i,j,g"] + [f"{n},{i},{j},{c}" for (n, i, j), c in sorted(table.items())]
    return "\n".join(lines) + "\n"


def census_relations(table: Dict[Tuple[int, int, int], int], indices: Sequence[int], n_cap: int) -> dict:
    """Symmetry g_n(i,j) = g_n(j,i) and g_{n+l-2}(i,i) >= g_n(i,j) g_l(j,i) on every computable triple."""
    def g(n, i, j):
        return table.get((n, i, j), 0)

    sym_checked = sym_fail = 0
    for n in range(1, n_cap + 1):
        for i in indices:
            for j in indices:
                if i < j:
                    sym_checked += 1
                    sym_fail += g(n, i, j) != g(n, j, i)
    sm_checked = sm_fail = 0
    for i in indices:
        for j in indices:
            for n in range(1, n_cap + 1):
                for l in range(1, n_cap + 3 - n):
                    if g(n, i, j) and g(l, j, i):
                        sm_checked += 1
                        sm_fail += g(n + l - 2, i, i) < g(n, i, j) * g(l, j, i)
    return {
        "symmetry_checked": sym_checked,
        "symmetry_failures": sym_fail,
        "supermult_checked": sm_checked,
        "supermult_failures": sm_fail,
    }


def window_avoids_ball(polys: Iterable[GoodPolygon], k: int) -> bool:
    ball = lambda_domain(k).vertices
    return all(v not in ball for p in polys for v, _ in p.vertices)
