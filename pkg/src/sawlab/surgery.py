"""Bridge-polygon joins on Z^2 and the honeycomb, plus their decoders.

Square join.  The polygon is slid in from the right until it comes within
vertical distance two of the walk; the contact height picks a pair of rows
(y, y+1).  On each side a small "opener" cuts one or two edges at the
facing boundary and two horizontal lanes run towards each other, ending on
the left and right vertical edges of the junction plaquette.  Lane lengths
are fixed so every join gains exactly 16 edges; the opener table is
searched in a fixed order and the first candidate passing the full
contract is taken.

Honeycomb join.  The polygon is slid to the rightmost position at dual
distance four; a face chain f0..f4 is chosen, and the walk is xor-ed with
the boundary of a small face region so that the gain is exactly 18.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .walkmodel import (
    PolygonTrace,
    Site,
    SqEdge,
    Walk,
    first_repeat,
    is_bridge,
    is_reflected_bridge,
    reflect_horizontal,
    sq_edge,
    walk_edges,
)


class JoinError(ValueError):
    pass


@dataclass(frozen=True)
class JoinResult:
    joined: tuple
    junction: tuple
    translate: int
    removed: FrozenSet
    added: FrozenSet
    info: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def error_set(self) -> FrozenSet:
        return self.removed | self.added


# ---------------------------------------------------------------- helpers


def _rows(sites: Iterable[Site]) -> Dict[int, List[int]]:
    rows: Dict[int, List[int]] = defaultdict(list)
    for x, y in sites:
        rows[y].append(x)
    return rows


def _path_edges(path: Sequence[Site]) -> List[SqEdge]:
    return [sq_edge(a, b) for a, b in zip(path, path[1:])]


def _mirror_site(s: Site) -> Site:
    return (-s[0], s[1])


def _mirror_edge(e: SqEdge) -> SqEdge:
    return sq_edge(_mirror_site(e[0]), _mirror_site(e[1]))


def _tau_edge(e: SqEdge) -> SqEdge:
    return sq_edge((e[0][0], -e[0][1]), (e[1][0], -e[1][1]))


def _shift_edge(e: SqEdge, dx: int, dy: int = 0) -> SqEdge:
    return sq_edge((e[0][0] + dx, e[0][1] + dy), (e[1][0] + dx, e[1][1] + dy))


def walk_from_edges(edges: Iterable[SqEdge], start: Site) -> Optional[Walk]:
    """Trace a simple path from ``start`` through all edges; None if the edge set is not such a path."""
    adj: Dict[Site, List[Site]] = defaultdict(list)
    es = list(edges)
    for a, b in es:
        adj[a].append(b)
        adj[b].append(a)
    if any(len(v) > 2 for v in adj.values()):
        return None
    if es and len(adj[start]) != 1:
        return None
    path = [start]
    prev = None
    cur = start
    while True:
        nxt = [v for v in adj[cur] if v != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        path.append(cur)
        if len(path) > len(es) + 1:
            return None
    if len(path) != len(es) + 1 or first_repeat(path) is not None:
        return None
    return tuple(path)


def _is_cycle(edges: Set[SqEdge]) -> bool:
    if len(edges) < 4:
        return False
    adj: Dict[Site, List[Site]] = defaultdict(list)
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    if any(len(v) != 2 for v in adj.values()):
        return False
    start = next(iter(adj))
    prev, cur, steps = None, start, 0
    while True:
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        prev, cur = cur, nxt
        steps += 1
        if cur == start:
            break
    return steps == len(edges)


# ---------------------------------------------------------------- openers


@dataclass(frozen=True)
class Opener:
    """Right-facing cut on an object at rows (y, y+1) with two lanes to the tip column."""

    kind: str
    removed: Tuple[SqEdge, ...]
    lost: Optional[Site]
    lane_lo: Tuple[Site, ...]
    lane_hi: Tuple[Site, ...]
    tip: int

    def lane_edges(self) -> List[SqEdge]:
        return _path_edges(self.lane_lo) + _path_edges(self.lane_hi)

    def mirrored(self) -> "Opener":
        return Opener(
            self.kind,
            tuple(_mirror_edge(e) for e in self.removed),
            None if self.lost is None else _mirror_site(self.lost),
            tuple(_mirror_site(s) for s in self.lane_lo),
            tuple(_mirror_site(s) for s in self.lane_hi),
            -self.tip,
        )

    def shifted(self, dx: int) -> "Opener":
        return Opener(
            self.kind,
            tuple(_shift_edge(e, dx) for e in self.removed),
            None if self.lost is None else (self.lost[0] + dx, self.lost[1]),
            tuple((x + dx, y) for x, y in self.lane_lo),
            tuple((x + dx, y) for x, y in self.lane_hi),
            self.tip + dx,
        )


OPENER_KINDS = ("vertical", "hook", "hook_down", "corner_lo", "corner_hi")


def opener_shape(kind: str, X: int, y: int) -> Opener:
    """Opener of the given kind anchored at column X (see module docstring)."""
    lo = lambda a, b: tuple((x, y) for x in range(a, b + 1))
    hi = lambda a, b: tuple((x, y + 1) for x in range(a, b + 1))
    if kind == "vertical":
        return Opener(kind, (sq_edge((X, y), (X, y + 1)),), None, lo(X, X + 4), hi(X, X + 4), X + 4)
    if kind == "hook":
        return Opener(
            kind, (sq_edge((X - 1, y), (X, y)),), None, lo(X, X + 3), ((X - 1, y),) + hi(X - 1, X + 3), X + 3
        )
    if kind == "hook_down":
        return Opener(
            kind, (sq_edge((X - 1, y + 1), (X, y + 1)),), None, ((X - 1, y + 1),) + lo(X - 1, X + 3), hi(X, X + 3), X + 3
        )
    if kind == "corner_lo":
        return Opener(
            kind,
            (sq_edge((X, y), (X, y + 1)), sq_edge((X, y + 1), (X + 1, y + 1))),
            (X, y + 1),
            lo(X, X + 5),
            hi(X + 1, X + 5),
            X + 5,
        )
    if kind == "corner_hi":
        return Opener(
            kind,
            (sq_edge((X + 1, y), (X, y)), sq_edge((X, y), (X, y + 1))),
            (X, y),
            lo(X + 1, X + 5),
            hi(X, X + 5),
            X + 5,
        )
    raise ValueError(kind)


def tip_offset(kind: str) -> int:
    return {"vertical": 4, "hook": 3, "hook_down": 3, "corner_lo": 5, "corner_hi": 5}[kind]


def right_openers(rows: Dict[int, List[int]], edges: Set[SqEdge], y: int) -> List[Opener]:
    """All openers applicable at rows (y, y+1) on the right boundary of an object."""
    r0 = max(rows[y]) if rows.get(y) else None
    r1 = max(rows[y + 1]) if rows.get(y + 1) else None
    out = []
    if r0 is not None and r0 == r1 and sq_edge((r0, y), (r0, y + 1)) in edges:
        out.append(opener_shape("vertical", r0, y))
    if r0 is not None and sq_edge((r0 - 1, y), (r0, y)) in edges and (r1 is None or r1 < r0 - 1):
        out.append(opener_shape("hook", r0, y))
    if r1 is not None and sq_edge((r1 - 1, y + 1), (r1, y + 1)) in edges and (r0 is None or r0 < r1 - 1):
        out.append(opener_shape("hook_down", r1, y))
    if r0 is not None and r1 == r0 + 1:
        X = r0
        if sq_edge((X, y), (X, y + 1)) in edges and sq_edge((X, y + 1), (X + 1, y + 1)) in edges:
            out.append(opener_shape("corner_lo", X, y))
    if r1 is not None and r0 == r1 + 1:
        X = r1
        if sq_edge((X + 1, y), (X, y)) in edges and sq_edge((X, y), (X, y + 1)) in edges:
            out.append(opener_shape("corner_hi", X, y))
    return out


def left_openers(rows: Dict[int, List[int]], edges: Set[SqEdge], y: int) -> List[Opener]:
    mrows = {k: [-x for x in v] for k, v in rows.items()}
    medges = {_mirror_edge(e) for e in edges}
    return [o.mirrored() for o in right_openers(mrows, medges, y)]


# ---------------------------------------------------------------- square join


def _poly_edges(P) -> FrozenSet[SqEdge]:
    if isinstance(P, PolygonTrace):
        return P.edges
    return frozenset(sq_edge(a, b) for a, b in P)


def alignment_ok(gamma: Sequence[Site], P) -> bool:
    pys = [v[1] for e in _poly_edges(P) for v in e]
    gys = [s[1] for s in gamma]
    return min(gys) <= min(pys) - 3 and max(pys) + 3 <= max(gys)


def contact(gamma: Sequence[Site], pedges: FrozenSet[SqEdge]) -> Tuple[int, Site]:
    """Largest offset at which the slid polygon first comes within vertical distance two, and Y."""
    pverts = {v for e in pedges for v in e}
    gcols: Dict[int, List[int]] = defaultdict(list)
    for x, y in gamma:
        gcols[x].append(y)
    grows = _rows(gamma)
    best = None
    for px, py in pverts:
        for dy in range(-2, 3):
            for gx in grows.get(py + dy, ()):
                off = gx - px
                if best is None or off > best:
                    best = off
    if best is None:
        raise JoinError("no contact offset")
    i0 = best
    pcols: Dict[int, List[int]] = defaultdict(list)
    for px, py in pverts:
        pcols[px + i0].append(py)
    ycands = []
    for x in set(gcols) & set(pcols):
        zs = {g + d for g in gcols[x] for d in (-1, 0, 1)} & {p + d for p in pcols[x] for d in (-1, 0, 1)}
        for z in zs:
            ycands.append((z, x))
    if not ycands:
        raise JoinError("contact without a shared column")
    ymax = max(z for z, _ in ycands)
    xleft = min(x for z, x in ycands if z == ymax)
    return i0, (xleft, ymax)


def right_side(pverts_edges: Set[SqEdge]) -> List[Site]:
    """Vertices met going counterclockwise from SE (rightmost lowest) to NE (rightmost highest)."""
    trace = PolygonTrace(frozenset(pverts_edges))
    verts = trace.vertices
    ylo = min(v[1] for v in verts)
    yhi = max(v[1] for v in verts)
    se = max((v for v in verts if v[1] == ylo), key=lambda v: v[0])
    ne = max((v for v in verts if v[1] == yhi), key=lambda v: v[0])
    cyc = trace.cycle(start=se, ccw=True)
    out = []
    for v in cyc:
        out.append(v)
        if v == ne:
            break
    return out


def _try_join(gamma, gedges, grows, pedges, y, og: Opener, op0: Opener):
    C = og.tip
    s = C + 1 - op0.tip
    op = op0.shifted(s)
    T = {_shift_edge(e, s) for e in pedges}
    jl = sq_edge((C, y), (C, y + 1))
    jr = sq_edge((C + 1, y), (C + 1, y + 1))
    jb = sq_edge((C, y), (C + 1, y))
    jt = sq_edge((C, y + 1), (C + 1, y + 1))
    gmod = (set(gedges) - set(og.removed)) | set(og.lane_edges()) | {jl}
    q = (T - set(op.removed)) | set(op.lane_edges()) | {jr}
    if len(gmod) != len(gedges) + 8 or len(q) != len(pedges) + 8:
        return None
    gverts = {v for e in gmod for v in e}
    qverts = {v for e in q for v in e}
    if gverts & qverts:
        return None
    if not _is_cycle(q):
        return None
    gwalk = walk_from_edges(gmod, gamma[0])
    if gwalk is None or gwalk[-1] != gamma[-1]:
        return None
    # no right translate of Q meets the walk part
    growsmod = _rows(gverts)
    for yy, xs in _rows(qverts).items():
        if yy in growsmod and min(xs) <= max(growsmod[yy]):
            return None
    # right side of the placed polygon survives
    lost = op.lost
    if lost is not None and lost in right_side(T):
        return None
    medges = (gmod - {jl}) | (q - {jr}) | {jb, jt}
    mwalk = walk_from_edges(medges, gamma[0])
    if mwalk is None or mwalk[-1] != gamma[-1]:
        return None
    removed = frozenset(og.removed) | frozenset(op.removed)
    added = frozenset(og.lane_edges()) | frozenset(op.lane_edges()) | {jb, jt}
    info = {"gamma_opener": og.kind, "polygon_opener": op.kind, "rows": (y, y + 1)}
    return JoinResult(mwalk, (C, y), s, removed, added, info)


def _row_order(pedges, yY):
    ys = [v[1] for e in pedges for v in e]
    cands = list(range(min(ys) - 1, max(ys) + 1))
    return sorted(cands, key=lambda y: (abs(y - yY), -y))


def madras_join(gamma: Sequence[Site], P) -> JoinResult:
    """Join polygon P (edge set, absolute heights) to the right of bridge gamma."""
    gamma = tuple(gamma)
    pedges = _poly_edges(P)
    if is_bridge(gamma):
        pass
    elif is_reflected_bridge(gamma):
        res = madras_join(reflect_horizontal(gamma), frozenset(_tau_edge(e) for e in pedges))
        C, y = res.junction
        return JoinResult(
            reflect_horizontal(res.joined),
            (C, -y - 1),
            res.translate,
            frozenset(_tau_edge(e) for e in res.removed),
            frozenset(_tau_edge(e) for e in res.added),
            dict(res.info, reflected=True),
        )
    else:
        raise JoinError("first argument is neither a bridge nor a reflected bridge")
    if not alignment_ok(gamma, pedges):
        raise JoinError("vertical alignment condition fails")
    gedges = set(walk_edges(gamma))
    grows = _rows(gamma)
    _, Y = contact(gamma, pedges)
    prows = _rows({v for e in pedges for v in e})
    rows = _row_order(pedges, Y[1])
    pset = set(pedges)
    # single-edge cuts are tried on every row pair before any corner cut
    for tier in (2, 3, 4):
        for y in rows:
            for og in right_openers(grows, gedges, y):
                for op0 in left_openers(prows, pset, y):
                    if len(og.removed) + len(op0.removed) != tier:
                        continue
                    res = _try_join(gamma, gedges, grows, pedges, y, og, op0)
                    if res is not None:
                        res.info["Y"] = Y
                        return res
    raise JoinError("no opener pair satisfies the join contract")


def wide_rooted_edges(p: PolygonTrace) -> FrozenSet[SqEdge]:
    from .walkmodel import root_wide

    w = root_wide(p)
    return frozenset(_path_edges(w))


def mj_range(gamma: Sequence[Site], p: PolygonTrace) -> Tuple[int, int]:
    ys = [s[1] for s in gamma]
    h = p.geometry.h
    return min(ys) + h + 3, max(ys) - h - 3


def mj_at_height(gamma: Sequence[Site], p: PolygonTrace, j: int) -> JoinResult:
    lo, hi = mj_range(gamma, p)
    if not lo <= j <= hi:
        raise JoinError(f"height {j} outside [{lo}, {hi}]")
    base = wide_rooted_edges(p)
    return madras_join(gamma, frozenset(_shift_edge(e, 0, j) for e in base))


# ---------------------------------------------------------------- decoding


def normalize_polygon(edges: Iterable[SqEdge]) -> FrozenSet[SqEdge]:
    """Translate horizontally so the least x is zero; heights are kept."""
    es = list(edges)
    mx = min(v[0] for e in es for v in e)
    return frozenset(_shift_edge(e, -mx) for e in es)


def split_at_plaquette(walk: Sequence[Site], junction: Tuple[int, int]):
    """Swap the plaquette's horizontal edges for its vertical ones: (walk part, polygon part) or None."""
    C, y = junction
    jl = sq_edge((C, y), (C, y + 1))
    jr = sq_edge((C + 1, y), (C + 1, y + 1))
    jb = sq_edge((C, y), (C + 1, y))
    jt = sq_edge((C, y + 1), (C + 1, y + 1))
    es = set(walk_edges(walk))
    if jb not in es or jt not in es or jl in es or jr in es:
        return None
    es = (es - {jb, jt}) | {jl, jr}
    adj: Dict[Site, List[Site]] = defaultdict(list)
    for a, b in es:
        adj[a].append(b)
        adj[b].append(a)
    seen = {walk[0]}
    stack = [walk[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    wpart = {e for e in es if e[0] in seen}
    qpart = es - wpart
    if jl not in wpart or jr not in qpart:
        return None
    path = walk_from_edges(wpart, walk[0])
    if path is None or path[-1] != walk[-1] or not _is_cycle(qpart):
        return None
    return path, qpart


def _undo_opener(part: Set[SqEdge], o: Opener) -> Optional[Set[SqEdge]]:
    lanes = set(o.lane_edges())
    if not lanes <= part:
        return None
    rest = part - lanes
    if any(e in rest for e in o.removed):
        return None
    restored = rest | set(o.removed)
    if o.lost is not None and any(o.lost in e for e in rest):
        return None
    return restored


def unjoin(walk: Sequence[Site], junction: Tuple[int, int]) -> Set[Tuple[Walk, FrozenSet[SqEdge]]]:
    """All (bridge, polygon) pairs of matching lengths whose join is ``walk`` with this junction."""
    walk = tuple(walk)
    if not is_bridge(walk) and is_reflected_bridge(walk):
        C, y = junction
        got = unjoin(reflect_horizontal(walk), (C, -y - 1))
        return {(reflect_horizontal(g), normalize_polygon(_tau_edge(e) for e in p)) for g, p in got}
    sp = split_at_plaquette(walk, junction)
    if sp is None:
        raise JoinError("junction is not a detachable plaquette of the walk")
    gpath, q = sp
    C, y = junction
    gmod = set(walk_edges(gpath)) - {sq_edge((C, y), (C, y + 1))}
    qmod = set(q) - {sq_edge((C + 1, y), (C + 1, y + 1))}
    out = set()
    gammas = []
    for kind in OPENER_KINDS:
        og = opener_shape(kind, C - tip_offset(kind), y)
        restored = _undo_opener(gmod, og)
        if restored is None:
            continue
        g0 = walk_from_edges(restored, walk[0])
        if g0 is None or g0[-1] != walk[-1]:
            continue
        gammas.append(g0)
    polys = []
    for kind in OPENER_KINDS:
        op = opener_shape(kind, -(C + 1) - tip_offset(kind), y).mirrored()
        restored = _undo_opener(qmod, op)
        if restored is None or not _is_cycle(restored):
            continue
        polys.append(frozenset(restored))
    for g0 in gammas:
        for p0 in polys:
            if not alignment_ok(g0, p0) or not is_bridge(g0):
                continue
            try:
                res = madras_join(g0, p0)
            except JoinError:
                continue
            if res.joined == walk and res.junction == junction:
                out.add((g0, normalize_polygon(p0)))
    return out


# ---------------------------------------------------------------- right-detachable adjacencies


def find_right_detachable(rho: Sequence[Site]) -> List[Tuple[int, int]]:
    rho = tuple(rho)
    index = {s: i for i, s in enumerate(rho)}
    es = set(walk_edges(rho))
    out = []
    for i, (x, y) in enumerate(rho):
        k = index.get((x, y + 1))
        if k is None:
            continue
        a, c = (x - 1, y), (x - 1, y + 1)
        right = sq_edge((x, y), (x, y + 1))
        left = sq_edge(a, c)
        bottom = sq_edge(a, (x, y))
        top = sq_edge(c, (x, y + 1))
        if bottom not in es or top not in es or right in es or left in es:
            continue
        swapped = (es - {bottom, top}) | {left, right}
        adj: Dict[Site, List[Site]] = defaultdict(list)
        for u, v in swapped:
            adj[u].append(v)
            adj[v].append(u)
        seen = {rho[0]}
        stack = [rho[0]]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        wpart = {e for e in swapped if e[0] in seen}
        qpart = swapped - wpart
        if not qpart or walk_from_edges(wpart, rho[0]) is None or not _is_cycle(qpart):
            continue
        wrows = _rows({v for e in wpart for v in e})
        blocked = False
        for yy, xs in _rows({v for e in qpart for v in e}).items():
            if yy in wrows and max(wrows[yy]) >= min(xs):
                blocked = True
                break
        if blocked:
            continue
        j, kk = sorted((i, k))
        out.append((j, kk))
    return sorted(out)


def adjacency_gap_violations(rho: Sequence[Site]) -> List[Tuple[Tuple[int, int], Tuple[int, int]]]:
    """Pairs of equal-gap right-detachable adjacencies whose higher indices are closer than the gap."""
    adj = find_right_detachable(rho)
    bad = []
    for a in range(len(adj)):
        for b in range(a + 1, len(adj)):
            (j1, k1), (j2, k2) = adj[a], adj[b]
            h = k1 - j1
            if k2 - j2 == h and abs(k2 - k1) < h:
                bad.append((adj[a], adj[b]))
    return bad


def chemical_distance(walk: Sequence[Site], u: Site, v: Site) -> int:
    idx = {s: i for i, s in enumerate(walk)}
    return abs(idx[u] - idx[v])


# ---------------------------------------------------------------- contract audit


def subwalk_split(gamma: Sequence[Site], joined: Sequence[Site]) -> Tuple[int, int, int]:
    """(shared prefix edges, middle length, shared suffix edges) of joined relative to gamma."""
    a = 0
    while a + 1 < min(len(gamma), len(joined)) and gamma[a + 1] == joined[a + 1]:
        a += 1
    c = 0
    while c + 1 < min(len(gamma), len(joined)) - a and gamma[-c - 2] == joined[-c - 2]:
        c += 1
    n_joined = len(joined) - 1
    return a, n_joined - a - c, c


def madras_contract(gamma: Sequence[Site], P, res: Optional[JoinResult] = None, check_decode: bool = True) -> Dict[str, bool]:
    """Evaluate the join clauses (all but commutation) on one input pair."""
    gamma = tuple(gamma)
    pedges = _poly_edges(P)
    if res is None:
        res = madras_join(gamma, pedges)
    M = res.joined
    n, m = len(gamma) - 1, len(pedges)
    reflected = not is_bridge(gamma)
    pred = is_reflected_bridge if reflected else is_bridge
    out = {}
    out["length"] = len(M) - 1 == n + m + 16
    out["bridge"] = pred(M) and M[0] == gamma[0] and M[-1] == gamma[-1]
    C, y = res.junction
    a, b = (C + 1, y), (C + 1, y + 1)
    mset = set(M)
    out["chemical"] = a in mset and b in mset and chemical_distance(M, a, b) == m + 7
    sp = split_at_plaquette(M, res.junction)
    if sp is None:
        out["detach"] = False
    else:
        gpart, q = sp
        grows = _rows(gpart)
        ok = True
        for yy, xs in _rows({v for e in q for v in e}).items():
            if yy in grows and max(grows[yy]) >= min(xs):
                ok = False
        out["detach"] = ok
    placed = {_shift_edge(e, res.translate) for e in pedges}
    out["right_side"] = all(v in mset for v in right_side(placed))
    gedges = walk_edges(gamma)
    medges = set(walk_edges(M))
    out["kept_edges"] = sum(1 for e in gedges if e not in medges) <= 2
    pre, mid, suf = subwalk_split(gamma, M)
    out["three_part"] = mid in (m + 17, m + 18) and n - pre - suf in (1, 2)
    if check_decode:
        cands = unjoin(M, res.junction)
        out["decode"] = (gamma, normalize_polygon(pedges)) in cands and len(cands) <= 4
    return out


def commutes(gamma: Sequence[Site], P, P2) -> bool:
    a = madras_join(madras_join(gamma, P).joined, P2).joined
    b = madras_join(madras_join(gamma, P2).joined, P).joined
    return a == b


# ---------------------------------------------------------------- honeycomb join

from .lattice import (  # noqa: E402
    edge as hex_edge,
    face_distance,
    face_vertices,
    faces_of_vertex,
    hex_neighbors,
)

HexVertex = Tuple[int, int]
HexEdge = Tuple[HexVertex, HexVertex]
Face = Tuple[int, int]

_FACE_NBRS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


def level(v: HexVertex) -> int:
    """Index of the vertex height among the distinct vertex heights."""
    q = v[1]
    return 2 * ((q - 1) // 3) if q % 3 == 1 else 2 * ((q - 2) // 3) + 1


def face_nbrs(f: Face) -> List[Face]:
    return [(f[0] + da, f[1] + db) for da, db in _FACE_NBRS]


def face_key(f: Face) -> Tuple[int, int]:
    """(y, then x) of the face centre, in exact units."""
    return (f[1], 2 * f[0] + f[1])


def face_edges(f: Face) -> List[HexEdge]:
    vs = face_vertices(f)
    return [hex_edge(vs[i], vs[(i + 1) % 6]) for i in range(6)]


def faces_of_edge(e: HexEdge) -> List[Face]:
    return sorted(set(faces_of_vertex(e[0])) & set(faces_of_vertex(e[1])))


def hex_walk_edges(walk: Sequence[HexVertex]) -> List[HexEdge]:
    return [hex_edge(a, b) for a, b in zip(walk, walk[1:])]


def is_hex_bridge(walk: Sequence[HexVertex]) -> bool:
    if len(walk) < 2 or first_repeat(walk) is not None:
        return False
    if any(b not in hex_neighbors(a) for a, b in zip(walk, walk[1:])):
        return False
    y0, yn = walk[0][1], walk[-1][1]
    return all(y0 < v[1] <= yn for v in walk[1:])


def hex_shift(e: HexEdge, t: int) -> HexEdge:
    """Horizontal translation by t faces."""
    return hex_edge((e[0][0] + 3 * t, e[0][1]), (e[1][0] + 3 * t, e[1][1]))


def hex_alignment_ok(walk: Sequence[HexVertex], pedges: Iterable[HexEdge]) -> bool:
    pl = [level(v) for e in pedges for v in e]
    gl = [level(v) for v in walk]
    return min(gl) <= min(pl) - 3 and max(pl) + 3 <= max(gl)


def _faces_touching(edges: Iterable[HexEdge]) -> Dict[Face, int]:
    out: Dict[Face, int] = defaultdict(int)
    for e in edges:
        for f in faces_of_edge(e):
            out[f] += 1
    return dict(out)


def _is_good(f: Face, edges: Set[HexEdge]) -> bool:
    mine = [e for e in face_edges(f) if e in edges]
    if len(mine) == 1:
        return True
    if len(mine) == 2:
        return bool(set(mine[0]) & set(mine[1]))
    return False


def _dist_map(sources: Iterable[Face], targets: Iterable[Face]) -> Dict[Face, int]:
    src = list(sources)
    return {t: min(face_distance(t, s) for s in src) for t in targets}


def _set_distance(A: Sequence[Face], B: Sequence[Face]) -> int:
    return min(face_distance(a, b) for a in A for b in B)


def region_boundary(faces: Iterable[Face]) -> Set[HexEdge]:
    out: Set[HexEdge] = set()
    for f in faces:
        for e in face_edges(f):
            out ^= {e}
    return out


def _adjacent(f: Face, g: Face) -> bool:
    return face_distance(f, g) == 1


def q_regions(f0: Face, f1: Face, f2: Face, f3: Face, f4: Face, K: int) -> List[Tuple[Face, ...]]:
    """Face sets S (interior of the middle polygon) with perimeter 10 + 2K, in a fixed order.

    S always holds f1, f2, f3 and otherwise only neighbours of f2; f0 and f4
    each touch S along one edge only.
    """
    a, b = f2
    rel = tuple((f[0] - a, f[1] - b) for f in (f0, f1, f3, f4))
    return [tuple((x + a, y + b) for x, y in S) for S in _q_regions_at_origin(rel, K)]


@lru_cache(maxsize=None)
def _q_regions_at_origin(rel, K: int) -> List[Tuple[Face, ...]]:
    f0, f1, f3, f4 = rel
    f2 = (0, 0)
    base = (f1, f2, f3)
    extra = sorted((g for g in face_nbrs(f2) if g not in (f1, f3)), key=face_key)
    out = []
    for size in range(0, 3):
        for combo in _combinations(extra, size):
            S = base + combo
            if any(_adjacent(f0, g) for g in S if g != f1) or any(_adjacent(f4, g) for g in S if g != f3):
                continue
            if len(region_boundary(S)) != 10 + 2 * K:
                continue
            R = S + (f0, f4)
            if not _simple_region(R):
                continue
            out.append(S)
    return out


def _combinations(items, k):
    from itertools import combinations

    return list(combinations(items, k))


def _simple_region(R: Sequence[Face]) -> bool:
    b = region_boundary(R)
    adj: Dict[HexVertex, List[HexVertex]] = defaultdict(list)
    for u, v in b:
        adj[u].append(v)
        adj[v].append(u)
    if any(len(x) != 2 for x in adj.values()):
        return False
    start = next(iter(adj))
    prev, cur, steps = None, start, 0
    while True:
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        prev, cur = cur, nxt
        steps += 1
        if cur == start:
            break
    return steps == len(b)


def _hex_path(edges: Set[HexEdge], start: HexVertex) -> Optional[Tuple[HexVertex, ...]]:
    adj: Dict[HexVertex, List[HexVertex]] = defaultdict(list)
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    if any(len(v) > 2 for v in adj.values()) or len(adj.get(start, ())) != 1:
        return None
    path = [start]
    prev, cur = None, start
    while True:
        nxt = [v for v in adj[cur] if v != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        path.append(cur)
        if len(path) > len(edges) + 1:
            return None
    if len(path) != len(edges) + 1:
        return None
    return tuple(path)


def hex_slide(walk: Sequence[HexVertex], pedges: Set[HexEdge]) -> int:
    """Largest horizontal face shift at which the face sets sit at dual distance four."""
    Fg = sorted(_faces_touching(hex_walk_edges(walk)))
    Fp = sorted(_faces_touching(pedges))
    t = max(f[0] for f in Fg) - min(f[0] for f in Fp) + 12
    while True:
        d = _set_distance(Fg, [(f[0] + t, f[1]) for f in Fp])
        if d == 4:
            return t
        if d < 4:
            raise JoinError("dual distance skipped four")
        t -= 1


def hex_join(walk: Sequence[HexVertex], P: Iterable[HexEdge]) -> JoinResult:
    walk = tuple(walk)
    pedges0 = {hex_edge(*e) for e in P}
    if not is_hex_bridge(walk):
        raise JoinError("first argument is not a honeycomb bridge")
    if not hex_alignment_ok(walk, pedges0):
        raise JoinError("vertical alignment condition fails")
    t = hex_slide(walk, pedges0)
    pedges = {hex_shift(e, t) for e in pedges0}
    gedges = set(hex_walk_edges(walk))
    Fg = _faces_touching(gedges)
    Fp = _faces_touching(pedges)
    near = set()
    for f in list(Fg) + list(Fp):
        near.update(face_nbrs(f))
    # distances are only needed for faces within reach of both sets
    dg: Dict[Face, int] = {}
    dp: Dict[Face, int] = {}

    def dist_g(f):
        if f not in dg:
            dg[f] = 0 if f in Fg else min(face_distance(f, g) for g in Fg)
        return dg[f]

    def dist_p(f):
        if f not in dp:
            dp[f] = 0 if f in Fp else min(face_distance(f, g) for g in Fp)
        return dp[f]

    mids = set()
    for f in Fp:
        for g1 in face_nbrs(f):
            for g2 in face_nbrs(g1):
                if dist_p(g2) == 2 and dist_g(g2) == 2:
                    mids.add(g2)
    chains = []
    for f2 in mids:
        for f1 in face_nbrs(f2):
            if dist_g(f1) != 1:
                continue
            for f3 in face_nbrs(f2):
                if dist_p(f3) != 1:
                    continue
                for f0 in face_nbrs(f1):
                    if f0 not in Fg or not _is_good(f0, gedges):
                        continue
                    for f4 in face_nbrs(f3):
                        if f4 not in Fp or not _is_good(f4, pedges):
                            continue
                        kg = sum(1 for e in face_edges(f0) if e in gedges)
                        kp = sum(1 for e in face_edges(f4) if e in pedges)
                        key = (kp, face_key(f2), face_key(f1), face_key(f3), face_key(f0), face_key(f4))
                        chains.append((key, (f0, f1, f2, f3, f4), kg, kp))
    chains.sort()
    n, m = len(walk) - 1, len(pedges)
    for _, (f0, f1, f2, f3, f4), kg, kp in chains:
        for S in q_regions(f0, f1, f2, f3, f4, kg + kp):
            R = S + (f0, f4)
            bd = region_boundary(R)
            medges = gedges ^ bd ^ pedges
            path = _hex_path(medges, walk[0])
            if path is None or path[-1] != walk[-1] or len(path) - 1 != n + m + 18:
                continue
            if not is_hex_bridge(path):
                continue
            removed = frozenset((gedges | pedges) - medges)
            added = frozenset(medges - gedges - pedges)
            info = {"chain": (f0, f1, f2, f3, f4), "K": kg + kp, "k_walk": kg, "k_polygon": kp, "region": S}
            return JoinResult(path, f3, t, removed, added, info)
    raise JoinError("no face chain yields a valid join")


def hex_junction_edge(res: JoinResult) -> HexEdge:
    f3, f4 = res.info["chain"][3], res.info["chain"][4]
    u, v = sorted(set(face_vertices(f3)) & set(face_vertices(f4)))
    return (u, v)


def normalize_hex_polygon(edges: Iterable[HexEdge]) -> FrozenSet[HexEdge]:
    es = list(edges)
    mx = min(2 * v[0] + v[1] for e in es for v in e)
    t = -(mx // 6)
    return frozenset(hex_shift(e, t) for e in es)


def hex_unjoin(walk: Sequence[HexVertex], f3: Face) -> Set[Tuple[Tuple[HexVertex, ...], FrozenSet[HexEdge]]]:
    """All (bridge, polygon) pairs whose join is ``walk`` with junction face f3."""
    walk = tuple(walk)
    medges = set(hex_walk_edges(walk))
    out = set()
    tried = set()
    for f2 in face_nbrs(f3):
        for f1 in face_nbrs(f2):
            if f1 == f3 or _adjacent(f1, f3):
                continue
            for f0 in face_nbrs(f1):
                if f0 in (f2, f3) or _adjacent(f0, f2):
                    continue
                for f4 in face_nbrs(f3):
                    if f4 == f2 or _adjacent(f4, f2):
                        continue
                    for K in (2, 3, 4):
                        for S in q_regions(f0, f1, f2, f3, f4, K):
                            R = tuple(sorted(S + (f0, f4)))
                            if R in tried:
                                continue
                            tried.add(R)
                            rb = region_boundary(R)
                            # undoing the join must remove 18 edges net
                            shared = len(rb & medges)
                            if shared - (len(rb) - shared) != 18:
                                continue
                            rest = medges ^ rb
                            g = _walk_component(rest, walk[0])
                            if g is None or g[-1] != walk[-1]:
                                continue
                            pe = rest - set(hex_walk_edges(g))
                            if not pe or not _simple_cycle(pe):
                                continue
                            if len(g) - 1 + len(pe) + 18 != len(walk) - 1:
                                continue
                            if not is_hex_bridge(g) or not hex_alignment_ok(g, pe):
                                continue
                            try:
                                res = hex_join(g, pe)
                            except JoinError:
                                continue
                            if res.joined == walk and res.junction == f3:
                                out.add((g, normalize_hex_polygon(pe)))
    return out


def _walk_component(edges: Set[HexEdge], start: HexVertex) -> Optional[Tuple[HexVertex, ...]]:
    adj: Dict[HexVertex, List[HexVertex]] = defaultdict(list)
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    if len(adj.get(start, ())) != 1 or any(len(v) > 2 for v in adj.values()):
        return None
    path = [start]
    prev, cur = None, start
    while True:
        nxt = [v for v in adj[cur] if v != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        path.append(cur)
        if len(path) > len(edges) + 1:
            return None
    return tuple(path)


def _simple_cycle(edges: Set[HexEdge]) -> bool:
    adj: Dict[HexVertex, List[HexVertex]] = defaultdict(list)
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    if any(len(v) != 2 for v in adj.values()):
        return False
    start = next(iter(adj))
    prev, cur, steps = None, start, 0
    while True:
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        prev, cur = cur, nxt
        steps += 1
        if cur == start:
            break
    return steps == len(edges)


def hex_chemical_distance(walk: Sequence[HexVertex], u: HexVertex, v: HexVertex) -> int:
    idx = {s: i for i, s in enumerate(walk)}
    return abs(idx[u] - idx[v])
