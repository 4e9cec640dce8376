"""Exact enumeration of walks and polygons on Z^2 and the honeycomb.

Two engines are kept on purpose.  The ``naive_*`` functions are plain
recursive oracles with no symmetry tricks.  ``count`` is the production
engine: it quotients by lattice symmetries, splits the search tree into
fixed-depth prefixes and sums per-prefix subtotals in prefix order, so the
ledger is identical for every worker count.

Hex lengths follow the midpoint convention (number of traversed vertices)
under lattice tag ``hex``; ``hexv`` is the usual vertex-to-vertex count.
"""
from __future__ import annotations

import hashlib
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from .lattice import (
    STEPS,
    Domain,
    Edge,
    axis_mid,
    edge,
    hex_edges_at,
    hex_neighbors,
    other_end,
    vertex_xy,
)

MODELS = ("saw", "sab", "hsw", "sap", "closing")
LATTICES = ("z2", "hex", "hexv")
X_CRIT = 1.0 / math.sqrt(2.0 + math.sqrt(2.0))
MU_HEX = math.sqrt(2.0 + math.sqrt(2.0))

ENGINE_ID = "prefix-split-v1"


class ResourceCap(Exception):
    def __init__(self, ledger):
        where = "" if ledger is None else f" at n={ledger.high_water}"
        super().__init__("node budget exhausted" + where)
        self.ledger = ledger


@dataclass
class CountLedger:
    model: str
    lattice: str
    counts: Dict[int, int]
    engine: str = ENGINE_ID
    config_hash: str = ""
    complete: bool = True
    high_water: Optional[int] = None

    def csv_rows(self) -> List[str]:
        return [f"{self.model},{self.lattice},{n},{c}" for n, c in sorted(self.counts.items())]

    def to_csv(self) -> str:
        return "\n".join(["model,lattice,n,count"] + self.csv_rows()) + "\n"


def resolve_threads(threads: Optional[int] = None) -> int:
    """Explicit count, else SAWLAB_THREADS, else 1."""
    if threads:
        return max(1, threads)
    try:
        return max(1, int(os.environ.get("SAWLAB_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------- naive oracles


def naive_square(model: str, n_max: int) -> Dict[int, int]:
    """Direct recursion over all walks; filters applied to finished walks."""
    counts = {n: 0 for n in range(n_max + 1)}
    path = [(0, 0)]

    def accept(p):
        if model == "saw":
            return True
        if model == "hsw":
            return all(s[1] > 0 for s in p[1:])
        if model == "sab":
            yn = p[-1][1]
            return all(0 < s[1] <= yn for s in p[1:])
        if model == "closing":
            x, y = p[-1]
            return abs(x) + abs(y) == 1
        raise ValueError(model)

    def rec():
        n = len(path) - 1
        if accept(path):
            counts[n] += 1
        if n == n_max:
            return
        x, y = path[-1]
        for dx, dy in STEPS.values():
            s = (x + dx, y + dy)
            if s not in path:
                path.append(s)
                rec()
                path.pop()

    rec()
    return counts


def naive_sap(n_max: int) -> Dict[int, int]:
    """Polygon traces via closing walks: |SAP_n| = closing_{n-1} / (2n)."""
    cl = naive_square("closing", max(n_max - 1, 0))
    out = {}
    for n in range(4, n_max + 1, 2):
        out[n] = cl[n - 1] // (2 * n)
    return out


def naive_sap_traces(n_max: int):
    """Set of canonical polygon traces, grouped by length (oracle by hashing)."""
    from .walkmodel import PolygonTrace

    found: Dict[int, set] = {}
    path = [(0, 0)]

    def rec():
        n = len(path) - 1
        x, y = path[-1]
        if n >= 3 and abs(x) + abs(y) == 1:
            found.setdefault(n + 1, set()).add(PolygonTrace.from_cycle(path))
        if n == n_max - 1:
            return
        for dx, dy in STEPS.values():
            s = (x + dx, y + dy)
            if s not in path:
                path.append(s)
                rec()
                path.pop()

    rec()
    return found


def naive_hex(n_max: int, convention: str = "hex") -> Dict[int, int]:
    """Honeycomb SAW counts with no symmetry reduction."""
    counts = {n: 0 for n in range(n_max + 1)}
    if convention == "hexv":
        start = (1, 1)
        path = [start]

        def rec():
            n = len(path) - 1
            counts[n] += 1
            if n == n_max:
                return
            for w in hex_neighbors(path[-1]):
                if w not in path:
                    path.append(w)
                    rec()
                    path.pop()

        rec()
        return counts
    z0 = axis_mid(0)
    counts[0] = 1
    verts: List = []

    def rec_mid(mid, v):
        # the walk has just traversed v, entering through mid
        verts.append(v)
        n = len(verts)
        for e in hex_edges_at(v):
            if e == mid:
                continue
            counts[n] += 1
            w = other_end(e, v)
            if n < n_max and w not in verts:
                rec_mid(e, w)
        verts.pop()

    if n_max >= 1:
        for v in z0:
            rec_mid(z0, v)
    return counts


# ---------------------------------------------------------------- production engine (Z^2)
#
# Symmetry quotient: SAW/closing walks start with E and turn N first (weight 8,
# the straight walk weight 4); bridges/HSW start with N and turn E first
# (weight 2, straight walk weight 1).


def _sq_first(model):
    return ("N", "E") if model in ("sab", "hsw") else ("E", "N")


def _sq_allowed_first_turn(model, step, straight):
    first, turn = _sq_first(model)
    if not straight:
        return True
    return step in (first, turn)


def _sq_kernel(args) -> Tuple[int, ...]:
    model, prefix, n_max, budget = args
    first, _ = _sq_first(model)
    path = [(0, 0)]
    for ch in prefix:
        dx, dy = STEPS[ch]
        x, y = path[-1]
        path.append((x + dx, y + dy))
    visited = set(path)
    counts = [0] * (n_max + 1)
    ymax0 = max(s[1] for s in path)
    straight0 = all(ch == first for ch in prefix)
    nodes = [0]
    order = sorted(STEPS)  # lexicographic E, N, S, W

    def dfs(x, y, n, ymax, straight):
        nodes[0] += 1
        if budget and nodes[0] > budget:
            raise ResourceCap(None)
        if not straight:
            if model == "saw" or model == "hsw":
                counts[n] += 1
            elif model == "sab":
                if y == ymax:
                    counts[n] += 1
            elif model == "closing":
                if abs(x) + abs(y) == 1:
                    counts[n] += 1
        if n == n_max:
            return
        rem = n_max - n
        for ch in order:
            if n == 0 and ch != first:
                continue
            if straight and ch not in (first, _sq_first(model)[1]):
                continue
            dx, dy = STEPS[ch]
            s = (x + dx, y + dy)
            if s in visited:
                continue
            if model in ("sab", "hsw") and s[1] <= 0:
                continue
            if model == "closing" and abs(s[0]) + abs(s[1]) - 1 > rem - 1:
                continue
            visited.add(s)
            dfs(s[0], s[1], n + 1, max(ymax, s[1]), straight and ch == first)
            visited.discard(s)

    x, y = path[-1]
    dfs(x, y, len(prefix), ymax0, straight0)
    return tuple(counts)


def _sq_prefixes(model, depth):
    """Reduced-tree prefixes of exactly ``depth`` steps, in lexicographic order."""
    first, turn = _sq_first(model)
    out = []

    def rec(path, steps, straight):
        if len(steps) == depth:
            out.append(steps)
            return
        x, y = path[-1]
        for ch in sorted(STEPS):
            if not steps and ch != first:
                continue
            if straight and steps and ch not in (first, turn):
                continue
            dx, dy = STEPS[ch]
            s = (x + dx, y + dy)
            if s in path:
                continue
            if model in ("sab", "hsw") and s[1] <= 0:
                continue
            rec(path + [s], steps + ch, straight and ch == first)

    rec([(0, 0)], "", True)
    return out


def _straight_counts(model, n_max):
    out = [0] * (n_max + 1)
    for n in range(1, n_max + 1):
        if model in ("saw", "sab", "hsw"):
            out[n] = 1
        elif model == "closing" and n == 1:
            out[n] = 1
    return out


def _run_kernels(kernel, jobs, threads):
    threads = resolve_threads(threads)
    if threads <= 1 or len(jobs) <= 1:
        return [kernel(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        # map preserves submission order, so the merge is in prefix order
        return list(ex.map(kernel, jobs, chunksize=max(1, len(jobs) // (4 * threads))))


def _config_hash(*parts) -> str:
    return hashlib.sha256(repr(parts).encode()).hexdigest()[:12]


def count_square(model: str, n_max: int, threads: Optional[int] = None, depth: int = 4, budget: int = 0) -> CountLedger:
    if model == "sap":
        try:
            cl = count_square("closing", max(n_max - 1, 0), threads, depth, budget)
        except ResourceCap as exc:
            top = exc.ledger.high_water + 1
            part = {n: exc.ledger.counts[n - 1] // (2 * n) for n in range(4, top + 1, 2)}
            raise ResourceCap(CountLedger("sap", "z2", part, complete=False, high_water=top))
        counts = {n: cl.counts[n - 1] // (2 * n) for n in range(4, n_max + 1, 2)}
        return CountLedger("sap", "z2", counts, config_hash=_config_hash("sap", "z2", n_max))
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    first, _ = _sq_first(model)
    depth = max(1, min(depth, n_max))
    reduced = [0] * (n_max + 1)
    # lengths shorter than the split depth are counted during prefix generation
    short = _sq_kernel((model, "", depth - 1, 0)) if depth - 1 >= 0 else ()
    for n, c in enumerate(short):
        reduced[n] += c
    prefixes = _sq_prefixes(model, depth) if n_max >= depth else []
    jobs = [(model, p, n_max, budget) for p in prefixes]
    sym = 2 if model in ("sab", "hsw") else 8
    strw = 1 if model in ("sab", "hsw") else 4
    straight = _straight_counts(model, n_max)

    def finish(upto: int) -> Dict[int, int]:
        counts = {0: 1 if model in ("saw", "sab", "hsw") else 0}
        for n in range(1, upto + 1):
            counts[n] = sym * reduced[n] + strw * straight[n]
        return counts

    try:
        results = _run_kernels(_sq_kernel, jobs, threads)
    except ResourceCap:
        # lengths below the split depth were counted in full before the kernels ran
        top = min(depth - 1, n_max)
        raise ResourceCap(CountLedger(model, "z2", finish(top), complete=False, high_water=top))
    for res in results:
        for n in range(depth, n_max + 1):
            reduced[n] += res[n]
    return CountLedger(model, "z2", finish(n_max), config_hash=_config_hash(model, "z2", n_max, depth))


# ---------------------------------------------------------------- production engine (honeycomb)


def _hex_kernel(args) -> Tuple[int, ...]:
    """Counts walks continuing a fixed vertex prefix; each traversed vertex turns L or R."""
    convention, prefix, n_max = args
    counts = [0] * (n_max + 1)
    path = list(prefix)
    visited = set(path)

    def dfs():
        n = len(path) if convention == "hex" else len(path) - 1
        if convention == "hex":
            # two exit midpoints after the last traversed vertex
            counts[n] += 2
        else:
            counts[n] += 1
        if n == n_max:
            return
        v = path[-1]
        for w in sorted(hex_neighbors(v)):
            if w in visited:
                continue
            if len(path) >= 2 and w == path[-2]:
                continue
            visited.add(w)
            path.append(w)
            dfs()
            path.pop()
            visited.discard(w)

    dfs()
    return tuple(counts)


def count_hex(n_max: int, convention: str = "hex", threads: Optional[int] = None) -> CountLedger:
    """Honeycomb counts using the reflection symmetry about the first edge."""
    counts = {n: 0 for n in range(n_max + 1)}
    if convention == "hexv":
        # fixed first step (x3), first turn left (x2 by reflection)
        v0 = (1, 1)
        v1 = hex_neighbors(v0)[0]
        counts[0] = 1
        if n_max >= 1:
            counts[1] = 3
        if n_max >= 2:
            seconds = [w for w in hex_neighbors(v1) if w != v0]
            left = min(seconds, key=lambda w: _cross(v0, v1, w) <= 0)
            res = _run_kernels(_hex_kernel, [("hexv", (v0, v1, left), n_max)], threads)[0]
            for n in range(2, n_max + 1):
                counts[n] = 6 * res[n]
        return CountLedger("saw", "hexv", counts, config_hash=_config_hash("hexv", n_max))
    return CountLedger("saw", "hex", _hex_mid_from_vertex_prefix(n_max), config_hash=_config_hash("hex", n_max))


def _hex_mid_from_vertex_prefix(n_max: int) -> Dict[int, int]:
    """Midpoint-convention counts from the start edge ``axis_mid(0)``.

    A midpoint walk of length n >= 1 is a first vertex (2 choices, equal by
    symmetry), a vertex SAW of n-1 steps not reusing the start edge, and one
    of two exit midpoints.  The reflection in the start edge halves the work.
    """
    counts = {n: 0 for n in range(n_max + 1)}
    counts[0] = 1
    if n_max == 0:
        return counts
    z0 = axis_mid(0)
    v1, u = z0[0], z0[1]
    counts[1] = 4
    if n_max == 1:
        return counts
    nxt = [w for w in hex_neighbors(v1) if w != u]
    left = [w for w in nxt if _cross(u, v1, w) > 0][0]
    path = [u, v1, left]
    tail = [0] * (n_max + 1)
    visited = {v1, left}

    def dfs():
        n = len(path) - 1  # traversed vertices: path[1:]
        tail[n] += 2
        if n == n_max:
            return
        v = path[-1]
        for w in sorted(hex_neighbors(v)):
            if w in visited or w == path[-2]:
                continue
            visited.add(w)
            path.append(w)
            dfs()
            path.pop()
            visited.discard(w)

    dfs()
    for n in range(2, n_max + 1):
        counts[n] = 4 * tail[n]
    return counts


def _cross(u, v, w) -> int:
    (x1, y1), (x2, y2), (x3, y3) = vertex_xy(u), vertex_xy(v), vertex_xy(w)
    return (x2 - x1) * (y3 - y2) - (y2 - y1) * (x3 - x2)


def count(model: str, lattice: str, n_max: int, threads: Optional[int] = None, budget: int = 0) -> CountLedger:
    if lattice == "z2":
        return count_square(model, n_max, threads, budget=budget)
    if lattice in ("hex", "hexv"):
        if model != "saw":
            raise ValueError("honeycomb ledgers cover the saw model only")
        if lattice == "hex":
            return CountLedger("saw", "hex", _hex_mid_from_vertex_prefix(n_max), config_hash=_config_hash("hex", n_max))
        return count_hex(n_max, "hexv", threads)
    raise ValueError(f"unknown lattice {lattice!r}")


# ---------------------------------------------------------------- visitor


def enumerate_walks(model: str, n: int, callback: Callable[[Tuple[Tuple[int, int], ...]], None]) -> int:
    """Visit every Z^2 object of length n once, in lexicographic step order."""
    path = [(0, 0)]
    seen = set(path)
    visited = [0]
    target = n - 1 if model == "sap" else n

    def ok(p):
        if model == "saw":
            return True
        if model == "hsw":
            return all(s[1] > 0 for s in p[1:])
        if model == "sab":
            yn = p[-1][1]
            return all(0 < s[1] <= yn for s in p[1:])
        if model in ("closing", "sap"):
            x, y = p[-1]
            return abs(x) + abs(y) == 1
        raise ValueError(model)

    traces = set()

    def rec():
        m = len(path) - 1
        if m == target:
            if ok(path):
                if model == "sap":
                    from .walkmodel import PolygonTrace

                    t = PolygonTrace.from_cycle(path)
                    if t in traces:
                        return
                    traces.add(t)
                    callback(t)
                else:
                    callback(tuple(path))
                visited[0] += 1
            return
        x, y = path[-1]
        for ch in sorted(STEPS):
            dx, dy = STEPS[ch]
            s = (x + dx, y + dy)
            if s in seen:
                continue
            if model in ("sab", "hsw") and s[1] <= 0:
                continue
            seen.add(s)
            path.append(s)
            rec()
            path.pop()
            seen.discard(s)

    rec()
    return visited[0]


def walks(model: str, n: int) -> List[Tuple[Tuple[int, int], ...]]:
    out: List = []
    enumerate_walks(model, n, out.append)
    return out


# ---------------------------------------------------------------- honeycomb domain sums


@dataclass
class DomainHistogram:
    """Exact counts of self-avoiding walks from z0 in a domain, keyed by
    (end midpoint, length, left turns minus right turns)."""

    domain: str
    z0: Edge
    counts: Dict[Edge, Dict[Tuple[int, int], int]] = field(default_factory=dict)
    length_cap: Optional[int] = None

    def total(self, z: Edge, x: float, sigma: float = 0.0) -> complex:
        acc = 0j
        for (n, t), c in self.counts.get(z, {}).items():
            acc += c * (x ** n) * complex(math.cos(-sigma * t * math.pi / 3), math.sin(-sigma * t * math.pi / 3))
        return acc

    def g(self, z: Edge, x: float) -> float:
        acc = 0.0
        for (n, _), c in self.counts.get(z, {}).items():
            acc += c * x ** n
        return acc

    def windings(self, z: Edge) -> set:
        return {t for (_, t) in self.counts.get(z, {})}


def _turn_sign(pu, pv, pw) -> int:
    c = (pv[0] - pu[0]) * (pw[1] - pv[1]) - (pv[1] - pu[1]) * (pw[0] - pv[0])
    return 1 if c > 0 else -1


class _DomainGraph:
    """Integer-indexed honeycomb patch: slot s of vertex i leads to nbr[i][s]."""

    def __init__(self, verts: frozenset):
        inner = sorted(verts)
        outer = sorted({w for v in inner for w in hex_neighbors(v)} - set(verts))
        self.verts = inner + outer
        self.n_inner = len(inner)
        index = {v: i for i, v in enumerate(self.verts)}
        self.nbr: List[Tuple[int, int, int]] = []
        self.back: List[Tuple[int, int, int]] = []
        for v in inner:
            ws = sorted(hex_neighbors(v))
            self.nbr.append(tuple(index[w] for w in ws))
        for i, v in enumerate(inner):
            self.back.append(tuple(self._slot(j, i) if j < self.n_inner else -1 for j in self.nbr[i]))
        # turn[i][a][b]: sign of the turn entering via slot a and leaving via slot b
        self.turn = []
        for i, v in enumerate(inner):
            ws = sorted(hex_neighbors(v))
            pv = vertex_xy(v)
            self.turn.append(
                tuple(tuple(0 if a == b else _turn_sign(vertex_xy(ws[a]), pv, vertex_xy(ws[b])) for b in range(3)) for a in range(3))
            )

    def _slot(self, j: int, i: int) -> int:
        return self.nbr[j].index(i)

    def edge_at(self, i: int, s: int) -> Edge:
        return edge(self.verts[i], self.verts[self.nbr[i][s]])


def _visit_walks(g: _DomainGraph, state, cap: int, visits: dict, stop_at=None, out=None) -> None:
    """Depth-first over self-avoiding continuations; tallies (vertex, entry slot, n, turns)."""
    path, slot0, n0, t0 = state
    on = bytearray(g.n_inner)
    for i in path:
        on[i] = 1
    nbr, back, turn = g.nbr, g.back, g.turn

    def rec(i, a, n, t):
        key = (i, a, n, t)
        visits[key] = visits.get(key, 0) + 1
        if n >= cap:
            return
        row = turn[i][a]
        nb = nbr[i]
        bk = back[i]
        for b in (0, 1, 2):
            if b == a:
                continue
            j = nb[b]
            if bk[b] < 0 or on[j]:
                continue
            tt = t + row[b]
            if stop_at is not None and n + 1 == stop_at:
                out.append((path + [j], bk[b], n + 1, tt))
                continue
            on[j] = 1
            path.append(j)
            rec(j, bk[b], n + 1, tt)
            path.pop()
            on[j] = 0

    rec(path[-1], slot0, n0, t0)


def _domain_kernel(args) -> dict:
    verts, state, cap = args
    g = _DomainGraph(verts)
    visits: dict = {}
    path, slot, n, t = state
    _visit_walks(g, (list(path), slot, n, t), cap, visits)
    return visits


def domain_histogram(
    dom: Domain,
    z0: Edge,
    length_cap: Optional[int] = None,
    predicate=None,
    threads: Optional[int] = None,
    split_depth: int = 10,
) -> DomainHistogram:
    """All self-avoiding midpoint walks from z0 inside dom, binned by end, length and turns.

    ``predicate(vertex)`` may further restrict the traversable vertices.
    """
    verts = frozenset(v for v in dom.vertices if predicate is None or predicate(v))
    if z0[0] in verts and z0[1] in verts:
        raise ValueError("z0 must be a boundary midpoint")
    start = z0[0] if z0[0] in verts else z0[1]
    if start not in verts:
        raise ValueError("z0 does not touch the domain")
    cap = length_cap if length_cap is not None else len(verts)
    g = _DomainGraph(verts)
    i0 = g.verts.index(start)
    slot0 = g.nbr[i0].index(g.verts.index(other_end(z0, start)))
    visits: dict = {}
    states: list = []
    depth = min(split_depth, cap)
    _visit_walks(g, ([i0], slot0, 1, 0), cap, visits, stop_at=depth if depth > 1 else None, out=states)
    if states:
        jobs = [(verts, s, cap) for s in states]
        if resolve_threads(threads) <= 1:
            # same traversal in-process; avoids rebuilding the graph per job
            for path, slot, n, t in states:
                _visit_walks(g, (list(path), slot, n, t), cap, visits)
        else:
            for part in _run_kernels(_domain_kernel, jobs, threads):
                for key, c in part.items():
                    visits[key] = visits.get(key, 0) + c
    hist: Dict[Edge, Dict[Tuple[int, int], int]] = {z0: {(0, 0): 1}}
    for (i, a, n, t), c in visits.items():
        row = g.turn[i][a]
        for b in (0, 1, 2):
            if b == a:
                continue
            bucket = hist.setdefault(g.edge_at(i, b), {})
            key = (n, t + row[b])
            bucket[key] = bucket.get(key, 0) + c
    # fixed key order keeps any serialisation independent of worker scheduling
    ordered = {z: dict(sorted(hist[z].items())) for z in sorted(hist)}
    return DomainHistogram(dom.name, z0, ordered, length_cap)


def partition_function(dom: Domain, z0: Edge, z: Edge, x: float, length_cap: Optional[int] = None) -> dict:
    h = domain_histogram(dom, z0, length_cap)
    return {"domain": dom.name, "z0": z0, "z": z, "x": x, "cap": length_cap, "value": h.g(z, x)}


def strip_bridge_B(k: int, width_cap: int, length_cap: int, x: float = X_CRIT) -> float:
    """Truncated strip bridge sum: walks from the bottom point (1/2, 0) to Top_k."""
    from .lattice import strip_domain

    dom = strip_domain(k, width_cap)
    z0 = axis_mid(0)
    h = domain_histogram(dom, z0, length_cap)
    return sum(h.g(z, x) for z in dom.labels["top"])


# ---------------------------------------------------------------- growth report


def mu_report(lattice: str, n_max: int) -> List[Tuple[int, int, float]]:
    if lattice == "z2":
        led = count_square("saw", n_max)
    else:
        led = count(model="saw", lattice=lattice, n_max=n_max)
    return [(n, c, c ** (1.0 / n)) for n, c in sorted(led.counts.items()) if n >= 1]


# ---------------------------------------------------------------- polygon traces


def sap_traces(n_max: int) -> Dict[int, list]:
    """Each polygon once: rooted at its least vertex, first step north, last step west into the root."""
    from .walkmodel import PolygonTrace

    out: Dict[int, list] = {n: [] for n in range(4, n_max + 1, 2)}
    path = [(0, 0), (0, 1)]
    seen = set(path)

    def dfs():
        x, y = path[-1]
        steps = len(path) - 1
        if (x, y) == (1, 0):
            out[steps + 1].append(PolygonTrace.from_cycle(path))
            return
        for ch in sorted(STEPS):
            dx, dy = STEPS[ch]
            s = (x + dx, y + dy)
            if s in seen or s[0] < 0 or (s[0] == 0 and s[1] <= 0):
                continue
            if steps + 1 + abs(s[0] - 1) + abs(s[1]) + 1 > n_max:
                continue
            seen.add(s)
            path.append(s)
            dfs()
            path.pop()
            seen.discard(s)

    if n_max >= 4:
        dfs()
    return out


def hex_polygons(n_max: int) -> Dict[int, list]:
    """Honeycomb polygons as edge sets, each once, anchored at the least vertex in (y, x) order."""
    from .lattice import edge as hedge

    out: Dict[int, list] = {n: [] for n in range(6, n_max + 1, 2)}
    found = set()

    def key(v):
        return (v[1], 2 * v[0] + v[1])

    # the least vertex of any polygon is an up-vertex with both upper neighbours used
    v0 = (1, 1)
    nb = sorted((w for w in hex_neighbors(v0) if key(w) > key(v0)), key=key)
    if len(nb) != 2:
        raise RuntimeError("chart assumption violated")
    first, last = nb
    path = [v0, first]
    seen = set(path)

    def dfs():
        v = path[-1]
        L = len(path) - 1
        if v == last:
            if L + 1 <= n_max:
                es = frozenset(hedge(a, b) for a, b in zip(path, path[1:] + [v0]))
                if es not in found:
                    found.add(es)
                    out[L + 1].append(es)
            return
        if L + 1 >= n_max:
            return
        for w in sorted(hex_neighbors(v)):
            if w in seen or key(w) <= key(v0):
                continue
            seen.add(w)
            path.append(w)
            dfs()
            path.pop()
            seen.discard(w)

    dfs()
    return out
