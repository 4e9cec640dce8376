"""Seeded input corpora for the join audits."""
from __future__ import annotations

import random
from functools import lru_cache
from typing import Iterator, List, Tuple

from .enumerate import naive_sap_traces, walks
from .lattice import hex_neighbors
from .surgery import face_nbrs, level, region_boundary, _simple_region, alignment_ok, mj_range
from .walkmodel import PolygonTrace, concatenate, first_repeat, reflect_horizontal, root_wide, sq_edge


@lru_cache(maxsize=None)
def _bridges_upto(n: int):
    return {k: walks("sab", k) for k in range(1, n + 1)}


@lru_cache(maxsize=None)
def _traces(n: int) -> List[PolygonTrace]:
    t = naive_sap_traces(n)
    return [p for L in sorted(t) for p in sorted(t[L], key=lambda q: sorted(q.edges))]


def placed(p: PolygonTrace, j: int):
    w = root_wide(p)
    return frozenset(sq_edge((a[0], a[1] + j), (b[0], b[1] + j)) for a, b in zip(w, w[1:]))


def exhaustive_square_cases(max_bridge: int = 8, lengths=(4, 6)) -> Iterator[Tuple[tuple, frozenset]]:
    """Every bridge up to max_bridge with every polygon of the given lengths at every admissible height."""
    table = naive_sap_traces(max(lengths))
    polys = [p for L in lengths for p in sorted(table.get(L, ()), key=lambda q: sorted(q.edges))]
    for n in range(1, max_bridge + 1):
        for g in walks("sab", n):
            ys = [s[1] for s in g]
            for p in polys:
                # every vertical placement meeting the join precondition
                for j in range(min(ys) - p.geometry.h, max(ys) + 1):
                    pe = placed(p, j)
                    if alignment_ok(g, pe):
                        yield g, pe


def random_square_bridge(rng: random.Random, pieces: Tuple[int, int] = (3, 9)) -> tuple:
    """Concatenation of random short bridges; bridges concatenate to bridges."""
    table = _bridges_upto(8)
    while True:
        g = ((0, 0),)
        for _ in range(rng.randint(*pieces)):
            g = concatenate(g, rng.choice(table[rng.randint(1, 8)]), check=False)
        if first_repeat(g) is None:
            return g


def random_square_cases(seed: int, count: int, max_poly: int = 12, reflect: bool = True):
    rng = random.Random(seed)
    polys = _traces(max_poly)
    made = 0
    while made < count:
        g = random_square_bridge(rng)
        p = rng.choice(polys)
        lo, hi = mj_range(g, p)
        if lo > hi:
            continue
        pe = placed(p, rng.randint(lo, hi))
        if reflect and rng.random() < 0.5:
            g = reflect_horizontal(g)
            pe = frozenset(sq_edge((a[0], -a[1]), (b[0], -b[1])) for a, b in pe)
        made += 1
        yield g, pe


# ---------------------------------------------------------------- honeycomb


def random_hex_bridge(rng: random.Random, length: int, start=(1, 1)) -> tuple:
    """Random self-avoiding growth strictly above the start height, cut at the first global maximum."""
    while True:
        path = [start]
        seen = {start}
        y0 = start[1]
        for _ in range(length):
            opts = [w for w in hex_neighbors(path[-1]) if w not in seen and w[1] > y0]
            if not opts:
                break
            # mild upward drift keeps the walk tall
            weights = [3 if w[1] > path[-1][1] else 1 for w in opts]
            w = rng.choices(opts, weights)[0]
            path.append(w)
            seen.add(w)
        ymax = max(v[1] for v in path)
        cut = min(i for i, v in enumerate(path) if v[1] == ymax)
        if cut >= 2:
            return tuple(path[: cut + 1])


@lru_cache(maxsize=None)
def polyhex_polygons(max_faces: int = 3) -> List[frozenset]:
    """Boundaries of simply connected face sets containing the origin face, up to translation."""
    seen = set()
    out = []
    frontier = {((0, 0),)}
    for _ in range(max_faces):
        nxt = set()
        for fs in frontier:
            key = _canon(fs)
            if key in seen:
                continue
            seen.add(key)
            if _simple_region(fs):
                out.append(frozenset(region_boundary(fs)))
            for f in fs:
                for g in face_nbrs(f):
                    if g not in fs:
                        nxt.add(tuple(sorted(fs + (g,))))
        frontier = nxt
    return out


def _canon(fs):
    a0 = min(f[0] for f in fs)
    b0 = min(f[1] for f in fs)
    return tuple(sorted((a - a0, b - b0) for a, b in fs))


def shift_vertical(edges, faces_up: int):
    """Translate by whole face rows (axial b), which keeps the lattice."""
    d = 3 * faces_up
    return frozenset(((u[0], u[1] + d), (v[0], v[1] + d)) for u, v in edges)


def random_hex_cases(seed: int, count: int, length: Tuple[int, int] = (25, 60), max_faces: int = 3):
    from .surgery import hex_alignment_ok

    rng = random.Random(seed)
    polys = polyhex_polygons(max_faces)
    made = 0
    while made < count:
        g = random_hex_bridge(rng, rng.randint(*length))
        p = rng.choice(polys)
        gl = [level(v) for v in g]
        pl = [level(v) for e in p for v in e]
        # whole face rows move levels by two
        lo = (min(gl) + 3 - min(pl) + 1) // 2
        hi = (max(gl) - 3 - max(pl)) // 2
        if lo > hi:
            continue
        pe = shift_vertical(p, rng.randint(lo, hi))
        if not hex_alignment_ok(g, pe):
            continue
        made += 1
        yield g, pe
