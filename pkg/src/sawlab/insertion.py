"""Polygon insertion into the tall branches of a confined half-space walk, and its decoder.

Indices follow the left-to-right order of tall branches and run from 1.
A join location is a pair (branch, height).  Encoding Madras-joins the
given wide polygons onto the listed branches and emits the bridge list of
the modified walk.  Decoding walks back from a bridge list: it finds the
lowest contact between neighbouring branches, tries the nearby junction
plaquettes, unjoins, and keeps only candidates that re-encode exactly.
"""
from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .hwdecomp import DEFAULT_EPS, record_points
from .surgery import (
    JoinError,
    find_right_detachable,
    is_bridge,
    mj_at_height,
    unjoin,
)
from .walkmodel import (
    PolygonTrace,
    Site,
    Walk,
    anchor,
    concatenate,
    first_repeat,
    from_steps,
    is_hsw,
    lowest_widest_row,
    polygon_from_text,
    polygon_text,
    reflect_horizontal,
    to_steps,
)
from .widepoly import is_wide

Location = Tuple[int, int]


class InsertionError(ValueError):
    pass


@dataclass(frozen=True)
class InsertionParams:
    n: int
    u: int = 1
    m: int = 4
    eps: float = DEFAULT_EPS
    tall_height: Optional[float] = None  # defaults to n^(1/2 - eps)
    rect_halfwidth: Optional[float] = None  # defaults to n^(1/2 + eps)

    @property
    def tall(self) -> float:
        return self.tall_height if self.tall_height is not None else self.n ** (0.5 - self.eps)

    @property
    def halfwidth(self) -> float:
        return self.rect_halfwidth if self.rect_halfwidth is not None else self.n ** (0.5 + self.eps)

    @property
    def margin(self) -> int:
        return 16 * self.u + 3

    @property
    def separation(self) -> int:
        return 32 * self.u + 5

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "u": self.u,
            "m": self.m,
            "eps": self.eps,
            "tall_height": self.tall_height,
            "rect_halfwidth": self.rect_halfwidth,
        }

    @staticmethod
    def from_json(d: dict) -> "InsertionParams":
        return InsertionParams(**d)


@dataclass
class InsertionContext:
    walk: Walk
    params: InsertionParams
    record_indices: Tuple[int, ...]
    t: int
    j_min: int
    j_max: int
    order: Tuple[int, ...]  # order[l-1] = decomposition position of the l-th tall branch
    tall_branches: Tuple[Walk, ...]
    z_table: Dict[Location, Site] = field(default_factory=dict)

    def branch(self, l: int) -> Walk:
        return self.tall_branches[l - 1]


# ---------------------------------------------------------------- context


def _branches(walk: Sequence[Site], idx: Sequence[int]) -> List[Walk]:
    return [tuple(walk[a : b + 1]) for a, b in zip(idx, idx[1:])]


def crossings(branch: Sequence[Site], lo: int, hi: int) -> List[Tuple[int, int]]:
    """Index intervals that run between heights lo and hi, strictly inside in between."""
    out = []
    last_edge = None  # (index, height) of the last visit to lo or hi
    for i, (_, y) in enumerate(branch):
        if y == lo or y == hi:
            if last_edge is not None and last_edge[1] != y:
                out.append((last_edge[0], i))
            last_edge = (i, y)
        elif not lo < y < hi:
            last_edge = None
    return out


def leftmost_crossing_x(branch: Sequence[Site], lo: int, hi: int) -> int:
    xs = []
    for a, b in crossings(branch, lo, hi):
        s = branch[a] if branch[a][1] == lo else branch[b]
        xs.append(s[0])
    if not xs:
        raise InsertionError("tall branch does not cross the rectangle")
    return min(xs)


def _tall_order(branches: Sequence[Walk], t: int, lo: int, hi: int) -> Tuple[int, ...]:
    keys = [(leftmost_crossing_x(branches[i], lo, hi), i) for i in range(t)]
    return tuple(i for _, i in sorted(keys))


def rightmost_at(branch: Sequence[Site], j: int) -> Optional[Site]:
    xs = [s[0] for s in branch if s[1] == j]
    return (max(xs), j) if xs else None


def build_context(walk: Sequence[Site], params: InsertionParams, check_confined: bool = True) -> InsertionContext:
    walk = tuple(walk)
    if not is_hsw(walk):
        raise InsertionError("input is not a half-space walk")
    if check_confined and not all(abs(s[0] - walk[0][0]) <= params.halfwidth for s in walk):
        raise InsertionError("walk leaves the rectangle's horizontal range")
    dec = record_points(walk)
    heights = dec.heights()
    t = 0
    while t < len(heights) and heights[t] > params.tall:
        t += 1
    if t == 0:
        raise InsertionError("no branch exceeds the tall threshold")
    branches = _branches(walk, dec.record_indices)
    last = branches[t - 1]
    lo, hi = min(s[1] for s in last), max(s[1] for s in last)
    order = _tall_order(branches, t, lo, hi)
    tall = tuple(branches[i] for i in order)
    ctx = InsertionContext(walk, params, dec.record_indices, t, lo, hi, order, tall)
    for l in range(1, t + 1):
        for j in range(lo, hi + 1):
            z = rightmost_at(tall[l - 1], j)
            if z is not None:
                ctx.z_table[(l, j)] = z
    return ctx


# ---------------------------------------------------------------- join indices


def height_window(ctx: InsertionContext) -> range:
    p = ctx.params
    return range(ctx.j_min + p.margin, ctx.j_max - p.margin + 1)


def viable_indices(ctx: InsertionContext) -> List[Location]:
    out = []
    for l in range(1, ctx.t):
        for j in height_window(ctx):
            a, b = ctx.z_table.get((l, j)), ctx.z_table.get((l + 1, j))
            if a is not None and b is not None and b[0] - a[0] <= ctx.params.u:
                out.append((l, j))
    return out


def blocked_points(ctx: InsertionContext) -> Dict[Location, List[Site]]:
    """Points strictly right of z_{l,j}, up to u steps, for each non-viable pair in range."""
    viable = set(viable_indices(ctx))
    out = {}
    for l in range(1, ctx.t):
        for j in height_window(ctx):
            if (l, j) in viable:
                continue
            z = ctx.z_table.get((l, j))
            if z is None:
                continue
            out[(l, j)] = [(z[0] + d, j) for d in range(1, ctx.params.u + 1)]
    return out


def blocking_disjoint(ctx: InsertionContext) -> bool:
    seen = set()
    for pts in blocked_points(ctx).values():
        for s in pts:
            if s in seen:
                return False
            seen.add(s)
    return True


def is_location_list(ctx: InsertionContext, lst: Sequence[Location]) -> bool:
    viable = set(viable_indices(ctx))
    if len(set(lst)) != len(lst) or not all(x in viable for x in lst):
        return False
    sep = ctx.params.separation
    for (l1, j1), (l2, j2) in itertools.combinations(lst, 2):
        if abs(l1 - l2) <= 1 and abs(j1 - j2) < sep:
            return False
    return True


def location_lists(ctx: InsertionContext, K: int, rng: Optional[random.Random] = None, limit: Optional[int] = None) -> Iterator[Tuple[Location, ...]]:
    """Join location lists of size K: all of them in lexicographic order, or random ones when rng is given."""
    viable = viable_indices(ctx)
    if K < 0:
        raise InsertionError("K must be non-negative")
    sep = ctx.params.separation

    def compatible(a, b):
        return abs(a[0] - b[0]) > 1 or abs(a[1] - b[1]) >= sep

    emitted = 0
    if rng is None:
        def rec(start, chosen):
            if len(chosen) == K:
                yield tuple(chosen)
                return
            for i in range(start, len(viable)):
                c = viable[i]
                if all(compatible(c, d) for d in chosen):
                    chosen.append(c)
                    yield from rec(i + 1, chosen)
                    chosen.pop()

        for lst in rec(0, []):
            yield lst
            emitted += 1
            if limit is not None and emitted >= limit:
                return
        return
    attempts = 0
    while limit is None or emitted < limit:
        attempts += 1
        if attempts > 1000 * (limit or 1):
            return
        pool = list(viable)
        rng.shuffle(pool)
        chosen: List[Location] = []
        for c in pool:
            if len(chosen) == K:
                break
            if all(compatible(c, d) for d in chosen):
                chosen.append(c)
        if len(chosen) == K:
            yield tuple(sorted(chosen))
            emitted += 1


def max_packable(ctx: InsertionContext) -> int:
    """Greedy packing size; a lower bound on the largest list."""
    best: List[Location] = []
    sep = ctx.params.separation
    for c in viable_indices(ctx):
        if all(abs(c[0] - d[0]) > 1 or abs(c[1] - d[1]) >= sep for d in best):
            best.append(c)
    return len(best)


def join_count_report(ctx: InsertionContext, K: int) -> dict:
    """Viable-index count against the r n^(1/2-eps)/4 bound and the greedy list-count product."""
    p = ctx.params
    join = len(viable_indices(ctx))
    r = len(ctx.record_indices) - 1
    bound = 0.25 * r * p.n ** (0.5 - p.eps)
    prod = 1.0
    for i in range(K):
        prod *= max(join - 3 * p.separation * i, 0)
    return {
        "join": join,
        "branches": r,
        "tall": ctx.t,
        "quarter_r_bound": bound,
        "bound_holds": join >= bound,
        "list_lower_bound": prod / math.factorial(K) if K >= 0 else 0.0,
    }


# ---------------------------------------------------------------- witness


def intersection_witness(ctx: InsertionContext, l: int, j: int, p: PolygonTrace) -> Site:
    """Lowest, then leftmost, vertex of MJ_j(branch l, p) on branch l+1 but not on branch l."""
    if not 1 <= l < ctx.t:
        raise InsertionError("branch index out of range")
    res = mj_at_height(ctx.branch(l), p, j)
    mine = set(ctx.branch(l))
    right = set(ctx.branch(l + 1))
    hits = [s for s in res.joined if s in right and s not in mine]
    if not hits:
        raise InsertionError(f"no witness at ({l}, {j})")
    return min(hits, key=lambda s: (s[1], s[0]))


# ---------------------------------------------------------------- encode


@dataclass
class EncodeResult:
    bridges: List[Walk]
    branches: List[Walk]  # post-surgery branches in decomposition order, absolute
    length: int


def _bridge_list(branches: Sequence[Walk]) -> List[Walk]:
    out = []
    for i, b in enumerate(branches):
        piece = anchor(b)
        if i % 2 == 1:
            piece = reflect_horizontal(piece)
        out.append(piece)
    return out


def _insert_all(branch: Walk, items: Sequence[Tuple[int, PolygonTrace]]) -> Walk:
    """Join each (height, polygon) in the given order."""
    cur = branch
    for j, p in items:
        cur = mj_at_height(cur, p, j).joined
    return cur


def phi_encode(
    walk: Sequence[Site],
    polygons: Sequence[PolygonTrace],
    lst: Sequence[Location],
    params: InsertionParams,
    ctx: Optional[InsertionContext] = None,
    check: bool = True,
    application_order: Optional[Sequence[int]] = None,
) -> EncodeResult:
    """Insert polygons[i] at the i-th location of the list sorted by (branch, height).

    Joins run in height order per branch unless ``application_order`` (a
    permutation of positions in the sorted list) says otherwise; separated
    locations make the result independent of that order.
    """
    ctx = ctx or build_context(walk, params)
    lst = list(lst)
    if len(polygons) != len(lst):
        raise InsertionError("one polygon per list entry")
    if check and not is_location_list(ctx, lst):
        raise InsertionError("not a join location list")
    ranked = sorted(lst)
    if application_order is None:
        application_order = range(len(ranked))
    elif sorted(application_order) != list(range(len(ranked))):
        raise InsertionError("application order must permute the list positions")
    for p in polygons:
        if check and (p.length != params.m or not is_wide(p, params.u)):
            raise InsertionError("polygon is not in the wide class for (u, m)")
    per_branch: Dict[int, List[Tuple[int, PolygonTrace]]] = {}
    for rank in application_order:
        l, j = ranked[rank]
        per_branch.setdefault(l, []).append((j, polygons[rank]))
    branches = list(_branches(ctx.walk, ctx.record_indices))
    for l, items in per_branch.items():
        if l >= ctx.t:
            raise InsertionError("insertion on the rightmost tall branch")
        pos = ctx.order[l - 1]
        branches[pos] = _insert_all(branches[pos], items)
    bl = _bridge_list(branches)
    return EncodeResult(bl, branches, sum(len(b) - 1 for b in bl))


# ---------------------------------------------------------------- decode


def _assemble(bridges: Sequence[Sequence[Site]]) -> Tuple[Walk, Tuple[int, ...]]:
    walk: Walk = ((0, 0),)
    idx = [0]
    for i, b in enumerate(bridges):
        piece = anchor(b)
        if i % 2 == 1:
            piece = reflect_horizontal(piece)
        walk = concatenate(walk, piece, check=False)
        idx.append(len(walk) - 1)
    return walk, tuple(idx)


def _tau_edges(edges):
    return frozenset(tuple(sorted(((a[0], -a[1]), (b[0], -b[1])))) for a, b in edges)


def lowest_contact(rho: Walk, right: Walk, lo: int, hi: int) -> Optional[int]:
    """Index on rho of the lowest-then-leftmost shared vertex strictly inside (lo, hi)."""
    rs = set(right[1:-1])
    hits = [(s[1], s[0], i) for i, s in enumerate(rho) if 0 < i < len(rho) - 1 and s in rs and lo < s[1] < hi]
    return min(hits)[2] if hits else None


def junction_candidates(rho: Walk, i: int, m: int) -> List[Tuple[int, int]]:
    """Junction corners from gap-(m+7) right-detachable adjacencies with upper index near i."""
    out = []
    for a, b in find_right_detachable(rho):
        if b - a != m + 7:
            continue
        if not (i - m - 18 <= b <= i + m + 18):
            continue
        x, y = rho[a]
        y = min(rho[a][1], rho[b][1])
        out.append((x - 1, y))
    return out


@dataclass
class DecodeStep:
    options: int  # unjoin outcomes tried at this step, over every junction candidate


@dataclass
class Candidate:
    walk: Walk
    polygons: List[PolygonTrace]
    locations: List[Location]


@dataclass
class DecodeReport:
    candidates: List[Candidate]
    raw_leaves: int
    max_step_options: int
    rejected: int


def _unjoin_one(rho: Walk, right: Walk, lo: int, hi: int, m: int, stats: dict):
    """Yield (pre-surgery branch, polygon edges) for the lowest insertion, or nothing when none is left."""
    i = lowest_contact(rho, right, lo, hi)
    if i is None:
        return None
    flipped = not is_bridge(rho)
    base = reflect_horizontal(rho) if flipped else rho
    outs = []
    for junction in junction_candidates(base, i, m):
        try:
            got = unjoin(base, junction)
        except JoinError:
            continue
        for g0, p0 in sorted(got):
            if flipped:
                outs.append((reflect_horizontal(g0), _tau_edges(p0)))
            else:
                outs.append((g0, p0))
    stats["max_step"] = max(stats.get("max_step", 0), len(outs))
    return outs


def _decode_branch(rho: Walk, right: Walk, lo: int, hi: int, params: InsertionParams, stats: dict, depth: int = 0):
    """All (original branch, [(height, polygon)]) decodings of one branch."""
    outs = _unjoin_one(rho, right, lo, hi, params.m, stats)
    if outs is None:
        return [(rho, [])]
    results = []
    for g0, p0 in outs:
        p0 = frozenset(p0)
        verts = {v for e in p0 for v in e}
        j, _ = lowest_widest_row(verts)
        trace = PolygonTrace.from_edges(p0)
        if trace.length != params.m or not is_wide(trace, params.u):
            continue
        for g_final, items in _decode_branch(g0, right, lo, hi, params, stats, depth + 1):
            results.append((g_final, [(j, trace)] + items))
    return results


def phi_decode(bridges: Sequence[Sequence[Site]], params: InsertionParams, K: Optional[int] = None) -> DecodeReport:
    bridges = [tuple(b) for b in bridges]
    chi, idx = _assemble(bridges)
    branches = _branches(chi, idx)
    heights = [abs(b[-1][1] - b[0][1]) for b in branches]
    t = 0
    while t < len(heights) and heights[t] > params.tall:
        t += 1
    if t == 0:
        return DecodeReport([], 0, 0, 0)
    last = branches[t - 1]
    lo, hi = min(s[1] for s in last), max(s[1] for s in last)
    try:
        order = _tall_order(branches, t, lo, hi)
    except InsertionError:
        return DecodeReport([], 0, 0, 0)
    stats: dict = {}
    per_branch = []
    for l in range(1, t):
        rho = branches[order[l - 1]]
        right = branches[order[l]]
        per_branch.append(_decode_branch(rho, right, lo, hi, params, stats))
    raw = 1
    for opts in per_branch:
        raw *= len(opts)
    cands: List[Candidate] = []
    rejected = 0
    for combo in itertools.product(*per_branch):
        new = list(branches)
        polys: List[PolygonTrace] = []
        locs: List[Location] = []
        for l, (g0, items) in enumerate(combo, start=1):
            new[order[l - 1]] = g0
            for j, p in sorted(items, key=lambda it: it[0]):
                locs.append((l, j))
                polys.append(p)
        if K is not None and len(locs) != K:
            rejected += 1
            continue
        walk = new[0]
        for b in new[1:]:
            walk = walk + tuple(b[1:])
        if first_repeat(walk) is not None or not is_hsw(walk):
            rejected += 1
            continue
        try:
            ctx = build_context(walk, params)
            enc = phi_encode(walk, polys, locs, params, ctx)
        except (InsertionError, JoinError):
            rejected += 1
            continue
        if [tuple(b) for b in enc.bridges] != bridges:
            rejected += 1
            continue
        cands.append(Candidate(walk, polys, locs))
    return DecodeReport(cands, raw, stats.get("max_step", 0), rejected)


# ---------------------------------------------------------------- fixtures


def comb_walk(columns: Sequence[Tuple[int, int]], gaps: Sequence[int], rng: Optional[random.Random] = None, wiggle: float = 0.0) -> Walk:
    """Half-space walk of vertical runs joined by short horizontal steps.

    ``columns`` lists (low, high) for each run; run i climbs when i is even
    and descends when odd.  ``gaps[i]`` is the horizontal step count after
    run i.  With ``wiggle`` > 0, runs take occasional two-row detours into
    whichever neighbouring gap is at least three wide.
    """
    steps = []
    y = 0
    for i, (lo, hi) in enumerate(columns):
        target = hi if i % 2 == 0 else lo
        d = "N" if target > y else "S"
        run = abs(target - y)
        left = gaps[i - 1] if i > 0 else 99
        right = gaps[i] if i < len(gaps) else 99
        side = ("E", "W") if right >= 3 else ("W", "E") if left >= 3 else None
        k = 0
        last_bump = -9
        while k < run:
            # a straight step separates consecutive detours
            if side and rng is not None and 2 <= k < run - 4 and k > last_bump + 2 and rng.random() < wiggle:
                steps.extend([side[0], d, d, side[1]])
                k += 2
                last_bump = k
            else:
                steps.append(d)
                k += 1
        y = target
        if i < len(gaps):
            steps.extend("E" * gaps[i])
    walk = from_steps("".join(steps))
    if first_repeat(walk) is not None or not is_hsw(walk):
        raise InsertionError("fixture parameters produce an invalid walk")
    return walk


FIXTURE_SHAPES = (
    ((0, 70), (3, 70), (3, 66), (8, 66), (8, 60)),
    ((0, 64), (2, 64), (2, 62), (6, 62)),
    ((0, 90), (4, 90), (4, 85), (9, 85), (9, 80), (12, 80)),
    ((0, 76), (2, 76), (2, 72), (5, 72), (5, 70)),
)


def fixture_walks(seed: int = 0, per_shape: int = 3) -> List[Walk]:
    """Deterministic toy corpus: comb walks with gaps of one or three and random detours."""
    rng = random.Random(seed)
    out = []
    for cols in FIXTURE_SHAPES:
        out.append(comb_walk(cols, [1] * (len(cols) - 1)))
        made = 0
        while made < per_shape:
            gaps = [rng.choice((1, 1, 3)) for _ in range(len(cols) - 1)]
            out.append(comb_walk(cols, gaps, rng, wiggle=0.15))
            made += 1
    return out


# ---------------------------------------------------------------- JSON bundles


def bundle_to_json(walk: Walk, params: InsertionParams, polygons: Sequence[PolygonTrace], lst: Sequence[Location]) -> str:
    return json.dumps(
        {
            "walk": to_steps(walk),
            "params": params.to_json(),
            "polygons": [polygon_text(p) for p in polygons],
            "list": [list(x) for x in lst],
        },
        sort_keys=True,
    )


def bundle_from_json(text: str):
    d = json.loads(text)
    return (
        from_steps(d["walk"]),
        InsertionParams.from_json(d["params"]),
        [polygon_from_text(s) for s in d["polygons"]],
        [tuple(x) for x in d["list"]],
    )
