from collections import deque
import math

import pytest

from sawlab import covers as cv
from sawlab.enumerate import hex_polygons
from sawlab.lattice import axis_mid, edge, hex_neighbors, lambda_domain, mid_xy, vertex_xy
from sawlab.observable import _walks_to, pick_z0


# ---------------------------------------------------------------- independent census oracle


def _unwrapped_heights(cycle_edges):
    """Continuous argument of consecutive midpoints, shifted so the first is at height 0."""
    out = []
    prev = None
    acc = 0.0
    for e in cycle_edges:
        X, Y = mid_xy(e)
        a = math.atan2(Y * math.sqrt(3), X)
        if prev is not None:
            d = a - prev
            d -= 2 * math.pi * round(d / (2 * math.pi))
            acc += d
        out.append(acc)
        prev = a
    return out


def _edge_cycle(edges, first):
    adj = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    lo, hi = sorted(first, key=lambda v: v[1])
    seq, prev, cur = [first], lo, hi
    while True:
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        e = edge(cur, nxt)
        if e == first:
            return seq
        seq.append(e)
        prev, cur = cur, nxt


def oracle_census(indices, n_cap):
    """Base polygons translated onto each axis edge, kept when they avoid the central
    hexagon, do not wind around it, and have the required lowest and highest edges."""
    ring = lambda_domain(0).vertices
    table = {}
    for length, polys in hex_polygons(n_cap).items():
        for poly in polys:
            for i in indices:
                target = cv.axis_edge(i)
                t_lo = min(target, key=lambda v: v[1])
                for e in poly:
                    if vertex_xy(e[0])[0] != vertex_xy(e[1])[0]:
                        continue
                    e_lo = min(e, key=lambda v: v[1])
                    dp, dq = t_lo[0] - e_lo[0], t_lo[1] - e_lo[1]
                    if dp % 3 or dq % 3:
                        continue
                    moved = frozenset(edge((a[0] + dp, a[1] + dq), (b[0] + dp, b[1] + dq)) for a, b in poly)
                    if any(v in ring for f in moved for v in f):
                        continue
                    seq = _edge_cycle(moved, target)
                    hs = _unwrapped_heights(seq + [seq[0]])
                    if abs(hs[-1]) > 1e-9:
                        continue  # winds around the centre, so it does not close on the cover
                    hs = hs[:-1]
                    if min(hs[1:]) <= 1e-9:
                        continue
                    top = max(hs)
                    if sum(h > top - 1e-9 for h in hs) != 1:
                        continue
                    m = round(top / (math.pi / 3))
                    if abs(top - m * math.pi / 3) > 1e-9:
                        continue
                    high = seq[hs.index(top)]
                    for j in indices:
                        if cv.rotate_edge(cv.axis_edge(j), m) == high:
                            key = (length, i, j)
                            table[key] = table.get(key, 0) + 1
    return dict(sorted(table.items()))


def test_census_matches_independent_oracle():
    idx = (3, 5, 7)
    assert cv.good_polygon_census(0, idx, 20) == oracle_census(idx, 20)


def test_census_relations_and_parity():
    idx = (3, 5, 7)
    table = cv.good_polygon_census(0, idx, 22)
    rel = cv.census_relations(table, idx, 22)
    assert rel["symmetry_failures"] == 0 and rel["supermult_failures"] == 0
    assert rel["symmetry_checked"] > 0
    assert cv.axis_edge(4) is None and cv.good_polygons(0, 4, 22) == []
    assert (14, 3, 3) in table
    assert cv.census_csv(table).startswith("n,i,j,g\n")


def test_window_excludes_ball():
    polys = cv.good_polygons(0, 3, 18)
    assert polys and cv.window_avoids_ball(polys, 0)
    with pytest.raises(ValueError):
        cv.good_polygons(1, 1, 10)


# ---------------------------------------------------------------- covers and the cover inequality


def test_eight_preimages():
    assert len(set(cv.preimages(axis_mid(0)))) == 8


def _inner_hop(dom):
    """Boundary edge, internal edge, boundary edge: a walk that stays inside."""
    for v in sorted(dom.vertices):
        out_v = [o for o in sorted(hex_neighbors(v)) if o not in dom.vertices]
        if not out_v:
            continue
        for w in sorted(hex_neighbors(v)):
            if w not in dom.vertices:
                continue
            out_w = [o for o in sorted(hex_neighbors(w)) if o not in dom.vertices]
            if out_w:
                return [edge(v, out_v[0]), edge(v, w), edge(w, out_w[0])]
    raise AssertionError("no inside hop")


def _outer_hop(dom):
    """Shortest walk from one boundary edge to another through outside vertices only."""
    z1 = min(dom.boundary)
    start = z1[0] if z1[0] not in dom.vertices else z1[1]
    prev = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        if u != start:
            hits = [w for w in sorted(hex_neighbors(u)) if w in dom.vertices]
            if hits:
                path = [u]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                path.reverse()
                inner = [edge(a, b) for a, b in zip(path, path[1:])]
                return [z1] + inner + [edge(u, hits[0])]
        for w in sorted(hex_neighbors(u)):
            if w not in dom.vertices and w not in prev:
                prev[w] = u
                queue.append(w)
    raise AssertionError("no outside hop")


def test_inner_outer_classification():
    dom = lambda_domain(1)
    assert cv.classify_inner_outer(_inner_hop(dom), 1) == "inner"
    assert cv.classify_inner_outer(_outer_hop(dom), 1) == "outer"
    z = _inner_hop(dom)[0]
    inner = dom.inner_end(z)
    step_in = next(edge(inner, w) for w in sorted(hex_neighbors(inner)) if edge(inner, w) in dom.internal)
    with pytest.raises(ValueError):
        cv.classify_inner_outer([z, step_in], 1)


def test_sheet_displacement_equals_winding():
    checked, failures = cv.sheet_algebra_audit(n_max=12, radius=2, rings=(1, 2))
    assert checked > 50 and failures == 0
    cyc = cv.ball_perimeter(1)
    assert cv.loop_winding_number(cyc) == 1
    assert cv.loop_winding_number(cyc[::-1]) == -1


def test_cover_inequality_small_cap():
    r = cv.lemma_a1_check(1, length_cap=24)
    assert r.holds and r.lhs <= r.rhs_without_trivial
    # the base side is exact: list every walk from z0 to o explicitly
    dom = lambda_domain(1)
    o = axis_mid(0)
    walks = _walks_to(dom, r.z0, [o], len(dom.vertices))[o]
    assert math.isclose(r.lhs, math.fsum(cv.X_CRIT ** len(w) for w in walks), rel_tol=1e-12)
    # all base walks from z0 to o have fewer steps than the cap, and each lifts to a cover walk
    assert r.lift_sum >= r.lhs - 1e-12
    for _, gp, gm, tot in r.plus_minus:
        assert math.isclose(gp + gm, tot, rel_tol=1e-12, abs_tol=1e-15)


def test_cover_inequality_rejects_large_n():
    with pytest.raises(ValueError):
        cv.lemma_a1_check(3)


def test_winding_phases_agree():
    audit = cv.winding_phase_audit(1, length_cap=24)
    assert audit.max_spread < 1e-9
    assert audit.offsets and audit.offset_error < 1e-9
    assert audit.plus_end == "upper"
