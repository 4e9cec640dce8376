from fractions import Fraction

import pytest

from sawlab import widepoly as wp
from sawlab.enumerate import count_square, naive_sap_traces
from sawlab.walkmodel import PolygonTrace, geometry_of_sites


def _direct_wide(u, m):
    # filter the closing-walk oracle's traces directly
    return sum(1 for p in naive_sap_traces(m).get(m, []) if p.geometry.lw >= u and p.geometry.h <= 16 * u)


@pytest.mark.parametrize("u,m,expected", [(1, 4, 1), (2, 4, 0), (2, 8, 6), (2, 10, 27), (1, 8, 7)])
def test_wide_counts(u, m, expected):
    assert wp.wsap_count(u, m) == expected == _direct_wide(u, m)


@pytest.mark.parametrize("u,length", [(2, 6), (2, 8), (4, 10)])
def test_plaquette_join_roundtrip_and_geometry(u, length):
    pairs = list(wp.j_admissible_pairs(u, length))
    assert pairs
    for p, q in pairs:
        r = wp.plaquette_join_J(p, q, u)
        assert wp.unjoin_J(r) == (wp.ws_rooted(p), wp.ws_rooted(q))
        gp = geometry_of_sites({v for e in p for v in e})
        gq = geometry_of_sites({v for e in q for v in e})
        gr = geometry_of_sites({v for e in r for v in e})
        assert gr.lw == gp.w + gq.w + 1
        assert gr.h <= gp.h + gq.h
        assert len(r) == 2 * length
        assert PolygonTrace.from_edges(r).is_valid()


def test_join_rejects_outside_class():
    p = next(iter(naive_sap_traces(4)[4]))
    with pytest.raises(ValueError):
        wp.plaquette_join_J(p, p, 8)


def test_bridge_polygon_inequality():
    rows = wp.kesten_check(6)
    assert [r.lhs for r in rows] == [1, 2, 7, 28, 124, 588]
    assert rows[0].rhs == Fraction(1, 96)
    sab = count_square("sab", 6).counts
    for r in rows:
        assert r.rhs == Fraction(sab[r.n] ** 2, 4 * (2 * r.n + 1) * r.n * (r.n + 1) ** 3)
        assert r.passed


def test_diameter_sandwich_is_ordered():
    for m, lo, hi in wp.diameter_sandwich(4):
        assert 1 <= lo <= hi <= m + 1


def test_round_polygons_small():
    polys, total = wp.round_polygons(1, 14)
    assert polys and total > 0
    for p in polys:
        assert wp.winding_about_origin(p.edges) == 1
        assert wp.is_wide(p.edges, 1, wp.HEX)
