import pytest
from hypothesis import given, strategies as st

from sawlab.enumerate import naive_sap_traces, walks
from sawlab.walkmodel import (
    PolygonTrace,
    SelfIntersection,
    bridge_height,
    closing_walks_of,
    concatenate,
    from_steps,
    hex_from_turns,
    hex_turns,
    is_bridge,
    is_closing,
    is_saw,
    polygon_from_text,
    polygon_text,
    reflect_horizontal,
    root_wide,
    to_steps,
)

PLAQUETTE = PolygonTrace.from_cycle(from_steps("ENWS"))
RECT_2x1 = PolygonTrace.from_cycle(from_steps("EENWWS"))


def test_single_step_concatenation():
    assert concatenate(from_steps("N"), from_steps("E")) == ((0, 0), (0, 1), (1, 1))


def test_concatenation_reports_first_repeat():
    with pytest.raises(SelfIntersection):
        concatenate(from_steps("NE"), from_steps("SW"))


@given(st.sampled_from(walks("sab", 5)), st.sampled_from(walks("sab", 4)))
def test_bridges_concatenate_to_bridges(a, b):
    c = concatenate(a, b)
    assert is_bridge(c)
    assert len(c) - 1 == 9
    assert bridge_height(c) == bridge_height(a) + bridge_height(b)


@given(st.text(alphabet="ENWS", max_size=30))
def test_step_string_roundtrip(s):
    assert to_steps(from_steps(s)) == s


def test_small_polygon_geometry():
    g = PLAQUETTE.geometry
    assert (g.h, g.w, g.lw) == (1, 1, 1)
    g = RECT_2x1.geometry
    assert (g.h, g.w, g.lw) == (1, 2, 2)


def test_line_width_below_width_first_appears_at_twelve():
    table = naive_sap_traces(12)
    wider = {L: sum(1 for p in table[L] if p.geometry.w > p.geometry.lw) for L in table}
    assert wider == {4: 0, 6: 0, 8: 0, 10: 0, 12: 2}


def test_plaquette_has_eight_closing_walks():
    cw = closing_walks_of(PLAQUETTE)
    assert len(set(cw)) == 8
    assert all(len(w) == 4 and is_saw(w) and is_closing(w) for w in cw)


def test_closing_walk_sets_are_disjoint_up_to_eight():
    table = naive_sap_traces(8)
    seen = {}
    for L, polys in table.items():
        for p in polys:
            for w in closing_walks_of(p):
                assert seen.setdefault(w, p) == p
            assert len(set(closing_walks_of(p))) == 2 * L


def test_plaquette_rooting():
    assert root_wide(PLAQUETTE) == from_steps("ENWS")


def test_root_wide_is_injective_on_length_eight():
    polys = [p for L, ps in naive_sap_traces(8).items() for p in ps]
    roots = {root_wide(p) for p in polys}
    assert len(roots) == len(polys)
    for p in polys:
        assert PolygonTrace.from_cycle(root_wide(p)) == p
        assert polygon_from_text(polygon_text(p)) == p


def test_reflection_is_an_involution():
    w = from_steps("NNEESWS")
    assert reflect_horizontal(reflect_horizontal(w)) == w


@given(st.text(alphabet="LR", max_size=12))
def test_hex_turn_string_roundtrip(turns):
    from sawlab.lattice import axis_mid

    start = axis_mid(0)
    mids = hex_from_turns(start, start[0], turns)
    assert hex_turns(mids)[2] == turns
