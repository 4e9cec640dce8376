import cmath
import math

import pytest

from sawlab import observable as o
from sawlab.enumerate import X_CRIT
from sawlab.lattice import axis_mid, edge, face_vertices, triangle_domain
from sawlab.walkmodel import hex_from_turns


def test_winding_of_zigzag_and_hexagon():
    z = axis_mid(0)
    assert o.winding(hex_from_turns(z, z[0], "LRLRLR")).total == 0
    f = face_vertices((0, 0))
    loop = [edge(f[i % 6], f[(i + 1) % 6]) for i in range(7)]
    assert math.isclose(o.winding(loop).total, 2 * math.pi)


def test_boundary_windings_are_unique_on_small_triangle():
    dom = triangle_domain(1)
    f = o.observable(dom, axis_mid(1))
    assert o.boundary_windings_unique(f, dom)


@pytest.mark.parametrize("k", [1, 2])
def test_value_at_start_is_one(k):
    dom = triangle_domain(k)
    f = o.observable(dom, axis_mid(k))
    assert f[axis_mid(k)] == 1


def test_boundary_value_is_phase_times_green_function():
    dom = triangle_domain(1)
    f = o.observable(dom, axis_mid(1))
    for z in dom.boundary:
        (turns,) = f.hist.windings(z) or {0}
        phase = cmath.exp(-1j * o.SIGMA_CRIT * turns * math.pi / 3)
        assert abs(f[z] - phase * f.g(z)) < 1e-12


@pytest.mark.parametrize("k", [1, 2])
def test_local_relation_holds_at_criticality(k):
    dom = triangle_domain(k)
    f = o.observable(dom, axis_mid(k))
    assert o.max_residual(f, dom) < 1e-9
    assert abs(o.boundary_sum(f, dom)) < 1e-9


def test_off_critical_control_fails():
    dom = triangle_domain(2)
    f = o.observable(dom, axis_mid(2), x=0.6)
    assert o.max_residual(f, dom) > 1e-3


@pytest.mark.parametrize("k", [1, 2])
def test_triangle_identity(k):
    r = o.triangle_identity(k)
    assert abs(r["lhs"] - 1) <= 1e-8
    assert math.isclose(r["left_sum"], r["right_sum"], rel_tol=1e-12)
    assert abs(r["complex_lhs"] - r["f_z0"]) < 1e-9


def test_prefactor_identity():
    a, _ = o.prefactors()
    assert math.isclose(a, 2 * math.cos(math.pi / 8))
    assert math.isclose(a, 1 / X_CRIT)


def test_strip_identity_converges_with_width():
    rows = o.strip_sweep(1, (2, 3, 4), (16, 24))
    by_width = {r["width"]: r["lhs"] for r in rows}
    assert by_width[2] < by_width[3] < by_width[4] <= 1 + 1e-12
    assert abs(by_width[4] - 1) < 0.05
    # the length cap is already beyond every walk in these strips
    assert rows[0]["lhs"] == rows[1]["lhs"]


def test_triangle_bounds_strip_bridge():
    assert o.triangle_vs_strip(1, 3, 20)["holds"]


def test_rectangle_relations():
    r = o.rectangle_relations(1, audit_cap=500)
    assert r["audit_failures"] == 0 and r["audited_pairs"] == 500
    assert r["angles"] == [round(math.pi / 8, 12), round(math.pi / 4, 12)]
    assert r["left_sum"] > r["concatenation_lower_bound"] > 0
