import random

import pytest

from sawlab import insertion as ins
from sawlab.hwdecomp import psi
from sawlab.walkmodel import from_steps, reflect_vertical
from sawlab.widepoly import wide_polygons

PARAMS = ins.InsertionParams(n=400, u=1, m=4)
COLS = ((0, 70), (3, 70), (3, 66), (8, 66), (8, 60))


def _comb(gaps):
    return ins.comb_walk(COLS, gaps)


def test_single_bridge_has_no_viable_index():
    ctx = ins.build_context(from_steps("N" * 80), PARAMS)
    assert ctx.t == 1
    assert ins.viable_indices(ctx) == []


def test_branch_order_follows_left_to_right_crossings():
    w = _comb([1, 1, 1, 1])
    ctx = ins.build_context(w, PARAMS)
    assert ctx.order == tuple(range(ctx.t))
    mirrored = reflect_vertical(w)
    ctx2 = ins.build_context(mirrored, PARAMS)
    assert ctx2.order == tuple(reversed(range(ctx2.t)))


def test_adjacent_branches_make_every_height_viable():
    ctx = ins.build_context(_comb([1, 1, 1, 1]), PARAMS)
    expected = [
        (l, j)
        for l in range(1, ctx.t)
        for j in ins.height_window(ctx)
        if (l, j) in ctx.z_table and (l + 1, j) in ctx.z_table
    ]
    assert ins.viable_indices(ctx) == expected


def test_blocked_sets_are_disjoint():
    for w in ins.fixture_walks(seed=3):
        ctx = ins.build_context(w, PARAMS)
        assert ins.blocking_disjoint(ctx)
        for pts in ins.blocked_points(ctx).values():
            assert len(pts) == PARAMS.u


def test_no_insertions_is_plain_decomposition():
    w = _comb([1, 3, 1, 1])
    enc = ins.phi_encode(w, [], [], PARAMS)
    assert enc.bridges == psi(w)


@pytest.mark.parametrize("m", [4, 6])
def test_single_insertion_length_and_heights(m):
    params = ins.InsertionParams(n=400, u=1, m=m)
    w = _comb([1, 1, 1, 1])
    ctx = ins.build_context(w, params)
    poly = wide_polygons(1, m)[0]
    lst = next(ins.location_lists(ctx, 1))
    enc = ins.phi_encode(w, [poly], lst, params, ctx)
    assert enc.length == len(w) - 1 + m + 16
    assert [b[-1][1] for b in enc.bridges] == [b[-1][1] for b in psi(w)]


def test_application_order_does_not_matter():
    rng = random.Random(5)
    polys = wide_polygons(1, 4)
    for w in ins.fixture_walks(seed=5, per_shape=1):
        ctx = ins.build_context(w, PARAMS)
        for lst in ins.location_lists(ctx, 3, rng=rng, limit=2):
            ps = [rng.choice(polys) for _ in lst]
            a = ins.phi_encode(w, ps, lst, PARAMS, ctx)
            b = ins.phi_encode(w, ps, lst, PARAMS, ctx, application_order=[2, 0, 1])
            assert a.bridges == b.bridges


def test_bad_application_order_is_rejected():
    w = _comb([1, 1, 1, 1])
    ctx = ins.build_context(w, PARAMS)
    lst = next(ins.location_lists(ctx, 1))
    with pytest.raises(ins.InsertionError):
        ins.phi_encode(w, wide_polygons(1, 4)[:1], lst, PARAMS, ctx, application_order=[1])


def test_decode_recovers_truth():
    rng = random.Random(9)
    polys = wide_polygons(1, 6)
    params = ins.InsertionParams(n=400, u=1, m=6)
    for w in ins.fixture_walks(seed=9, per_shape=1):
        ctx = ins.build_context(w, params)
        for K in (1, 2):
            for lst in ins.location_lists(ctx, K, rng=rng, limit=1):
                ps = [rng.choice(polys) for _ in lst]
                enc = ins.phi_encode(w, ps, lst, params, ctx)
                rep = ins.phi_decode(enc.bridges, params, K)
                assert 1 <= len(rep.candidates) <= 12 ** K
                assert any(c.walk == w and c.locations == sorted(lst) and c.polygons == ps for c in rep.candidates)


def test_decode_rejects_foreign_lists():
    rep = ins.phi_decode([from_steps("N" * 5)], PARAMS, 1)
    assert rep.candidates == []


def test_witness_on_fixture():
    w = _comb([1, 1, 1, 1])
    ctx = ins.build_context(w, PARAMS)
    for l, j in ins.viable_indices(ctx)[::7]:
        for p in wide_polygons(1, 4):
            z = ins.intersection_witness(ctx, l, j, p)
            assert z not in set(ctx.branch(l))
            assert z in set(ctx.branch(l + 1))
            assert ctx.j_min + 3 <= z[1] <= ctx.j_max - 3


def test_bundle_roundtrip():
    w = _comb([1, 1, 1, 1])
    ctx = ins.build_context(w, PARAMS)
    lst = list(next(ins.location_lists(ctx, 2)))
    ps = wide_polygons(1, 4)[:1] * 2
    text = ins.bundle_to_json(w, PARAMS, ps, lst)
    w2, params2, ps2, lst2 = ins.bundle_from_json(text)
    assert (w2, params2, ps2, lst2) == (w, PARAMS, ps, lst)


def test_join_count_report_fields():
    ctx = ins.build_context(_comb([1, 1, 1, 1]), PARAMS)
    rep = ins.join_count_report(ctx, 2)
    assert rep["join"] == len(ins.viable_indices(ctx))
    assert rep["tall"] == ctx.t
    assert ins.max_packable(ctx) >= 1
