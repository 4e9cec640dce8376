import math

from hypothesis import given, strategies as st

from sawlab.lattice import (
    axis_mid,
    build_cover_region,
    edge,
    face_vertices,
    hex_adjacent_mids,
    hex_neighbors,
    is_cut_edge,
    is_vertex,
    lambda_domain,
    lift_vertices,
    mid_pos,
    mid_xy,
    project,
    sheet_step,
    square_neighbors,
    strip_domain,
    triangle_domain,
    vertex_pos,
    vertex_xy,
)

coords = st.integers(-30, 30)


def test_square_neighbours_of_origin():
    assert sorted(square_neighbors((0, 0))) == sorted([(1, 0), (-1, 0), (0, 1), (0, -1)])


@given(coords, coords)
def test_square_neighbours_translate(x, y):
    base = sorted(square_neighbors((0, 0)))
    assert sorted(square_neighbors((x, y))) == sorted((a + x, b + y) for a, b in base)


@given(coords, coords)
def test_hex_vertices_have_three_unit_neighbours(p, q):
    v = (p, q)
    if not is_vertex(v):
        return
    nb = hex_neighbors(v)
    assert len(set(nb)) == 3
    for w in nb:
        assert is_vertex(w)
        assert v in hex_neighbors(w)
        assert math.isclose(abs(vertex_pos(w) - vertex_pos(v)), 1 / math.sqrt(3), rel_tol=1e-12)


def test_interior_edge_has_four_adjacent_midpoints():
    v = (1, 1)
    for w in hex_neighbors(v):
        assert len(hex_adjacent_mids(edge(v, w))) == 4


def test_lambda_ball_sizes():
    assert (len(lambda_domain(0).faces), len(lambda_domain(0).boundary)) == (1, 6)
    assert len(lambda_domain(1).faces) == 7
    assert len(lambda_domain(2).faces) == 19


def test_triangle_labels_and_start():
    for k in (1, 2, 3):
        t = triangle_domain(k)
        # one more boundary midpoint per side than the side length in faces
        assert len(t.labels["left"]) == len(t.labels["right"]) == len(t.labels["bottom"]) == 2 * k + 1
        assert axis_mid(k) in t.labels["bottom"]


def test_triangle_mirror_symmetry():
    for k in (1, 2, 3):
        t = triangle_domain(k)
        axis = 2 * mid_xy(axis_mid(k))[0]  # doubled x of the vertical symmetry line, in mid_xy units
        xs = sorted(mid_xy(z)[0] for z in t.boundary)
        assert sorted(axis - x for x in xs) == xs


def test_strip_top_height():
    k = 2
    s = strip_domain(k, 3)
    heights = {round(mid_pos(z).imag, 12) for z in s.labels["top"]}
    assert heights == {round(math.sqrt(3) / 2 * k, 12)}


def test_cut_edges_sit_on_positive_axis():
    for k in range(4):
        z = axis_mid(k)
        assert is_cut_edge(z)
        assert math.isclose(mid_pos(z).real, k + 0.5)
    assert not is_cut_edge(axis_mid(-1))


def test_loop_around_origin_changes_sheet_by_one():
    f = face_vertices((0, 0))
    cyc = f + [f[0]]
    total = sum(sheet_step(a, b) for a, b in zip(cyc, cyc[1:]))
    assert abs(total) == 1


@st.composite
def walks_in_ball(draw, radius=3, max_len=10):
    verts = lambda_domain(radius).vertices
    v = draw(st.sampled_from(sorted(verts)))
    path = [v]
    for _ in range(draw(st.integers(0, max_len))):
        nb = [w for w in hex_neighbors(path[-1]) if w in verts and w not in path]
        if not nb:
            break
        path.append(draw(st.sampled_from(sorted(nb))))
    return path


@given(walks_in_ball(), st.integers(0, 7))
def test_projection_undoes_lift_in_eight_sheet_cover(path, sheet):
    region = build_cover_region("lambda", 3, j=8)
    lifted = lift_vertices(path, sheet, region)
    assert project(lifted) == path
    assert all(0 <= s < 8 for _, s in lifted)


def test_vertex_chart_is_consistent():
    for v in lambda_domain(1).vertices:
        X, Y = vertex_xy(v)
        z = vertex_pos(v)
        assert math.isclose(z.real, X / 6, abs_tol=1e-12)
        assert math.isclose(z.imag, Y * math.sqrt(3) / 6, abs_tol=1e-12)
