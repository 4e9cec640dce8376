"""Square lattice, honeycomb lattice in edge-midpoint form, hex domains and cover windows.

Honeycomb chart
---------------
Faces of the honeycomb sit on the triangular lattice ``a + b*w`` with
``w = exp(i*pi/3)``; the origin is a face centre.  A honeycomb vertex is the
centroid of three mutually adjacent faces and is stored as the integer pair
``(p, q)`` equal to the *sum* of the axial coordinates of those three faces,
so ``p == q (mod 3)`` and ``p % 3 != 0``.  Cartesian position::

    x = (2p + q) / 6,   y = q * sqrt(3) / 6

All comparisons go through the integer pair ``(2p + q, q)``; floats only
appear when a complex position is requested.  Faces are drawn pointy-top,
so every face has a left and a right vertical edge.

An edge (equivalently its midpoint, a ``HexMid``) is the sorted pair of its
endpoint vertices.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

Site = Tuple[int, int]
Vertex = Tuple[int, int]
Edge = Tuple[Vertex, Vertex]
Face = Tuple[int, int]

# ---------------------------------------------------------------- square

STEPS: Dict[str, Site] = {"N": (0, 1), "E": (1, 0), "S": (0, -1), "W": (-1, 0)}
STEP_OF: Dict[Site, str] = {v: k for k, v in STEPS.items()}
# lexicographic visitor order
STEP_ORDER = "ENSW"


def square_neighbors(s: Site) -> List[Site]:
    x, y = s
    return [(x + dx, y + dy) for dx, dy in STEPS.values()]


# ---------------------------------------------------------------- honeycomb vertices

_UP_NBRS = ((1, 1), (1, -2), (-2, 1))
_FACE_CORNERS = ((1, 1), (-1, 2), (-2, 1), (-1, -1), (1, -2), (2, -1))


def is_vertex(v: Vertex) -> bool:
    p, q = v
    return (p - q) % 3 == 0 and p % 3 != 0


def is_up(v: Vertex) -> bool:
    return v[0] % 3 == 1


def hex_neighbors(v: Vertex) -> List[Vertex]:
    p, q = v
    sgn = 1 if is_up(v) else -1
    return [(p + sgn * dp, q + sgn * dq) for dp, dq in _UP_NBRS]


def vertex_xy(v: Vertex) -> Tuple[int, int]:
    """Exact position as ``(6x, 2y/sqrt(3))``."""
    p, q = v
    return (2 * p + q, q)


def vertex_pos(v: Vertex) -> complex:
    X, Y = vertex_xy(v)
    return complex(X / 6.0, Y * math.sqrt(3) / 6.0)


def face_vertices(f: Face) -> List[Vertex]:
    a, b = f
    return [(3 * a + dp, 3 * b + dq) for dp, dq in _FACE_CORNERS]


def face_pos(f: Face) -> complex:
    a, b = f
    return complex(a + b / 2.0, b * math.sqrt(3) / 2.0)


def face_distance(f: Face, g: Face = (0, 0)) -> int:
    da, db = f[0] - g[0], f[1] - g[1]
    return (abs(da) + abs(db) + abs(da + db)) // 2


def faces_of_vertex(v: Vertex) -> List[Face]:
    p, q = v
    if is_up(v):
        a, b = (p - 1) // 3, (q - 1) // 3
        return [(a, b), (a + 1, b), (a, b + 1)]
    a, b = (p - 2) // 3, (q - 2) // 3
    return [(a + 1, b), (a, b + 1), (a + 1, b + 1)]


# ---------------------------------------------------------------- honeycomb edges / midpoints


def edge(u: Vertex, v: Vertex) -> Edge:
    return (u, v) if u <= v else (v, u)


def edge_id(e: Edge) -> str:
    (a, b), (c, d) = e
    return f"{a},{b}|{c},{d}"


def parse_edge_id(text: str) -> Edge:
    left, right = text.split("|")
    u = tuple(int(t) for t in left.split(","))
    v = tuple(int(t) for t in right.split(","))
    if not (is_vertex(u) and is_vertex(v) and v in hex_neighbors(u)):
        raise ValueError(f"not a honeycomb edge: {text!r}")
    return edge(u, v)


def mid_xy(e: Edge) -> Tuple[int, int]:
    """Exact midpoint as ``(12x, 4y/sqrt(3))``."""
    (X1, Y1), (X2, Y2) = vertex_xy(e[0]), vertex_xy(e[1])
    return (X1 + X2, Y1 + Y2)


def mid_pos(e: Edge) -> complex:
    return (vertex_pos(e[0]) + vertex_pos(e[1])) / 2


def mid_of_faces(f: Face, g: Face) -> Edge:
    """The edge separating two adjacent faces."""
    common = set(face_vertices(f)) & set(face_vertices(g))
    if len(common) != 2:
        raise ValueError(f"faces {f} and {g} are not adjacent")
    u, v = sorted(common)
    return (u, v)


def hex_edges_at(v: Vertex) -> List[Edge]:
    return [edge(v, w) for w in hex_neighbors(v)]


def hex_adjacent_mids(z: Edge) -> List[Tuple[Edge, Vertex]]:
    """Midpoints sharing an endpoint with ``z``, tagged with the shared vertex."""
    out = []
    for v in z:
        for e in hex_edges_at(v):
            if e != z:
                out.append((e, v))
    return out


def other_end(e: Edge, v: Vertex) -> Vertex:
    return e[1] if e[0] == v else e[0]


def origin_right_mid() -> Edge:
    """Midpoint of the right vertical edge of the origin face, at (1/2, 0)."""
    return mid_of_faces((0, 0), (1, 0))


def axis_mid(k: int) -> Edge:
    """Vertical edge crossing the x-axis at ``(k + 1/2, 0)``."""
    return mid_of_faces((k, 0), (k + 1, 0))


# ---------------------------------------------------------------- domains


@dataclass(frozen=True)
class Domain:
    """Finite honeycomb domain given by its vertex set.

    ``internal`` are edges with both ends inside, ``boundary`` the edges with
    exactly one end inside; their midpoints form the domain boundary.
    """

    name: str
    vertices: FrozenSet[Vertex]
    faces: FrozenSet[Face] = frozenset()
    labels: Dict[str, Tuple[Edge, ...]] = field(default_factory=dict, compare=False, hash=False)

    @property
    def internal(self) -> FrozenSet[Edge]:
        out = set()
        for v in self.vertices:
            for w in hex_neighbors(v):
                if w in self.vertices:
                    out.add(edge(v, w))
        return frozenset(out)

    @property
    def boundary(self) -> FrozenSet[Edge]:
        out = set()
        for v in self.vertices:
            for w in hex_neighbors(v):
                if w not in self.vertices:
                    out.add(edge(v, w))
        return frozenset(out)

    def mids(self) -> FrozenSet[Edge]:
        return self.internal | self.boundary

    def inner_end(self, z: Edge) -> Vertex:
        a, b = z
        if (a in self.vertices) == (b in self.vertices):
            raise ValueError("not a boundary midpoint")
        return a if a in self.vertices else b

    def to_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "faces": sorted([list(f) for f in self.faces]),
                "boundary": sorted(edge_id(e) for e in self.boundary),
                "labels": {k: sorted(edge_id(e) for e in v) for k, v in sorted(self.labels.items())},
            },
            sort_keys=True,
        )


def domain_from_faces(name: str, faces: Iterable[Face]) -> Domain:
    faces = frozenset(faces)
    verts = frozenset(v for f in faces for v in face_vertices(f))
    return Domain(name, verts, faces)


def lambda_faces(k: int) -> FrozenSet[Face]:
    return frozenset(
        (a, b) for a in range(-k, k + 1) for b in range(-k, k + 1) if face_distance((a, b)) <= k
    )


def lambda_domain(k: int) -> Domain:
    if k < 0:
        raise ValueError("k must be >= 0")
    return domain_from_faces(f"lambda:{k}", lambda_faces(k))


def _domain_from_region(name: str, inside, p_range, q_range) -> Domain:
    """Vertices that are endpoints of an edge lying in an open convex region."""
    pts = set()
    for p in p_range:
        for q in q_range:
            v = (p, q)
            if not is_vertex(v) or not inside(*vertex_xy(v)):
                continue
            if any(inside(*vertex_xy(w)) for w in hex_neighbors(v)):
                pts.add(v)
    return Domain(name, frozenset(pts))


def triangle_domain(k: int) -> Domain:
    """Equilateral triangle of side 2k+1 resting on the x-axis, from x=0 to x=2k+1."""
    if k < 1:
        raise ValueError("k must be >= 1")

    def inside(X, Y):
        return Y > 0 and Y < 6 * k + 3 - abs(X - 6 * k - 3)

    hi = 3 * (2 * k + 2)
    dom = _domain_from_region(f"triangle:{k}", inside, range(-hi, hi + 1), range(-3, hi + 1))
    z0 = axis_mid(k)
    x0 = mid_xy(z0)[0]
    bottom, left, right = [], [], []
    for z in dom.boundary:
        X, Y = mid_xy(z)
        if Y == 0:
            bottom.append(z)
        elif X < x0:
            left.append(z)
        else:
            right.append(z)
    labels = {"bottom": tuple(sorted(bottom)), "left": tuple(sorted(left)), "right": tuple(sorted(right))}
    return Domain(dom.name, dom.vertices, frozenset(), labels)


def strip_domain(k: int, width_cap: int, centre: int = 0) -> Domain:
    """Strip of height k truncated to |x - (centre + 1/2)| <= width_cap."""
    if k < 1 or width_cap < 1:
        raise ValueError("k and width_cap must be >= 1")
    xc = 12 * centre + 6

    def inside(X, Y):
        return 0 < Y < 3 * k and abs(2 * X - xc) <= 12 * width_cap

    pr = 3 * (width_cap + abs(centre) + k + 3)
    dom = _domain_from_region(f"strip:{k}:{width_cap}", inside, range(-2 * pr, 2 * pr + 1), range(-3, 3 * k + 4))
    bottom, top, sides = [], [], []
    for z in dom.boundary:
        Y = mid_xy(z)[1]
        if Y == 0:
            bottom.append(z)
        elif Y == 6 * k:
            top.append(z)
        else:
            sides.append(z)
    labels = {"bottom": tuple(sorted(bottom)), "top": tuple(sorted(top)), "sides": tuple(sorted(sides))}
    return Domain(dom.name, dom.vertices, frozenset(), labels)


# ---------------------------------------------------------------- covers
#
# The branch cut runs along the positive x-axis and cuts the vertical edges
# crossing it at x = k + 1/2, k >= 0.  A cover vertex is (base vertex, sheet);
# crossing a cut edge upward raises the sheet by one.  A cover midpoint is
# (edge, sheet of its lower endpoint).


def is_cut_edge(e: Edge) -> bool:
    (p1, q1), (p2, q2) = e
    if {q1, q2} != {-1, 1}:
        return False
    lower = e[0] if q1 == -1 else e[1]
    upper = e[1] if q1 == -1 else e[0]
    if lower[0] - upper[0] != 1:
        return False
    k = (lower[0] - 2) // 3
    return lower[0] == 3 * k + 2 and k >= 0


def sheet_step(u: Vertex, v: Vertex) -> int:
    """Sheet increment when moving from base vertex u to neighbour v."""
    e = edge(u, v)
    if not is_cut_edge(e):
        return 0
    return 1 if v[1] > u[1] else -1


class WindowExit(Exception):
    """A cover walk left its finite window."""


@dataclass(frozen=True)
class CoverRegion:
    """Finite piece of a cover.

    kind is ``"lambda"`` for the j-fold lift of a hex ball (sheets mod j) or
    ``"outer"`` for a universal-cover window with ``|sheet| <= cap`` that
    omits the lift of the ball of radius k.
    """

    kind: str
    n: int
    j: Optional[int]
    cap: int
    base: FrozenSet[Vertex]

    def wrap(self, s: int) -> int:
        if self.j is not None:
            return s % self.j
        if abs(s) > self.cap:
            raise WindowExit(f"sheet {s} outside |sheet| <= {self.cap}")
        return s

    def contains(self, v: Vertex, s: int) -> bool:
        if v not in self.base:
            return False
        return self.j is not None or abs(s) <= self.cap

    def sheets(self) -> List[int]:
        return list(range(self.j)) if self.j is not None else list(range(-self.cap, self.cap + 1))

    def size(self) -> int:
        return len(self.base) * len(self.sheets())


def build_cover_region(kind: str, n: int, j: Optional[int] = 8, cap: int = 3, k: int = 0) -> CoverRegion:
    if kind == "lambda":
        if j is None or j < 1:
            raise ValueError("j-fold cover needs j >= 1")
        return CoverRegion("lambda", n, j, cap, lambda_domain(n).vertices)
    if kind == "outer":
        inner = lambda_domain(k).vertices if k >= 0 else frozenset()
        base = frozenset(lambda_domain(n).vertices - inner)
        return CoverRegion("outer", n, None, cap, base)
    raise ValueError(f"unknown cover kind {kind!r}")


def lift_vertices(path: List[Vertex], start_sheet: int, region: Optional[CoverRegion] = None) -> List[Tuple[Vertex, int]]:
    """Lift a base vertex path, tracking sheet changes at the cut."""
    out = []
    s = start_sheet
    for i, v in enumerate(path):
        if i:
            s += sheet_step(path[i - 1], v)
        if region is not None:
            s2 = region.wrap(s)
            if v not in region.base:
                raise WindowExit(f"vertex {v} outside window")
            out.append((v, s2))
        else:
            out.append((v, s))
    return out


def project(cover_path: List[Tuple[Vertex, int]]) -> List[Vertex]:
    return [v for v, _ in cover_path]


def mid_path_vertices(mids: List[Edge]) -> List[Vertex]:
    """Traversed vertices of a midpoint walk (shared endpoints of consecutive mids)."""
    out = []
    for a, b in zip(mids, mids[1:]):
        common = set(a) & set(b)
        if len(common) != 1:
            raise ValueError("consecutive midpoints must share exactly one endpoint")
        out.append(common.pop())
    return out


def lift_mid_walk(mids: List[Edge], start_sheet: int, region: Optional[CoverRegion] = None):
    """Lift a midpoint walk; returns [(edge, sheet-of-lower-end)] per midpoint.

    The start midpoint's sheet is ``start_sheet`` (read as the sheet of its
    lower endpoint when it sits on the cut).
    """
    if not mids:
        return []
    verts = mid_path_vertices(mids)
    if not verts:
        return [(mids[0], start_sheet if region is None else region.wrap(start_sheet))]
    z0 = mids[0]
    v1 = verts[0]
    # sheet of the first traversed vertex
    s = start_sheet
    if is_cut_edge(z0):
        lower = z0[0] if z0[0][1] < z0[1][1] else z0[1]
        if v1 != lower:
            s = start_sheet + 1
    lifted = lift_vertices(verts, s, None)
    out = [(z0, start_sheet)]
    for i, z in enumerate(mids[1:]):
        v, sv = lifted[i]
        w = other_end(z, v)
        if is_cut_edge(z) and w[1] < v[1]:
            sz = sv - 1
        else:
            sz = sv
        out.append((z, sz))
    if region is not None:
        for (v, sv) in lifted:
            if v not in region.base:
                raise WindowExit(f"vertex {v} outside window")
            region.wrap(sv)
        out = [(z, region.wrap(s_)) for z, s_ in out]
    return out
