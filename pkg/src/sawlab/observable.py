"""Winding-weighted walk sums on finite honeycomb domains and their exact boundary identities."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .enumerate import X_CRIT, DomainHistogram, domain_histogram
from .lattice import (
    Domain,
    Edge,
    Vertex,
    axis_mid,
    edge,
    edge_id,
    hex_neighbors,
    mid_pos,
    mid_xy,
    strip_domain,
    triangle_domain,
    vertex_pos,
    vertex_xy,
    _domain_from_region,
)
from .walkmodel import hex_turns

SIGMA_CRIT = 5.0 / 8.0


@dataclass(frozen=True)
class WindingTotal:
    turns: int  # left turns minus right turns

    @property
    def total(self) -> float:
        return self.turns * math.pi / 3


def winding(mids: Sequence[Edge]) -> WindingTotal:
    if len(mids) < 2:
        return WindingTotal(0)
    _, _, turns = hex_turns(mids)
    return WindingTotal(turns.count("L") - turns.count("R"))


@dataclass
class ObservableField:
    domain: str
    z0: Edge
    sigma: float
    x: float
    values: Dict[Edge, complex]
    hist: DomainHistogram = field(repr=False)

    def __getitem__(self, z: Edge) -> complex:
        return self.values.get(z, 0j)

    def g(self, z: Edge) -> float:
        return self.hist.g(z, self.x)


def pick_z0(dom: Domain) -> Edge:
    """Rightmost boundary midpoint, nearest the x-axis, lower first."""
    return min(dom.boundary, key=lambda z: (-mid_xy(z)[0], abs(mid_xy(z)[1]), mid_xy(z)[1]))


_HIST_CACHE: Dict[Tuple, DomainHistogram] = {}


def histogram(dom: Domain, z0: Edge, length_cap: Optional[int] = None, threads: Optional[int] = None) -> DomainHistogram:
    key = (dom.name, dom.vertices, z0, length_cap)
    h = _HIST_CACHE.get(key)
    if h is None:
        h = domain_histogram(dom, z0, length_cap, threads=threads)
        _HIST_CACHE[key] = h
    return h


def observable(
    dom: Domain,
    z0: Optional[Edge] = None,
    sigma: float = SIGMA_CRIT,
    x: float = X_CRIT,
    length_cap: Optional[int] = None,
    threads: Optional[int] = None,
) -> ObservableField:
    z0 = pick_z0(dom) if z0 is None else z0
    h = histogram(dom, z0, length_cap, threads)
    values = {z: h.total(z, x, sigma) for z in dom.mids()}
    values[z0] = h.total(z0, x, sigma)
    return ObservableField(dom.name, z0, sigma, x, values, h)


def local_relation_residual(f: ObservableField, v: Vertex, dom: Domain) -> complex:
    """(p - v)F(p) + (q - v)F(q) + (r - v)F(r) over the three edges at v."""
    if v not in dom.vertices:
        raise ValueError(f"{v} is not a vertex of {dom.name}")
    pv = vertex_pos(v)
    return sum((mid_pos(edge(v, w)) - pv) * f[edge(v, w)] for w in hex_neighbors(v))


def residual_scan(f: ObservableField, dom: Domain) -> List[Tuple[Vertex, float]]:
    return [(v, abs(local_relation_residual(f, v, dom))) for v in sorted(dom.vertices)]


def max_residual(f: ObservableField, dom: Domain, skip_start: bool = False) -> float:
    start = f.z0[0] if f.z0[0] in dom.vertices else f.z0[1]
    return max(r for v, r in residual_scan(f, dom) if not (skip_start and v == start))


def boundary_sum(f: ObservableField, dom: Domain) -> complex:
    """Sum of (z - inner end) F(z) over the boundary; internal edges cancel, so it vanishes
    whenever the local relation holds at every vertex."""
    return sum((mid_pos(z) - vertex_pos(dom.inner_end(z))) * f[z] for z in sorted(dom.boundary))


def boundary_windings_unique(f: ObservableField, dom: Domain) -> bool:
    return all(len(f.hist.windings(z)) <= 1 for z in dom.boundary)


# ---------------------------------------------------------------- identities


def prefactors(sigma: float = SIGMA_CRIT) -> Tuple[float, float]:
    """(2cos(pi(1-sigma)/3), cos(pi(1-sigma)))."""
    return 2 * math.cos(math.pi * (1 - sigma) / 3), math.cos(math.pi * (1 - sigma))


def triangle_identity(k: int, sigma: float = SIGMA_CRIT, x: float = X_CRIT, threads: Optional[int] = None) -> dict:
    dom = triangle_domain(k)
    z0 = axis_mid(k)
    f = observable(dom, z0, sigma, x, threads=threads)
    a, b = prefactors(sigma)
    left = math.fsum(f.g(z) for z in dom.labels["left"])
    right = math.fsum(f.g(z) for z in dom.labels["right"])
    bottom = math.fsum(f.g(z) for z in dom.labels["bottom"] if z != z0)
    lhs = a * left + b * bottom
    # complex form before the left/right symmetry is used
    w = cmath.exp(1j * math.pi / 3)
    raw = (
        w * sum(f[z] for z in dom.labels["left"])
        + w.conjugate() * sum(f[z] for z in dom.labels["right"])
        - sum(f[z] for z in dom.labels["bottom"] if z != z0)
    )
    return {
        "k": k,
        "sigma": sigma,
        "x": x,
        "left_sum": left,
        "right_sum": right,
        "bottom_sum": bottom,
        "lhs": lhs,
        "complex_lhs": raw,
        "f_z0": f[z0],
        "left_count": len(dom.labels["left"]),
    }


def strip_identity(k: int, width: int, length_cap: int, sigma: float = SIGMA_CRIT, x: float = X_CRIT) -> dict:
    """Top sum plus weighted bottom sum on a strip truncated in width and walk length."""
    dom = strip_domain(k, width)
    z0 = axis_mid(0)
    h = histogram(dom, z0, length_cap)
    _, b = prefactors(sigma)
    top = math.fsum(h.g(z, x) for z in dom.labels["top"])
    bottom = math.fsum(h.g(z, x) for z in dom.labels["bottom"] if z != z0)
    sides = math.fsum(h.g(z, x) for z in dom.labels["sides"])
    return {
        "k": k,
        "width": width,
        "length_cap": length_cap,
        "top": top,
        "bottom": bottom,
        "sides": sides,
        "lhs": top + b * bottom,
    }


def strip_sweep(k: int, widths: Sequence[int], caps: Sequence[int], **kw) -> List[dict]:
    return [strip_identity(k, w, L, **kw) for w in widths for L in caps]


def bridge_sum(k: int, width: int, length_cap: int, x: float = X_CRIT) -> float:
    """Truncated B_k: walks from the bottom point to the top of a strip of height k."""
    return strip_identity(k, width, length_cap, x=x)["top"]


def triangle_vs_strip(k: int, width: int, length_cap: int) -> dict:
    """Left-side triangle sum against x times the truncated strip bridge sum of height 2k."""
    left = triangle_identity(k)["left_sum"]
    b = bridge_sum(2 * k, width, length_cap)
    return {"k": k, "left_sum": left, "x_B": X_CRIT * b, "holds": left >= X_CRIT * b}


# ---------------------------------------------------------------- rectangles


def rectangle_domain(k: int) -> Domain:
    """Rectangle of height 4*sqrt(3)*k whose base carries 2k+1 bottom midpoints centred on (1/2, 0)."""
    if k < 1:
        raise ValueError("k must be >= 1")

    def inside(X, Y):
        return 0 < Y < 24 * k and abs(X - 3) <= 6 * k

    span = 3 * (6 * k + 4)
    dom = _domain_from_region(f"rectangle:{k}", inside, range(-span, span + 1), range(-3, 24 * k + 4))
    verts = dom.vertices
    bottom, left, right, top = [], [], [], []
    for z in dom.boundary:
        X, Y = mid_xy(z)
        if Y == 0:
            bottom.append(z)
        elif Y >= 48 * k - 2:
            top.append(z)
        elif X < 6:
            left.append(z)
        else:
            right.append(z)
    labels = {
        "bottom": tuple(sorted(bottom)),
        "left": tuple(sorted(left)),
        "right": tuple(sorted(right)),
        "top": tuple(sorted(top)),
    }
    return Domain(dom.name, verts, frozenset(), labels)


def _mirror_vertex(v: Vertex, axis_X: int) -> Vertex:
    """Reflect in the vertical line 6x = axis_X (must pass through a vertical edge)."""
    X, Y = vertex_xy(v)
    X2 = 2 * axis_X - X
    return ((X2 - Y) // 2, Y)


def _walks_to(dom: Domain, z0: Edge, targets, cap: int) -> Dict[Edge, List[List[Vertex]]]:
    """Explicit vertex lists of every walk from z0 to each target midpoint."""
    targets = set(targets)
    start = dom.inner_end(z0)
    out: Dict[Edge, List[List[Vertex]]] = {z: [] for z in targets}
    path = [start]
    seen = {start}

    def rec():
        v = path[-1]
        for w in sorted(hex_neighbors(v)):
            if len(path) == 1 and edge(v, w) == z0:
                continue
            if len(path) >= 2 and w == path[-2]:
                continue
            z = edge(v, w)
            if z in targets:
                out[z].append(list(path))
            if w in dom.vertices and w not in seen and len(path) < cap:
                seen.add(w)
                path.append(w)
                rec()
                path.pop()
                seen.discard(w)

    rec()
    return out


def rectangle_relations(k: int = 1, audit_cap: int = 2000, x: float = X_CRIT) -> dict:
    """Left-side sums on the rectangle and an audit of the mirrored two-walk concatenation."""
    from .lattice import lambda_faces, face_vertices

    dom = rectangle_domain(k)
    z0 = axis_mid(0)
    h = histogram(dom, z0)
    left = dom.labels["left"]
    # exits alternate between two orientations, with prefactor angles pi/8 and pi/4
    angles = {}
    weighted = 0.0
    for z in left:
        wind = h.windings(z)
        turns = next(iter(wind)) if wind else 0
        ang = (1 - SIGMA_CRIT) * abs(turns) * math.pi / 3
        angles[edge_id(z)] = ang
        weighted += 2 * math.cos(ang) * h.g(z, x)
    plain = math.fsum(h.g(z, x) for z in left)
    concat = math.fsum(x * h.g(z, x) ** 2 for z in left)
    # audit: join each walk with the mirror image of another through the outer endpoint
    lam = frozenset(v for f in lambda_faces(8 * k) for v in face_vertices(f))
    walks = _walks_to(dom, z0, left, len(dom.vertices))
    checked = failures = 0
    target = None
    for z in left:
        outer = z[0] if z[0] not in dom.vertices else z[1]
        axis_X = vertex_xy(outer)[0]
        ws = walks[z]
        for i, g1 in enumerate(ws):
            for g2 in ws[i % 7 :: 97]:
                if checked >= audit_cap:
                    break
                mirrored = [_mirror_vertex(v, axis_X) for v in reversed(g2)]
                joined = g1 + [outer] + mirrored
                ok = (
                    len(set(joined)) == len(joined)
                    and all(vertex_xy(v)[1] > 0 for v in joined)
                    and all(v in lam for v in joined)
                    and all(b in hex_neighbors(a) for a, b in zip(joined, joined[1:]))
                )
                end = _mirror_vertex(dom.inner_end(z0), axis_X)
                target = mid_pos(edge(end, _mirror_vertex(z0[0] if z0[0] not in dom.vertices else z0[1], axis_X)))
                checked += 1
                failures += 0 if ok else 1
    return {
        "k": k,
        "left_count": len(left),
        "left_sum": plain,
        "left_weighted": weighted,
        "angles": sorted(set(round(a, 12) for a in angles.values())),
        "concatenation_lower_bound": concat,
        "audited_pairs": checked,
        "audit_failures": failures,
        "arc_end": None if target is None else (target.real, target.imag),
    }
