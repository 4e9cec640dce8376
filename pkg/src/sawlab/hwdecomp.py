"""Branch/bridge decompositions of half-space walks and the counting tables around them."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .walkmodel import (
    Site,
    Walk,
    anchor,
    concatenate,
    first_repeat,
    from_steps,
    is_bridge,
    reflect_horizontal,
    reverse,
    to_steps,
    translate,
)

DEFAULT_EPS = 1.0 / 466


@dataclass(frozen=True)
class BranchDecomposition:
    record_indices: Tuple[int, ...]
    branches: Tuple[Walk, ...]

    @property
    def r(self) -> int:
        return len(self.branches)

    def heights(self) -> List[int]:
        return [abs(b[-1][1] - b[0][1]) for b in self.branches]


def record_points(walk: Sequence[Site]) -> BranchDecomposition:
    """Alternating last-argmax / last-argmin recursion, stopping once the end is reached.

    Each step searches the remaining tail starting at the previous record
    point; see the decisions ledger for the index convention.
    """
    n = len(walk) - 1
    ys = [s[1] for s in walk]
    idx = [0]
    k = 1
    while idx[-1] < n:
        start = idx[-1]
        tail = ys[start:]
        target = max(tail) if k % 2 == 1 else min(tail)
        last = max(t for t in range(start, n + 1) if ys[t] == target)
        if last == start:
            # cannot happen for half-space walks; guards against arbitrary input looping
            raise ValueError("record recursion stalled: input is not a half-space walk")
        idx.append(last)
        k += 1
    branches = tuple(tuple(walk[a : b + 1]) for a, b in zip(idx, idx[1:]))
    return BranchDecomposition(tuple(idx), branches)


def psi(walk: Sequence[Site]) -> List[Walk]:
    """Bridge list: odd-position branches are reflected; every bridge is anchored at the origin."""
    dec = record_points(walk)
    out = []
    for i, b in enumerate(dec.branches):
        piece = anchor(b)
        if i % 2 == 1:
            piece = reflect_horizontal(piece)
        out.append(piece)
    return out


class ReassemblyError(ValueError):
    pass


def psi_inverse(bridges: Sequence[Sequence[Site]]) -> Walk:
    walk: Walk = ((0, 0),)
    for i, b in enumerate(bridges):
        piece = anchor(b)
        if i % 2 == 1:
            piece = reflect_horizontal(piece)
        walk = concatenate(walk, piece, check=False)
    rep = first_repeat(walk)
    if rep is not None:
        raise ReassemblyError(f"reassembled walk revisits {walk[rep]}")
    return walk


def is_bridge_list(bridges: Sequence[Sequence[Site]]) -> Tuple[bool, str]:
    """Membership in BPi: every entry a bridge from the origin, heights strictly decreasing."""
    last = None
    for i, b in enumerate(bridges):
        if b[0] != (0, 0):
            return False, f"entry {i} does not start at the origin"
        if len(b) < 2 or not is_bridge(b):
            return False, f"entry {i} is not a bridge"
        h = b[-1][1]
        if last is not None and h >= last:
            return False, f"height {h} at entry {i} does not decrease"
        last = h
    return True, "ok"


def bp_membership(bridges, length: Optional[int] = None, count: Optional[int] = None) -> Tuple[bool, str]:
    ok, why = is_bridge_list(bridges)
    if not ok:
        return ok, why
    if length is not None and sum(len(b) - 1 for b in bridges) != length:
        return False, "total length mismatch"
    if count is not None and len(bridges) != count:
        return False, "bridge count mismatch"
    return True, "ok"


# ---------------------------------------------------------------- bridge tables


@lru_cache(maxsize=None)
def bridge_height_table(n_max: int) -> Dict[Tuple[int, int], int]:
    """Number of bridges by (length, height), via a mirror-reduced search."""
    table: Dict[Tuple[int, int], int] = {}
    path = [(0, 0), (0, 1)]
    seen = set(path)

    def dfs(x, y, n, ymax, straight):
        if y == ymax:
            w = 1 if straight else 2
            table[(n, y)] = table.get((n, y), 0) + w
        if n == n_max:
            return
        for dx, dy, ch in ((1, 0, "E"), (0, 1, "N"), (0, -1, "S"), (-1, 0, "W")):
            if straight and ch not in ("N", "E"):
                continue
            s = (x + dx, y + dy)
            if s[1] <= 0 or s in seen:
                continue
            seen.add(s)
            dfs(s[0], s[1], n + 1, max(ymax, s[1]), straight and ch == "N")
            seen.discard(s)

    if n_max >= 1:
        dfs(0, 1, 1, 1, True)
    return table


def bp_count(length: int, j: int) -> int:
    """|BPi_{length, j}| by convolution over (length, height) bridge tables."""
    if j == 0:
        return 1 if length == 0 else 0
    table = bridge_height_table(length)
    # state: (total length, last height) -> number of partial lists
    states: Dict[Tuple[int, int], int] = {(0, length + 1): 1}
    for _ in range(j):
        nxt: Dict[Tuple[int, int], int] = {}
        for (used, hlast), c in states.items():
            for (l, h), t in table.items():
                if h < hlast and used + l <= length:
                    key = (used + l, h)
                    nxt[key] = nxt.get(key, 0) + c * t
        states = nxt
    return sum(c for (used, _), c in states.items() if used == length)


def strict_partitions(k: int) -> int:
    """Number of partitions of k into distinct parts."""
    ways = [0] * (k + 1)
    ways[0] = 1
    for part in range(1, k + 1):
        for s in range(k, part - 1, -1):
            ways[s] += ways[s - part]
    return ways[k]


def partition_of_bridge_list(bridges) -> List[int]:
    return [b[-1][1] - b[0][1] for b in bridges]


def concatenate_bridges(bridges) -> Walk:
    walk: Walk = ((0, 0),)
    for b in bridges:
        walk = concatenate(walk, b)
    return walk


# ---------------------------------------------------------------- classifiers


def strip_halfwidth(n: int, eps: float = DEFAULT_EPS) -> float:
    return n ** (0.5 + eps)


def horizontally_confined(walk: Sequence[Site], n: int, eps: float = DEFAULT_EPS) -> bool:
    lim = strip_halfwidth(n, eps)
    x0 = walk[0][0]
    return all(abs(s[0] - x0) <= lim for s in walk)


def few_branches(walk: Sequence[Site], n: int, eps: float = DEFAULT_EPS) -> bool:
    return record_points(walk).r < 7 * n ** (0.5 - eps)


def classify(walk, n, eps=DEFAULT_EPS) -> dict:
    return {
        "horizontally_confined": horizontally_confined(walk, n, eps),
        "few_branches": few_branches(walk, n, eps),
        "n": n,
        "eps": eps,
    }


# ---------------------------------------------------------------- the tall-branch split


def _rot_cw(walk: Sequence[Site]) -> Walk:
    """Quarter turn clockwise about the first site, then anchor."""
    x0, y0 = walk[0]
    return tuple((y - y0, -(x - x0)) for x, y in walk)


def _rot_ccw(walk: Sequence[Site]) -> Walk:
    x0, y0 = walk[0]
    return tuple((-(y - y0), x - x0) for x, y in walk)


@dataclass(frozen=True)
class XiParts:
    tall: Tuple[Walk, ...]
    head: Walk  # reversed, edge-prefixed, rotated piece before the last max-x point
    tail: Walk  # rotated piece after the last max-x point
    split: int  # index a_l
    pivot: int  # index s


def xi_decompose(walk: Sequence[Site], n: Optional[int] = None, eps: float = DEFAULT_EPS) -> XiParts:
    n = len(walk) - 1 if n is None else n
    dec = record_points(walk)
    lim = n ** (0.5 + eps)
    tall_count = 0
    for h in dec.heights():
        if h > lim:
            tall_count += 1
        else:
            break
    bl = psi(walk)[:tall_count]
    a = dec.record_indices[tall_count]
    rest = list(walk[a:])
    xmax = max(s[0] for s in rest)
    s_rel = max(i for i, p in enumerate(rest) if p[0] == xmax)
    after = rest[s_rel:]
    before = rest[: s_rel + 1]
    tail = _rot_cw(after)
    pivot = before[-1]
    head = _rot_cw([(pivot[0] + 1, pivot[1])] + list(reversed(before)))
    return XiParts(tuple(bl), head, tail, a, a + s_rel)


def xi_reassemble(parts: XiParts) -> Walk:
    walk = psi_inverse(parts.tall) if parts.tall else ((0, 0),)
    before = _rot_ccw(parts.head)  # starts at the prefixed point, anchored
    before = list(reversed(before[1:]))  # before[0] is now the split point
    before = translate(before, walk[-1][0] - before[0][0], walk[-1][1] - before[0][1])
    walk = walk + tuple(before[1:])
    after = _rot_ccw(parts.tail)
    after = translate(after, walk[-1][0] - after[0][0], walk[-1][1] - after[0][1])
    out = walk + tuple(after[1:])
    if first_repeat(out) is not None:
        raise ReassemblyError("reassembly is not self-avoiding")
    return out


# ---------------------------------------------------------------- lowest-point split


def split_at_final_lowest(walk: Sequence[Site]) -> Tuple[Walk, Walk]:
    """SAW -> (reversed head with a downward step appended, tail), both half-space walks."""
    ymin = min(s[1] for s in walk)
    k = max(i for i, s in enumerate(walk) if s[1] == ymin)
    head = list(walk[: k + 1])
    low = head[-1]
    head.append((low[0], low[1] - 1))
    first = anchor(reverse(head))
    second = anchor(walk[k:])
    return first, second


# ---------------------------------------------------------------- JSON


def decomposition_json(walk: Sequence[Site]) -> dict:
    dec = record_points(walk)
    return {
        "record_indices": list(dec.record_indices),
        "branches": [to_steps(b) for b in dec.branches],
        "bridge_list": [to_steps(b) for b in psi(walk)],
    }


def walk_from_text(text: str) -> Walk:
    return from_steps(text.strip())
