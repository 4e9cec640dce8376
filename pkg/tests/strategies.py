"""Shared hypothesis strategies for square-lattice walks."""
from hypothesis import strategies as st

STEPS = {"E": (1, 0), "N": (0, 1), "W": (-1, 0), "S": (0, -1)}


@st.composite
def grown_walks(draw, max_len=30, floor=None, min_len=1):
    """Self-avoiding walks grown step by step; ``floor`` keeps every later site strictly above it."""
    path = [(0, 0)]
    seen = {(0, 0)}
    target = draw(st.integers(min_len, max_len))
    while len(path) - 1 < target:
        x, y = path[-1]
        opts = []
        for ch in "ENWS":
            dx, dy = STEPS[ch]
            s = (x + dx, y + dy)
            if s in seen or (floor is not None and s[1] <= floor):
                continue
            opts.append(s)
        if not opts:
            break
        s = draw(st.sampled_from(opts))
        path.append(s)
        seen.add(s)
    return tuple(path)


def half_space_walks(max_len=30):
    return grown_walks(max_len=max_len, floor=0)
