import math

import pytest

from hypothesis import given, strategies as st

from sawlab import hwdecomp as hw
from sawlab.enumerate import walks
from sawlab.walkmodel import from_steps, is_bridge, is_hsw

from strategies import grown_walks, half_space_walks


def test_bridge_is_a_single_branch():
    g = from_steps("NENNWN")
    dec = hw.record_points(g)
    assert dec.r == 1
    assert hw.psi(g) == [g]


def test_up_up_right_down():
    dec = hw.record_points(from_steps("NNES"))
    assert dec.record_indices == (0, 3, 4)
    assert dec.r == 2


@given(half_space_walks(40))
def test_psi_roundtrip_and_decreasing_heights(w):
    bl = hw.psi(w)
    assert hw.psi_inverse(bl) == w
    ok, why = hw.is_bridge_list(bl)
    assert ok, why
    assert sum(len(b) - 1 for b in bl) == len(w) - 1


def test_branch_heights_decrease_on_all_of_hsw8():
    for n in range(1, 9):
        for w in walks("hsw", n):
            hs = hw.record_points(w).heights()
            assert all(a > b for a, b in zip(hs, hs[1:]))


def test_psi_roundtrip_exhaustive_to_seven():
    for n in range(1, 8):
        images = set()
        for w in walks("hsw", n):
            bl = tuple(hw.psi(w))
            assert hw.psi_inverse(bl) == w
            images.add(bl)
        assert len(images) == len(walks("hsw", n))


def test_bridge_lists_empty_past_triangular_bound():
    for length in range(1, 13):
        for j in range(1, length + 1):
            if j > math.sqrt(2 * length):
                assert hw.bp_count(length, j) == 0


def test_bridge_list_count_by_direct_combination():
    # lists of two bridges with lengths summing to 3 and strictly decreasing heights
    sab = {n: walks("sab", n) for n in (1, 2)}
    direct = 0
    for a, b in ((2, 1), (1, 2)):
        for p in sab[a]:
            for q in sab[b]:
                direct += p[-1][1] > q[-1][1]
    assert direct == hw.bp_count(3, 2) == 1


def test_strict_partitions():
    assert hw.strict_partitions(1) == 1
    assert hw.strict_partitions(6) == 4
    ratio = max(math.log(hw.strict_partitions(k)) / math.sqrt(k) for k in (1, 10, 100, 500, 1000, 2500))
    assert ratio < math.pi / math.sqrt(3)


def test_bridge_list_membership_and_overlap():
    ok, why = hw.is_bridge_list([from_steps("NE"), from_steps("N")])
    assert not ok and "decrease" in why
    crossing = [from_steps("NEEN"), from_steps("NWWW")]
    assert hw.is_bridge_list(crossing)[0]
    with pytest.raises(hw.ReassemblyError):
        hw.psi_inverse(crossing)


@given(half_space_walks(30))
def test_tall_split_reassembles(w):
    n = len(w) - 1
    parts = hw.xi_decompose(w, n, eps=0.1)
    assert hw.xi_reassemble(parts) == w
    assert len(parts.tall) <= n ** 0.4 + 1e-9


def test_all_short_branches_give_plain_split():
    w = from_steps("NESENE")
    parts = hw.xi_decompose(w, 10_000, eps=0.1)
    assert parts.tall == ()
    assert hw.xi_reassemble(parts) == w


def test_tall_split_exhaustive_small():
    for w in walks("hsw", 8):
        assert hw.xi_reassemble(hw.xi_decompose(w, 8, eps=0.1)) == w


@given(grown_walks(max_len=30))
def test_lowest_point_split_gives_half_space_walks(w):
    a, b = hw.split_at_final_lowest(w)
    assert is_hsw(a) and (len(b) == 1 or is_hsw(b) or min(s[1] for s in b[1:]) > 0)


def test_classifiers_report_parameters():
    w = from_steps("N" * 20)
    c = hw.classify(w, 20)
    assert c["horizontally_confined"] and c["few_branches"]
    assert is_bridge(w)


@given(st.text(alphabet="NEW", min_size=1, max_size=20).filter(lambda s: s[0] == "N"))
def test_text_roundtrip(s):
    w = hw.walk_from_text(s)
    assert hw.walk_from_text(" " + s + "\n") == w
