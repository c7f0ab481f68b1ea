import itertools

import pytest

from conftest import CHI, CHIP
from discseries.core import HalfInt
from discseries.errors import InvalidSegment, MixedMonotonicity
from discseries.segments import (
    GenSegment,
    Segment,
    gen_is_linked,
    gen_product_irreducible,
    is_linked,
    parse_gl_symbol,
    product_reducible,
    speh_matrix,
    speh_pair_reducible,
)


def seg(x, y, rho=CHI):
    return Segment.between(rho, x, y)


def h(*vals):
    return tuple(HalfInt.of(v) for v in vals)


class TestSegment:
    def test_elements(self):
        assert seg(2, -1).elements() == list(h(2, 1, 0, -1))
        assert seg(-1, 1).elements() == list(h(-1, 0, 1))
        assert Segment.steinberg(CHI, 3).elements() == list(h(1, 0, -1))

    def test_empty_is_canonical(self):
        assert Segment.descending(CHI, 2, 3) == Segment.empty(CHI)
        assert seg(1, 1).drop_first() == Segment.empty(CHI)

    def test_half_integer_mismatch(self):
        with pytest.raises(InvalidSegment):
            Segment.between(CHI, 1, "1/2")

    def test_shift(self):
        assert seg(1, 0).shift("1/2") == seg("3/2", "1/2")


@pytest.mark.parametrize(
    "s1,s2,expected",
    [((2, 1), (1, 0), True), ((1, 0), (2, -1), False), ((3, 2), (0, -1), False)],
)
def test_is_linked(s1, s2, expected):
    assert is_linked(seg(*s1), seg(*s2)) is expected
    assert is_linked(seg(*s2), seg(*s1)) is expected


def test_mixed_monotonicity():
    with pytest.raises(MixedMonotonicity):
        is_linked(seg(2, 1), seg(0, 1))


def test_product_reducible():
    assert product_reducible(seg(2, 1), seg(1, 0))
    assert not product_reducible(seg(2, 1), seg(1, 0, CHIP))
    assert not product_reducible(seg(1, 0), seg(1, 0))


def test_product_reducible_aubert_symmetry():
    vals = [HalfInt(k) for k in range(-6, 7, 2)]
    for x, y, u, v in itertools.product(vals, repeat=4):
        if x < y or u < v:
            continue
        a, b = seg(x, y), seg(u, v)
        assert product_reducible(a, b) == product_reducible(seg(-y, -x), seg(-v, -u))


class TestSpeh:
    def test_square(self):
        assert speh_matrix(CHI, 2, 2).rows == (h(0, -1), h(1, 0))

    def test_single_row_is_steinberg(self):
        for a in range(1, 5):
            assert speh_matrix(CHI, a, 1).rows == (tuple(Segment.steinberg(CHI, a).elements()),)

    def test_column(self):
        assert speh_matrix(CHI, 1, 3).rows == (h(-1), h(0), h(1))


class TestGenLinking:
    def test_rows_reduce_to_segments(self):
        g1 = GenSegment.from_segment(seg(2, 1))
        g2 = GenSegment.from_segment(seg(1, 0))
        assert gen_is_linked(g1, g2)

    def test_self_not_linked(self):
        g = speh_matrix(CHI, 3, 2)
        assert not gen_is_linked(g, g)
        assert gen_product_irreducible(g, g)

    def test_shifted_speh(self):
        g = speh_matrix(CHI, 2, 2)
        assert gen_is_linked(g.shift(1), g)
        assert speh_pair_reducible(CHI, 2, 2, CHI, 2, 2, 1)

    def test_shifted_character(self):
        g = speh_matrix(CHI, 1, 1)
        assert not gen_product_irreducible(g.shift(1), g)
        assert gen_product_irreducible(g, speh_matrix(CHIP, 1, 1))

    def test_transpose_stable(self):
        g1, g2 = speh_matrix(CHI, 3, 2).shift(1), speh_matrix(CHI, 2, 2)
        assert gen_is_linked(g1, g2) == gen_is_linked(g1.transpose(), g2.transpose())


@pytest.mark.parametrize(
    "args,expected",
    [((CHI, 1, 1, CHI, 1, 1, 1), True), ((CHI, 1, 1, CHI, 1, 1, "1/2"), False), ((CHI, 1, 1, CHIP, 1, 1, 1), False)],
)
def test_speh_pair_reducible(args, expected):
    assert speh_pair_reducible(*args) is expected


def test_parse_gl_symbol():
    table = {"chi": CHI}
    assert parse_gl_symbol("<chi:2..-1>", table) == seg(2, -1)
    assert parse_gl_symbol("<chi:3>", table) == seg(3, 3)
    assert parse_gl_symbol("<chi:>", table) == Segment.empty(CHI)
    assert parse_gl_symbol("<chi:[0,-1|1,0]>", table) == speh_matrix(CHI, 2, 2)
    with pytest.raises(InvalidSegment):
        parse_gl_symbol("<psi:1>", table)
    with pytest.raises(InvalidSegment):
        parse_gl_symbol("chi:1", table)
