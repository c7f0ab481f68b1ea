"""Randomized algebraic laws (hypothesis)."""

import json
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CHI, CHIP, RHO2
from discseries.classify import enumerate_packets, triple_of
from discseries.core import GroupType, HalfInt, Kind, QuadChar
from discseries.jacquet import Induced, Packet, jac_sequence
from discseries.lfactors import Cuspidal, Langlands, Steinberg, Tempered, rs, sym2, wedge2
from discseries.segments import Segment, gen_is_linked, is_linked, product_reducible, speh_matrix
from discseries.serialize import param_from_json, param_to_json, triple_from_json, triple_to_json
from discseries.verify import default_alphabet

ALPHABET = default_alphabet()
SYMBOLS = {r.label: r for r in ALPHABET}
PACKETS = [
    pkt
    for n in range(4)
    for g in (GroupType(Kind.SP, n), GroupType(Kind.SO_ODD, n), GroupType(Kind.SO_EVEN, n, QuadChar.of(["chip"])))
    for pkt in enumerate_packets(g, ALPHABET)
]

half = st.integers(-12, 12).map(HalfInt)
rhos = st.sampled_from([CHI, CHIP, RHO2])


@st.composite
def segments(draw, rho=None, step=None):
    r = rho or draw(rhos)
    return Segment(r, draw(half), draw(st.integers(1, 5)), step or draw(st.sampled_from((-1, 1))))


@st.composite
def steinbergs(draw, shifted=True):
    shift = draw(half) if shifted else HalfInt(0)
    return Steinberg(draw(rhos), draw(st.integers(1, 4)), shift)


@st.composite
def glreps(draw):
    kind = draw(st.sampled_from(["cusp", "st", "temp", "lang"]))
    if kind == "cusp":
        return Cuspidal(draw(rhos), draw(half))
    if kind == "st":
        return draw(steinbergs())
    temp = st.lists(steinbergs(shifted=False), min_size=1, max_size=3).map(lambda ps: Tempered(tuple(ps)))
    if kind == "temp":
        return draw(temp)
    us = draw(st.lists(st.integers(0, 6), min_size=1, max_size=3, unique=True))
    return Langlands(tuple((draw(temp), HalfInt(u)) for u in sorted(us, reverse=True)))


@given(st.integers(-40, 40), st.integers(-40, 40))
def test_halfint_matches_fractions(a, b):
    x, y = HalfInt(a), HalfInt(b)
    fx, fy = Fraction(a, 2), Fraction(b, 2)
    assert (x + y).to_fraction() == fx + fy
    assert (x - y).to_fraction() == fx - fy
    assert (x < y) == (fx < fy)
    assert HalfInt.of(str(fx)) == x


@given(st.sets(st.sampled_from("abcd")), st.sets(st.sampled_from("abcd")), st.sets(st.sampled_from("abcd")))
def test_quadchar_elementary_abelian(a, b, c):
    x, y, z = QuadChar.of(a), QuadChar.of(b), QuadChar.of(c)
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert (x * x).is_trivial()


@given(st.data())
def test_linking_symmetric(data):
    step = data.draw(st.sampled_from((-1, 1)))
    s1 = data.draw(segments(rho=CHI, step=step))
    s2 = data.draw(segments(rho=CHI, step=step))
    assert is_linked(s1, s2) == is_linked(s2, s1)


@given(segments(rho=CHI, step=-1), segments(rho=CHI, step=-1))
def test_reducibility_under_involution(s1, s2):
    flip = lambda s: Segment.between(s.rho, -s.end, -s.start)  # noqa: E731
    assert product_reducible(s1, s2) == product_reducible(flip(s1), flip(s2))


@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.integers(-12, 12))
def test_gen_linking_symmetric_and_transpose_stable(a, b, a2, b2, s):
    g1 = speh_matrix(CHI, a, b).shift(HalfInt(s))
    g2 = speh_matrix(CHI, a2, b2)
    assert gen_is_linked(g1, g2) == gen_is_linked(g2, g1)
    assert gen_is_linked(g1, g2) == gen_is_linked(g1.transpose(), g2.transpose())


@given(glreps(), glreps())
def test_rs_symmetric(pi, sigma):
    assert rs(pi, sigma) == rs(sigma, pi)


@given(steinbergs(), steinbergs(), half)
def test_rs_shift_covariant(p, q, t):
    moved = Steinberg(p.rho, p.a, p.shift + t)
    assert rs(moved, q) == rs(p, q).shift(t)


@given(glreps())
def test_square_factorization(pi):
    assert rs(pi, pi) == sym2(pi) * wedge2(pi)


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_jacquet_commutation(data):
    phi, eps = data.draw(st.sampled_from(PACKETS))
    rho = data.draw(rhos)
    parts = data.draw(st.lists(segments(), max_size=3))
    sym = Induced(tuple(parts), Packet(phi, eps))
    x = data.draw(half)
    y = data.draw(half.filter(lambda v: abs((v - x).doubled) != 2))
    assert jac_sequence([x, y], rho, sym) == jac_sequence([y, x], rho, sym)


@settings(deadline=None)
@given(st.sampled_from(PACKETS))
def test_json_round_trip(pkt):
    phi, eps = pkt
    text = json.dumps(param_to_json(phi, eps), sort_keys=True)
    assert param_from_json(json.loads(text), SYMBOLS) == (phi, eps)
    t = triple_of(phi, eps)
    doc = json.loads(json.dumps(triple_to_json(t)))
    assert triple_from_json(doc, SYMBOLS) == t
