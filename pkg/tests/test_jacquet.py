from collections import Counter

import pytest

from conftest import CHI, CHIP, RHO2, eps_on, param
from discseries.core import EpsilonChar, GroupType, HalfInt, JordanBlock, Kind, Level, Parameter, epsilon_characters
from discseries.errors import NonDiscreteParameter, NonPositiveX, UnsupportedSymbol
from discseries.jacquet import (
    Induced,
    Packet,
    Twisted,
    VirtualSum,
    collapse_theta,
    gl_of_parameter,
    gl_product,
    jac,
    jac_gl,
    jac_op_gl,
    jac_packet,
    jac_sequence,
    jac_theta,
    minus_parameter,
    restrict_to_bar,
    so_even_jac_table,
    unified_bar_formula,
)
from discseries.segments import GenSegment, Segment, speh_matrix


def seg(x, y, rho=CHI):
    return Segment.between(rho, x, y)


def gl(*segs):
    return gl_product(segs)


class TestVirtualSum:
    def test_pruning_and_addition(self):
        a = VirtualSum.of(gl(seg(1, 0)), 2)
        b = VirtualSum.of(gl(seg(1, 0)), -2)
        assert (a + b).is_zero()
        assert len(a + VirtualSum.of(gl(seg(2, 2)))) == 2

    def test_factor_order_irrelevant(self):
        assert VirtualSum.of((seg(1, 1), seg(2, 2))) == VirtualSum.of((seg(2, 2), seg(1, 1)))


class TestGL:
    def test_leading_rule(self):
        assert jac_gl(3, CHI, seg(3, 1)) == VirtualSum.of(gl(seg(2, 1)))
        assert jac_gl(2, CHI, seg(3, 1)).is_zero()

    def test_leibniz_coefficient(self):
        got = jac_gl(1, CHI, (seg(1, 1), seg(1, 1)))
        assert got == VirtualSum.of(gl(seg(1, 1)), 2)

    def test_label_must_match(self):
        assert jac_gl(3, CHIP, seg(3, 1)).is_zero()

    def test_trailing_rule(self):
        assert jac_op_gl(1, CHI, seg(3, 1)) == VirtualSum.of(gl(seg(3, 2)))
        assert jac_op_gl(3, CHI, seg(3, 1)).is_zero()
        assert jac_op_gl(0, CHI, seg(0, 0)) == VirtualSum.of(())

    def test_theta(self):
        phi5 = param("Sp", 2, (CHI, 5))
        phi3 = param("Sp", 1, (CHI, 3))
        assert jac_theta(2, CHI, gl_of_parameter(phi5)) == VirtualSum.of(gl_of_parameter(phi3))
        assert jac_theta(2, CHI, gl_of_parameter(phi3)).is_zero()
        assert jac_theta("1/2", CHI, Segment.steinberg(CHI, 2)) == VirtualSum.of(())

    def test_theta_matches_minus_parameter(self, alphabet):
        from discseries.classify import discrete_parameters

        for kind in (Kind.SP, Kind.SO_ODD):
            for phi in discrete_parameters(GroupType(kind, 3), alphabet):
                for b in phi.jord:
                    if b.a < 2:
                        continue
                    x = HalfInt(b.a - 1)
                    low = minus_parameter(phi, b.rho, x)
                    got = jac_theta(x, b.rho, gl_of_parameter(phi))
                    assert got.coefficient(gl_of_parameter(low)) >= 1

    def test_segment_characterized_by_jacquet(self):
        # only the leading exponent of a segment survives Jac
        s = seg(2, -1)
        hits = [x for x in range(-3, 4) if not jac_gl(x, CHI, s).is_zero()]
        assert hits == [2]
        product = (seg(2, 2), seg(1, 1), seg(0, 0), seg(-1, -1))
        hits = [x for x in range(-3, 4) if not jac_gl(x, CHI, product).is_zero()]
        assert hits == [-1, 0, 1, 2]

    def test_rectangles_unsupported(self):
        with pytest.raises(UnsupportedSymbol):
            jac_gl(0, CHI, (speh_matrix(CHI, 2, 2),))
        row = GenSegment.from_segment(seg(2, 1))
        assert jac_gl(2, CHI, (row,)) == VirtualSum.of(gl(seg(1, 1)))


SP6 = param("Sp", 3, (CHI, 5), (CHI, 1), (CHIP, 1))


class TestPacket:
    def test_case_one_transport(self):
        eps = eps_on(SP6, {(CHI, 5): 1, (CHI, 1): -1, (CHIP, 1): -1})
        out = jac_packet(2, CHI, Packet(SP6, eps))
        assert out.phi == param("Sp", 2, (CHI, 3), (CHI, 1), (CHIP, 1))
        assert out.eps.get(CHI, 3) == 1
        assert out.eps.get(CHI, 1) == -1 and out.eps.get(CHIP, 1) == -1

    def test_vanishing(self):
        eps = eps_on(SP6, {(CHI, 5): 1, (CHI, 1): -1, (CHIP, 1): -1})
        assert jac_packet(1, CHI, Packet(SP6, eps)) is None

    def test_half_step_sign(self):
        phi = param("SOodd", 2, (CHI, 2), (CHIP, 2))
        bad = eps_on(phi, {(CHI, 2): -1, (CHIP, 2): -1})
        assert jac_packet("1/2", CHI, Packet(phi, bad)) is None
        good = EpsilonChar.trivial(phi.jord)
        out = jac_packet("1/2", CHI, Packet(phi, good))
        assert out.phi == param("SOodd", 1, (CHIP, 2))

    def test_doubling_case(self):
        phi = param("SOeven", 3, (CHI, 1), (CHI, 5))
        e = eps_on(phi, {(CHI, 1): -1, (CHI, 5): -1})
        mid = jac_packet(2, CHI, Packet(phi, e))
        assert mid.phi.jord_rho(CHI) == [1, 3]
        assert (mid.eps.get(CHI, 1), mid.eps.get(CHI, 3)) == (-1, -1)
        low = jac_packet(1, CHI, mid)
        assert low.phi.doubled() == (JordanBlock(CHI, 1),)
        assert low.phi.group.n == 1

    def test_doubling_needs_equal_signs(self):
        phi = param("SOeven", 2, (CHI, 1), (CHI, 3))
        assert jac_packet(1, CHI, Packet(phi, EpsilonChar.trivial(phi.jord))) is not None
        plus = param("SOeven", 3, (CHI, 1), (CHI, 5))
        mid = jac_packet(2, CHI, Packet(plus, EpsilonChar.trivial(plus.jord)))
        assert jac_packet(1, CHI, mid) is not None
        mixed = param("Sp", 3, (CHI, 3), (CHI, 1), (CHIP, 3))
        e = eps_on(mixed, {(CHI, 3): 1, (CHI, 1): -1, (CHIP, 3): -1})
        assert jac_packet(1, CHI, Packet(mixed, e)) is None

    def test_errors(self):
        eps = EpsilonChar.trivial(SP6.jord)
        with pytest.raises(NonPositiveX):
            jac_packet(0, CHI, Packet(SP6, eps))
        tempered = Parameter(GroupType(Kind.SP, 1), [(JordanBlock(CHI, 1), 2), (JordanBlock(CHIP, 1), 1)])
        with pytest.raises(NonDiscreteParameter):
            jac_packet(1, CHI, Packet(tempered, EpsilonChar.trivial(tempered.jord)))

    def test_packet_rejects_two_doubled_blocks(self):
        phi = Parameter(GroupType(Kind.SO_EVEN, 2), [(JordanBlock(CHI, 1), 2), (JordanBlock(CHIP, 1), 2)])
        with pytest.raises(NonDiscreteParameter):
            Packet(phi, EpsilonChar.trivial(phi.jord))

    def test_packet_coherence_small(self):
        phi = SP6
        low = minus_parameter(phi, CHI, 2)
        outs = [jac_packet(2, CHI, Packet(phi, e)) for e in epsilon_characters(phi)]
        assert Counter(o.eps.signs for o in outs if o) == Counter(e.signs for e in epsilon_characters(low))


class TestInduced:
    def test_only_first_term(self):
        inner_phi = param("Sp", 1, (CHI, 3))
        inner = Packet(inner_phi, EpsilonChar.trivial(inner_phi.jord))
        got = jac(2, CHI, Induced((seg(2, 2),), inner))
        assert got == VirtualSum.of(inner)

    def test_nothing_matches(self):
        inner_phi = param("Sp", 1, (CHI, 3))
        inner = Packet(inner_phi, EpsilonChar.trivial(inner_phi.jord))
        assert jac(5, CHI, Induced((seg(2, 2),), inner)).is_zero()

    def test_three_terms(self):
        inner_phi = param("Sp", 1, (CHI, 3))
        inner = Packet(inner_phi, EpsilonChar.trivial(inner_phi.jord))
        got = jac(1, CHI, Induced((seg(1, -1),), inner))
        low = param("Sp", 0, (CHI, 1))
        expected = VirtualSum(
            [
                (Induced((seg(0, -1),), inner), 1),
                (Induced((seg(1, 0),), inner), 1),
                (Induced((seg(1, -1),), Packet(low, EpsilonChar.trivial(low.jord))), 1),
            ]
        )
        assert got == expected

    def test_commutation(self):
        inner_phi = param("Sp", 2, (CHI, 5))
        inner = Packet(inner_phi, EpsilonChar.trivial(inner_phi.jord))
        sym = Induced((seg(3, 1), seg(0, -2), seg(2, 2)), inner)
        for x, y in [(3, 1), (2, 0), (3, 2 - 1), (-2, 2)]:
            if abs(x - y) == 1:
                continue
            assert jac_sequence([x, y], CHI, sym) == jac_sequence([y, x], CHI, sym)

    def test_sequence_order(self):
        sym = (seg(2, 1),)
        assert not jac_sequence([2, 1], CHI, sym).is_zero()
        assert jac_sequence([1, 2], CHI, sym).is_zero()


class TestBar:
    def test_coefficient_two(self):
        phi = param("SOeven", 2, (RHO2, 2))
        pkt = Packet(phi, EpsilonChar.trivial(phi.jord))
        out = restrict_to_bar(VirtualSum.of(pkt))
        assert out == VirtualSum.of(Packet(phi, pkt.eps, Level.BAR), 2)

    def test_coefficient_one_and_merge(self):
        phi = param("SOeven", 3, (CHI, 1), (CHIP, 5), eta=["chip"])
        both = VirtualSum([(Packet(phi, e), 1) for e in epsilon_characters(phi)])
        out = restrict_to_bar(both)
        assert out == VirtualSum.of(Packet(phi, EpsilonChar.trivial(phi.jord), Level.BAR), 2)


def _inner_jac(x, sym):
    return [Twisted(sym.name + "'", sym.theta)] if HalfInt.of(x) == HalfInt.of(1) else []


@pytest.mark.parametrize(
    "rho,tau,inner_rank",
    [
        (CHI, (seg(1, 1), seg(-1, -1)), 3),  # inner rank away from 0 and d_rho
        (RHO2, (Segment(RHO2, HalfInt(2), 1), Segment(RHO2, HalfInt(-2), 1)), 3),
        (CHI, (seg(1, 1), seg(-1, -1)), 1),  # inner rank equal to d_rho
        (RHO2, (Segment(RHO2, HalfInt(2), 1),), 2),
        (CHI, (seg(1, 0), seg(0, -1)), 0),  # trivial inner group, larger GL block
        (RHO2, (Segment(RHO2, HalfInt(-2), 2, 1),), 0),
        (RHO2, (Segment(RHO2, HalfInt(2), 1),), 0),  # Siegel Levi, even d_rho
    ],
)
def test_even_orthogonal_table_collapses_to_bar_formula(rho, tau, inner_rank):
    inner = Twisted("pi")
    for x in (1, -1, 0, 2):
        table = so_even_jac_table(x, rho, tau, inner_rank, inner, _inner_jac)
        assert collapse_theta(table) == unified_bar_formula(x, rho, tau, inner_rank, inner, _inner_jac)
