import itertools

import pytest

from conftest import CHI, CHIP, RHO2, param
from discseries.core import (
    BlockType,
    EpsilonChar,
    GroupType,
    HalfInt,
    JordanBlock,
    Kind,
    Level,
    Parameter,
    QuadChar,
    ScuspSymbol,
    block_type,
    canonical_bar,
    component_group,
    eps0,
    epsilon_characters,
    parse_signs,
)
from discseries.errors import (
    DeterminantMismatch,
    DimensionMismatch,
    InvalidEpsilon,
    NonDiscreteParameter,
    NotSelfDual,
    ValidationError,
)


class TestHalfInt:
    def test_exact_arithmetic(self):
        x = HalfInt.of("1/2")
        assert x.doubled == 1
        assert x + x == HalfInt.of(1)
        assert -x - x == HalfInt.of(-1)
        assert str(HalfInt.of("-3/2")) == "-3/2"
        assert HalfInt.of(2).is_integer() and not x.is_integer()

    def test_rejects_thirds(self):
        with pytest.raises(ValueError):
            HalfInt.of("1/3")

    def test_ordering(self):
        assert sorted(HalfInt.of(v) for v in ["1", "-1/2", "0"]) == [HalfInt.of(v) for v in ["-1/2", "0", "1"]]


def test_quadchar_group_law():
    a, b, c = QuadChar.of(["x"]), QuadChar.of(["y"]), QuadChar.of(["x", "z"])
    assert a * a == QuadChar()
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert (a * c).sorted() == ["z"]


def test_symbol_invariants():
    with pytest.raises(ValidationError):
        ScuspSymbol("bad", 3, True, "symplectic")
    with pytest.raises(ValidationError):
        ScuspSymbol("bad", 1, True, "symplectic")
    with pytest.raises(ValidationError):
        ScuspSymbol("bad", 2, False, "orthogonal")


@pytest.mark.parametrize(
    "rho,a,expected",
    [
        (CHI, 3, BlockType.ORTHOGONAL),
        (CHI, 2, BlockType.SYMPLECTIC),
        (RHO2, 2, BlockType.ORTHOGONAL),
    ],
)
def test_block_type(rho, a, expected):
    assert block_type(JordanBlock(rho, a)) is expected
    assert block_type(JordanBlock(rho, a + 2)) is expected


def test_block_type_needs_self_dual(tau3):
    with pytest.raises(NotSelfDual):
        block_type(JordanBlock(tau3, 1))


def test_group_dimensions():
    assert GroupType(Kind.SP, 3).N == 7
    assert GroupType(Kind.SO_ODD, 3).N == 6
    assert GroupType(Kind.SO_EVEN, 3).N == 6
    assert GroupType(Kind.SO_ODD, 1).dual_type is BlockType.SYMPLECTIC


def test_block_central_character():
    assert JordanBlock(CHIP, 3).central_char == QuadChar.of(["chip"])
    assert JordanBlock(CHIP, 2).central_char == QuadChar()


class TestParameter:
    def test_dimension_checked(self):
        with pytest.raises(DimensionMismatch):
            param("Sp", 2, (CHI, 3))

    def test_determinant_checked_for_even_orthogonal(self):
        with pytest.raises(DeterminantMismatch):
            param("SOeven", 3, (CHI, 1), (CHIP, 5))
        assert param("SOeven", 3, (CHI, 1), (CHIP, 5), eta=["chip"]).is_discrete

    def test_discreteness(self):
        assert param("Sp", 1, (CHI, 3)).is_discrete
        doubled = Parameter(GroupType(Kind.SP, 1), [(JordanBlock(CHI, 1), 3)])
        assert not doubled.is_discrete
        wrong_type = Parameter(GroupType(Kind.SP, 1), [(JordanBlock(CHI, 2), 1), (JordanBlock(CHI, 1), 1)])
        assert not wrong_type.is_discrete

    def test_canonical_block_order(self):
        phi = param("Sp", 3, (CHIP, 1), (CHI, 5), (CHI, 1))
        assert [b.key for b in phi.jord] == [("chi", 1), ("chi", 5), ("chip", 1)]


class TestComponentGroup:
    def test_single_block(self):
        info = component_group(param("Sp", 1, (CHI, 3)))
        assert (info.rank_sigma0, info.sigma_index, info.eps0_trivial) == (1, 1, True)

    def test_odd_blocks_even_orthogonal(self):
        phi = param("SOeven", 3, (CHI, 1), (CHIP, 5), eta=["chip"])
        info = component_group(phi)
        assert (info.rank_sigma0, info.sigma_index, info.eps0_trivial) == (2, 2, False)
        assert eps0(phi).signs == (-1, -1)

    def test_even_dimension_block(self):
        info = component_group(param("SOeven", 2, (RHO2, 2)))
        assert (info.rank_sigma0, info.sigma_index, info.eps0_trivial) == (1, 1, True)

    def test_non_discrete_rejected(self):
        phi = Parameter(GroupType(Kind.SP, 1), [(JordanBlock(CHI, 1), 3)])
        with pytest.raises(NonDiscreteParameter):
            component_group(phi)


class TestEpsilonCharacters:
    def test_single_block(self):
        chars = epsilon_characters(param("Sp", 1, (CHI, 3)))
        assert [e.signs for e in chars] == [(1,)]

    def test_three_blocks(self):
        assert len(epsilon_characters(param("Sp", 3, (CHI, 5), (CHI, 1), (CHIP, 1)))) == 4

    def test_bar_cosets(self):
        phi = param("SOeven", 3, (CHI, 1), (CHIP, 5), eta=["chip"])
        assert sorted(e.signs for e in epsilon_characters(phi, Level.SIGMA0)) == [(-1, -1), (1, 1)]
        assert [e.signs for e in epsilon_characters(phi, Level.BAR)] == [(1, 1)]

    def test_canonical_representative(self):
        phi = param("SOeven", 3, (CHI, 1), (CHIP, 5), eta=["chip"])
        e = EpsilonChar.from_signs(phi.jord, (-1, -1))
        assert canonical_bar(phi, e).signs == (1, 1)

    def test_eps0_counts(self, alphabet):
        from discseries.classify import discrete_parameters

        for n in range(4):
            for eta in ([], ["chip"]):
                for phi in discrete_parameters(GroupType(Kind.SO_EVEN, n, QuadChar.of(eta)), alphabet):
                    e0 = eps0(phi)
                    assert all((v == -1) == (b.dim % 2 == 1) for b, v in e0.values)
                    assert e0.product() == 1
                    r = len(phi.jord)
                    sig = epsilon_characters(phi, Level.SIGMA0)
                    assert len(sig) == (2 ** (r - 1) if r else 1)
                    bar = epsilon_characters(phi, Level.BAR)
                    assert len(bar) == len(sig) // (1 if e0.is_trivial() else 2)


def test_parse_signs():
    assert parse_signs("+,-,-1, 1") == [1, -1, -1, 1]
    with pytest.raises(InvalidEpsilon):
        parse_signs("+,x")


def test_epsilon_rejects_bad_values():
    phi = param("Sp", 1, (CHI, 3))
    with pytest.raises(InvalidEpsilon):
        EpsilonChar.from_signs(phi.jord, (2,))
    with pytest.raises(InvalidEpsilon):
        EpsilonChar.from_signs(phi.jord, (1, 1))


def test_product_constraint_enumerated(alphabet):
    phi = param("Sp", 3, (CHI, 5), (CHI, 1), (CHIP, 1))
    valid = {e.signs for e in epsilon_characters(phi)}
    expected = {s for s in itertools.product((1, -1), repeat=3) if s[0] * s[1] * s[2] == 1}
    assert valid == expected
