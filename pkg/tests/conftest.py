import pytest

from discseries.core import EpsilonChar, GroupType, JordanBlock, Kind, Parameter, QuadChar, ScuspSymbol
from discseries.verify import default_alphabet, default_twists
from discseries.endoscopy import TwistTable

CHI, CHIP, RHO2 = default_alphabet()


def blocks(*pairs):
    return [(JordanBlock(r, a), 1) for r, a in pairs]


def param(kind, n, *pairs, eta=()):
    return Parameter(GroupType(Kind(kind), n, QuadChar.of(eta)), blocks(*pairs))


def eps_on(phi, signs):
    """signs keyed by (symbol, a) so tests do not depend on block order."""
    return EpsilonChar(tuple((b, signs[(b.rho, b.a)]) for b in phi.jord))


@pytest.fixture(scope="session")
def alphabet():
    return default_alphabet()


@pytest.fixture(scope="session")
def twists():
    return TwistTable(default_alphabet(), default_twists())


@pytest.fixture
def tau3():
    return ScuspSymbol("tau3", 3, False, "none", dual_label="tau3v")
