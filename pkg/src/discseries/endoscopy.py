"""Endoscopic splitting of parameters by sign vectors and the epsilon pairing."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import (
    TRIVIAL,
    EpsilonChar,
    GroupType,
    HalfInt,
    JordanBlock,
    Kind,
    Level,
    Parameter,
    QuadChar,
    ScuspSymbol,
    eps0,
    epsilon_characters,
    require_discrete,
)
from .errors import AlphabetNotClosedUnderTwist, BlockSetMismatch, SignVectorNotInComponentGroup
from .jacquet import Packet, VirtualSum, minus_parameter


class TwistTable:
    """Resolves rho (x) eta to a label of the alphabet."""

    def __init__(self, alphabet, twists=None):
        self.symbols = {r.label: r for r in alphabet}
        self.table = {}
        for (label, eta), target in dict(twists or {}).items():
            eta = eta if isinstance(eta, QuadChar) else QuadChar.of(eta)
            self.table[(label, eta)] = target

    def twist(self, rho: ScuspSymbol, eta: QuadChar) -> ScuspSymbol:
        if eta.is_trivial():
            return rho
        target = self.table.get((rho.label, eta))
        if target is not None:
            if target not in self.symbols:
                raise AlphabetNotClosedUnderTwist(f"twist target {target!r} is not in the alphabet")
            return self.symbols[target]
        if rho.dim == 1:
            want = rho.central_char * eta
            hits = [
                r for r in self.symbols.values()
                if r.dim == 1 and r.self_dual and r.central_char == want
            ]
            if len(hits) == 1:
                return hits[0]
        raise AlphabetNotClosedUnderTwist(f"{rho.label} twisted by {eta} is not in the alphabet")


@dataclass(frozen=True)
class EndoDatum:
    g1: GroupType
    phi1: Parameter
    eta1: QuadChar
    g2: GroupType
    phi2: Parameter
    eta2: QuadChar
    twisted: bool


def _signs_on(phi: Parameter, s) -> EpsilonChar:
    if isinstance(s, EpsilonChar):
        if s.blocks != phi.jord:
            raise SignVectorNotInComponentGroup("sign vector lives on other blocks")
        return s
    s = list(s)
    if len(s) != len(phi.jord) or any(v not in (1, -1) for v in s):
        raise SignVectorNotInComponentGroup(f"expected {len(phi.jord)} signs of +-1, got {s}")
    return EpsilonChar.from_signs(phi.jord, s)


def in_s_phi(phi: Parameter, s) -> bool:
    """Whether s lies in the (untwisted) component group rather than only
    in its full-orthogonal extension."""
    s = _signs_on(phi, s)
    if phi.group.kind is not Kind.SO_EVEN:
        return True
    odd = sum(1 for b, v in s.values if v == -1 and b.dim % 2)
    return odd % 2 == 0


def _split(group: GroupType, copies: list, table: TwistTable) -> EndoDatum:
    """copies: list of (JordanBlock, sign), one entry per copy of a block."""
    plus = [b for b, v in copies if v == 1]
    minus = [b for b, v in copies if v == -1]
    n1 = sum(b.dim for b in plus)
    n2 = sum(b.dim for b in minus)
    eta2 = TRIVIAL
    for b in minus:
        eta2 = eta2 * b.central_char
    kind = group.kind
    if kind is Kind.SP:
        if n1 % 2 == 0:
            plus, minus, n1, n2 = minus, plus, n2, n1
            eta2 = TRIVIAL
            for b in minus:
                eta2 = eta2 * b.central_char
        eta1 = eta2
        g1 = GroupType(Kind.SP, (n1 - 1) // 2)
        g2 = GroupType(Kind.SO_EVEN, n2 // 2, eta2)
        blocks1 = [JordanBlock(table.twist(b.rho, eta1), b.a) for b in plus]
        blocks2 = list(minus)
        twisted = False
    elif kind is Kind.SO_ODD:
        eta1 = eta2 = TRIVIAL
        g1 = GroupType(Kind.SO_ODD, n1 // 2)
        g2 = GroupType(Kind.SO_ODD, n2 // 2)
        blocks1, blocks2, twisted = list(plus), list(minus), False
    else:
        eta1 = eta2 * group.eta
        if n1 % 2 == 0:
            g1 = GroupType(Kind.SO_EVEN, n1 // 2, eta1)
            g2 = GroupType(Kind.SO_EVEN, n2 // 2, eta2)
            blocks1, blocks2, twisted = list(plus), list(minus), False
        else:
            g1 = GroupType(Kind.SP, (n1 - 1) // 2)
            g2 = GroupType(Kind.SP, (n2 - 1) // 2)
            blocks1 = [JordanBlock(table.twist(b.rho, eta1), b.a) for b in plus]
            blocks2 = [JordanBlock(table.twist(b.rho, eta2), b.a) for b in minus]
            twisted = True
    phi1 = Parameter.unchecked(g1, [(b, 1) for b in blocks1])
    phi2 = Parameter.unchecked(g2, [(b, 1) for b in blocks2])
    return EndoDatum(g1, phi1, eta1, g2, phi2, eta2, twisted)


def endo_datum(phi: Parameter, s, table: TwistTable | None = None) -> EndoDatum:
    """Endoscopic datum (H, phi_H) attached to the sign vector s on Jord(phi)."""
    require_discrete(phi)
    s = _signs_on(phi, s)
    if table is None:
        table = TwistTable(phi.rhos())
    return _split(phi.group, list(s.values), table)


def pairing(eps: EpsilonChar, s) -> int:
    if isinstance(s, EpsilonChar):
        if s.blocks != eps.blocks:
            raise BlockSetMismatch("epsilon and s live on different blocks")
        signs = s.signs
    else:
        signs = tuple(s)
        if len(signs) != len(eps.blocks):
            raise BlockSetMismatch(f"expected {len(eps.blocks)} signs, got {len(signs)}")
    out = 1
    for e, v in zip(eps.signs, signs):
        if e == -1 and v == -1:
            out = -out
    return out


def component_elements(phi: Parameter) -> list:
    """Representatives of Z_2^r modulo the diagonal: first entry +1."""
    r = len(phi.jord)
    if r == 0:
        return [EpsilonChar(())]
    return [EpsilonChar.from_signs(phi.jord, (1,) + rest) for rest in itertools.product((1, -1), repeat=r - 1)]


def packet_transfer_sum(phi: Parameter, s, table: TwistTable | None = None) -> VirtualSum:
    """Signed packet sum indexed by the pairing with s."""
    s = _signs_on(phi, s)
    endo_datum(phi, s, table)
    if in_s_phi(phi, s):
        terms = []
        for eps in epsilon_characters(phi, Level.BAR):
            terms.append((Packet(phi, eps, Level.BAR), pairing(eps, s)))
        return VirtualSum(terms)
    return VirtualSum(
        (Packet(phi, eps), pairing(eps, s)) for eps in epsilon_characters(phi, Level.SIGMA0)
    )


def eps0_twist_negates(phi: Parameter, eps: EpsilonChar, s) -> bool:
    """pairing(eps * eps0, s) = -pairing(eps, s) exactly when s is not in S_phi."""
    s = _signs_on(phi, s)
    flipped = pairing(eps * eps0(phi), s) == -pairing(eps, s)
    return flipped == (not in_s_phi(phi, s))


def is_nondegenerate(phi: Parameter) -> bool:
    chars = epsilon_characters(phi, Level.SIGMA0)
    elems = component_elements(phi)
    for s in elems:
        if not s.is_trivial() and all(pairing(e, s) == 1 for e in chars):
            return False
    for e in chars:
        if not e.is_trivial() and all(pairing(e, s) == 1 for s in elems):
            return False
    return True


# compatibility with the Jacquet step -----------------------------------------


def _rewrite_side(phi_side: Parameter, old: JordanBlock, new_a: int) -> Parameter:
    blocks = []
    done = False
    for b, m in phi_side.blocks:
        if not done and b == old:
            done = True
            if m > 1:
                blocks.append((b, m - 1))
            if new_a > 0:
                blocks.append((JordanBlock(b.rho, new_a), 1))
        else:
            blocks.append((b, m))
    g = phi_side.group
    dim = sum(b.dim * m for b, m in blocks)
    return Parameter.unchecked(g.with_rank(GroupType.rank_for(g.kind, dim)), blocks)


def projected_signs(phi: Parameter, s: EpsilonChar, rho: ScuspSymbol, x) -> list:
    """Per-copy signs on phi_-: the moved block keeps its sign."""
    x = HalfInt.of(x)
    top = JordanBlock(rho, x.doubled + 1)
    copies = []
    for b, v in s.values:
        if b == top:
            if b.a > 2:
                copies.append((JordanBlock(rho, b.a - 2), v))
        else:
            copies.append((b, v))
    return sorted(copies, key=lambda p: p[0].key)


def projection_value(copies: list, block: JordanBlock) -> int:
    """Sign on a block of phi_-: product over its copies."""
    out = 1
    for b, v in copies:
        if b == block:
            out *= v
    return out


def jacquet_endoscopy_compatible(phi: Parameter, s, rho: ScuspSymbol, x, table: TwistTable | None = None) -> bool:
    """Split-then-rewrite equals rewrite-then-split for the step at x."""
    x = HalfInt.of(x)
    s = _signs_on(phi, s)
    phi_minus = minus_parameter(phi, rho, x)
    if phi_minus is None:
        return True
    if table is None:
        table = TwistTable(phi.rhos())
    top = JordanBlock(rho, x.doubled + 1)
    before = endo_datum(phi, s, table)
    copies = projected_signs(phi, s, rho, x)
    after = _split(phi_minus.group, copies, table)
    side = s[top]
    if phi.group.kind is Kind.SP and sum(b.dim for b, v in s.values if v == 1) % 2 == 0:
        side = -side
    if side == 1:
        tw = table.twist(rho, before.eta1) if phi.group.kind is Kind.SP or before.twisted else rho
        p1 = _rewrite_side(before.phi1, JordanBlock(tw, top.a), top.a - 2)
        expected = EndoDatum(p1.group, p1, before.eta1, before.g2, before.phi2, before.eta2, before.twisted)
    else:
        tw = table.twist(rho, before.eta2) if before.twisted else rho
        p2 = _rewrite_side(before.phi2, JordanBlock(tw, top.a), top.a - 2)
        expected = EndoDatum(before.g1, before.phi1, before.eta1, p2.group, p2, before.eta2, before.twisted)
    if top.a > 2 and phi.contains(rho, top.a - 2):
        low = JordanBlock(rho, top.a - 2)
        if projection_value(copies, low) != s[top] * s[low]:
            return False
    return after == expected
