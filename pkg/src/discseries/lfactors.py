"""Formal local L-factors: Rankin-Selberg, symmetric and exterior squares.

A factor (r, t, m) stands for (1 - q^{-r(s+t)})^{-m}; only real pole
locations are tracked.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .core import (
    BlockType,
    HalfInt,
    Kind,
    Parameter,
    ScuspSymbol,
    SdType,
    eps0,
    require_discrete,
)
from .errors import ValidationError


@dataclass(frozen=True)
class LFactor:
    factors: tuple = ()

    @classmethod
    def from_counter(cls, counts: Counter) -> "LFactor":
        items = sorted((r, t, m) for (r, t), m in counts.items() if m)
        return cls(tuple(items))

    @classmethod
    def one(cls) -> "LFactor":
        return cls(())

    @classmethod
    def simple(cls, r: int = 1, t=0) -> "LFactor":
        return cls(((r, HalfInt.of(t), 1),))

    def counter(self) -> Counter:
        return Counter({(r, t): m for r, t, m in self.factors})

    def __mul__(self, other: "LFactor") -> "LFactor":
        return LFactor.from_counter(self.counter() + other.counter())

    def shift(self, t) -> "LFactor":
        t = HalfInt.of(t)
        return LFactor(tuple((r, u + t, m) for r, u, m in self.factors))

    def is_one(self) -> bool:
        return not self.factors

    def poles(self) -> list[HalfInt]:
        return sorted({-t for _, t, _ in self.factors})

    def order_at(self, s0) -> int:
        s0 = HalfInt.of(s0)
        return sum(m for _, t, m in self.factors if t == -s0)

    def has_pole(self, s0) -> bool:
        return self.order_at(s0) > 0

    def render(self) -> str:
        if not self.factors:
            return "1"
        out = []
        for r, t, m in self.factors:
            if t.doubled == 0:
                expo = "s" if r == 1 else f"{r}s"
            else:
                arg = f"(s{'+' if t.doubled > 0 else '-'}{abs(t)})"
                expo = arg if r == 1 else f"{r}{arg}"
            term = f"(1-q^{{-{expo}}})^{{-1}}"
            out.append(term * m)
        return "".join(out)

    def __str__(self):
        return self.render()


def product(factors) -> LFactor:
    counts: Counter = Counter()
    for f in factors:
        counts.update(f.counter())
    return LFactor.from_counter(counts)


# GL representations -------------------------------------------------------


@dataclass(frozen=True)
class Cuspidal:
    rho: ScuspSymbol
    shift: HalfInt = HalfInt(0)


@dataclass(frozen=True)
class Steinberg:
    rho: ScuspSymbol
    a: int
    shift: HalfInt = HalfInt(0)

    def __post_init__(self):
        if self.a < 1:
            raise ValidationError("Steinberg length must be positive")

    @property
    def dim(self) -> int:
        return self.a * self.rho.dim


@dataclass(frozen=True)
class Tempered:
    parts: tuple

    def __post_init__(self):
        for p in self.parts:
            if not isinstance(p, Steinberg) or p.shift.doubled != 0:
                raise ValidationError("tempered constituents must be unshifted Steinbergs")


@dataclass(frozen=True)
class Langlands:
    parts: tuple  # ((Tempered, u), ...)

    def __post_init__(self):
        us = [HalfInt.of(u) for _, u in self.parts]
        if any(x <= y for x, y in zip(us, us[1:])):
            raise ValidationError("Langlands exponents must be strictly decreasing")
        object.__setattr__(self, "parts", tuple((t, HalfInt.of(u)) for t, u in self.parts))


GLRep = Cuspidal | Steinberg | Tempered | Langlands


def tempered_of(phi: Parameter) -> Tempered:
    """The GL(N) representation attached to a parameter."""
    parts = []
    for b, m in phi.blocks:
        parts.extend([Steinberg(b.rho, b.a)] * m)
    return Tempered(tuple(parts))


def _cusp_pair(rho: ScuspSymbol, rho2: ScuspSymbol) -> LFactor:
    if rho.dim != rho2.dim or not rho2.is_dual_of(rho):
        return LFactor.one()
    return LFactor.simple(rho.torsion, 0)


def _discrete_pair(p: Steinberg, q: Steinberg) -> LFactor:
    if p.dim < q.dim:
        p, q = q, p
    a, b = p.a, q.a
    base = _cusp_pair(p.rho, q.rho)
    if base.is_one():
        return base
    return product(base.shift(HalfInt(a + b) - i) for i in range(1, b + 1))


def rs(pi, sigma) -> LFactor:
    """L(s, pi x sigma)."""
    if isinstance(pi, Langlands) or isinstance(sigma, Langlands):
        return product(
            rs(p, q).shift(u + v) for p, u in _pieces(pi) for q, v in _pieces(sigma)
        )
    if isinstance(pi, Tempered) or isinstance(sigma, Tempered):
        return product(rs(p, q) for p in _parts(pi) for q in _parts(sigma))
    p, q = _as_steinberg(pi), _as_steinberg(sigma)
    return _discrete_pair(
        Steinberg(p.rho, p.a), Steinberg(q.rho, q.a)
    ).shift(p.shift + q.shift)


def _pieces(x) -> list:
    if isinstance(x, Langlands):
        return list(x.parts)
    return [(x, HalfInt(0))]


def _parts(x) -> list:
    if isinstance(x, Tempered):
        return list(x.parts)
    return [x]


def _as_steinberg(x) -> Steinberg:
    if isinstance(x, Cuspidal):
        return Steinberg(x.rho, 1, x.shift)
    return x


def _cusp_square(rho: ScuspSymbol, which: SdType) -> LFactor:
    if rho.self_dual and rho.sd_type is which:
        return LFactor.simple(rho.torsion, 0)
    return LFactor.one()


def _square(pi, which: SdType) -> LFactor:
    other = which.opposite()
    if isinstance(pi, Cuspidal):
        return _cusp_square(pi.rho, which).shift(pi.shift * 2)
    if isinstance(pi, Steinberg):
        a = pi.a
        terms = []
        # pi_i = rho |.|^{(a+1)/2 - i}; the twist rule doubles exponents
        for i in range(1, (a + 1) // 2 + 1):
            x = HalfInt(a + 1 - 2 * i)
            terms.append(_cusp_square(pi.rho, which).shift(x * 2))
        for i in range(1, a // 2 + 1):
            x = HalfInt(a + 1 - 2 * i) - HalfInt(1)
            terms.append(_cusp_square(pi.rho, other).shift(x * 2))
        return product(terms).shift(pi.shift * 2)
    if isinstance(pi, Tempered):
        parts = pi.parts
        terms = [_square(p, which) for p in parts]
        terms += [rs(parts[i], parts[j]) for i in range(len(parts)) for j in range(i + 1, len(parts))]
        return product(terms)
    if isinstance(pi, Langlands):
        parts = pi.parts
        terms = [_square(t, which).shift(u * 2) for t, u in parts]
        terms += [
            rs(parts[i][0], parts[j][0]).shift(parts[i][1] + parts[j][1])
            for i in range(len(parts))
            for j in range(i + 1, len(parts))
        ]
        return product(terms)
    raise TypeError(f"not a GL representation: {pi!r}")


def sym2(pi) -> LFactor:
    return _square(pi, SdType.ORTHOGONAL)


def wedge2(pi) -> LFactor:
    return _square(pi, SdType.SYMPLECTIC)


def factorization_identity_check(pi) -> bool:
    return rs(pi, pi) == sym2(pi) * wedge2(pi)


def rho_cross_parameter(rho: ScuspSymbol, phi: Parameter) -> LFactor:
    return rs(Cuspidal(rho), tempered_of(phi))


# reducibility points -------------------------------------------------------


@dataclass(frozen=True)
class ReducibilityPoint:
    a_rho: int
    proviso_holds: bool | None = None

    @property
    def exponent(self) -> HalfInt:
        return HalfInt(self.a_rho + 1)


def _opposite_to_dual(rho: ScuspSymbol, dual: BlockType) -> bool:
    if not rho.self_dual:
        return False
    return rho.sd_type.value != dual.value


def reducibility_point(phi: Parameter, rho: ScuspSymbol, full_orthogonal: bool = False) -> ReducibilityPoint:
    require_discrete(phi)
    jord = phi.jord_rho(rho)
    if jord:
        return ReducibilityPoint(max(jord))
    if _opposite_to_dual(rho, phi.group.dual_type):
        return ReducibilityPoint(0)
    if full_orthogonal:
        return ReducibilityPoint(-1)
    fixed_by_theta = phi.group.kind is not Kind.SO_EVEN or not eps0(phi).is_trivial()
    return ReducibilityPoint(-1, rho.dim % 2 == 0 or fixed_by_theta)


def _square_for_group(phi: Parameter):
    return sym2 if phi.group.kind is Kind.SO_ODD else wedge2


def reduction_exponents(phi: Parameter, rho: ScuspSymbol, bound: int = 16) -> list[HalfInt]:
    """Positive half-integers lambda at which the normalizing ratio vanishes,
    read off from the pole structure of the L-factors alone."""
    cross = rho_cross_parameter(rho, phi)
    square = _square_for_group(phi)(Cuspidal(rho))
    out = []
    for d in range(1, 2 * bound + 1):
        lam = HalfInt(d)
        if d > 1:
            hit = cross.has_pole(1 - lam) and not cross.has_pole(-lam)
        else:
            hit = square.has_pole(1 - lam * 2) and not cross.has_pole(-lam)
        if hit:
            out.append(lam)
    return out


def reducibility_from_lfactors(phi: Parameter, rho: ScuspSymbol, bound: int = 16) -> int:
    """a_rho recovered from reduction_exponents; -1 when there is none."""
    lams = reduction_exponents(phi, rho, bound)
    if len(lams) > 1:
        raise ValidationError(f"several reduction points {lams}: parameter has gaps")
    if not lams:
        return -1
    return lams[0].doubled - 1
