"""Symbolic Jacquet functors on GL products, packets and induced symbols."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .core import (
    EpsilonChar,
    HalfInt,
    JordanBlock,
    Kind,
    Level,
    Parameter,
    ScuspSymbol,
    canonical_bar,
    check_epsilon,
    eps0,
    require_discrete,
)
from .errors import NonDiscreteParameter, NonPositiveX, UnsupportedSymbol, ValidationError
from .segments import GenSegment, Segment

# symbols -------------------------------------------------------------------


def _packet_key(phi: Parameter, eps: EpsilonChar, level: Level) -> tuple:
    g = phi.group
    return (
        g.kind.value,
        g.n,
        tuple(g.eta.sorted()),
        tuple((b.rho.label, b.a, m) for b, m in phi.blocks),
        eps.signs,
        level.value,
    )


@dataclass(frozen=True)
class Packet:
    """The member pi(phi, eps) of a discrete or tempered packet."""

    phi: Parameter
    eps: EpsilonChar
    level: Level = Level.SIGMA0

    def __post_init__(self):
        object.__setattr__(self, "level", Level(self.level))
        if not self.phi.is_discrete and (not self.phi.is_tempered_shape() or len(self.phi.doubled()) > 1):
            raise NonDiscreteParameter(f"{self.phi} is neither discrete nor has a single doubled block")
        check_epsilon(self.phi, self.eps)
        if self.level is Level.BAR:
            object.__setattr__(self, "eps", canonical_bar(self.phi, self.eps))

    def key(self) -> tuple:
        return (0,) + _packet_key(self.phi, self.eps, self.level)

    @property
    def rank(self) -> int:
        return self.phi.group.n

    def is_trivial_group(self) -> bool:
        return self.phi.group.n == 0

    def __str__(self):
        tag = "" if self.level is Level.SIGMA0 else "bar "
        return f"pi({tag}{self.phi}, {self.eps})"


def _as_segment(part) -> Segment:
    if isinstance(part, Segment):
        return part
    if isinstance(part, GenSegment):
        m, n = part.shape
        if m == 1:
            return Segment.between(part.rho, part.rows[0][0], part.rows[0][-1])
        if n == 1:
            return Segment.between(part.rho, part.rows[0][0], part.rows[-1][0])
        raise UnsupportedSymbol(f"Jacquet modules of the rectangle {part} are not modelled")
    raise UnsupportedSymbol(f"not a GL symbol: {part!r}")


@dataclass(frozen=True)
class Induced:
    """gl[0] x gl[1] x ... |x inner, with empty segments removed."""

    gl: tuple
    inner: Packet

    def __post_init__(self):
        if isinstance(self.inner, Induced):
            object.__setattr__(self, "gl", tuple(self.gl) + self.inner.gl)
            object.__setattr__(self, "inner", self.inner.inner)
        parts = tuple(s for s in (_as_segment(p) for p in self.gl) if not s.is_empty())
        object.__setattr__(self, "gl", parts)

    def key(self) -> tuple:
        return (1, tuple(s.sort_key() for s in self.gl)) + self.inner.key()

    def canonical(self):
        if not self.gl:
            return self.inner
        return Induced(tuple(sorted(self.gl, key=Segment.sort_key)), self.inner)

    def __str__(self):
        return " x ".join(str(s) for s in self.gl) + f" |x {self.inner}"


def induce(gl, inner):
    """Induced symbol, or the inner packet itself when gl is empty."""
    sym = Induced(tuple(gl), inner)
    return sym if sym.gl else sym.inner


def canonical(sym):
    if isinstance(sym, Induced):
        return sym.canonical()
    if isinstance(sym, tuple):
        return gl_product(sym)
    return sym


def gl_product(parts) -> tuple:
    """Canonical GL product: empty factors dropped, factors sorted."""
    segs = [_as_segment(p) for p in parts]
    return tuple(sorted((s for s in segs if not s.is_empty()), key=Segment.sort_key))


def _sym_key(sym) -> tuple:
    if isinstance(sym, tuple):
        return (2, tuple(s.sort_key() for s in sym))
    return sym.key()


class VirtualSum:
    """Finite Z-linear combination of symbols (semisimplified)."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        counts: Counter = Counter()
        if terms:
            items = terms.items() if isinstance(terms, (dict, Counter)) else terms
            for sym, c in items:
                counts[canonical(sym)] += c
        self._terms = {k: v for k, v in counts.items() if v}

    @classmethod
    def of(cls, sym, coeff: int = 1) -> "VirtualSum":
        return cls([(sym, coeff)])

    @classmethod
    def zero(cls) -> "VirtualSum":
        return cls()

    def __add__(self, other: "VirtualSum") -> "VirtualSum":
        return VirtualSum(list(self._terms.items()) + list(other._terms.items()))

    def scale(self, k: int) -> "VirtualSum":
        return VirtualSum([(s, c * k) for s, c in self._terms.items()])

    def __eq__(self, other):
        return isinstance(other, VirtualSum) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def items(self) -> list:
        return sorted(self._terms.items(), key=lambda kv: _sym_key(kv[0]))

    def coefficient(self, sym) -> int:
        return self._terms.get(canonical(sym), 0)

    def symbols(self) -> list:
        return [s for s, _ in self.items()]

    def __len__(self):
        return len(self._terms)

    def __repr__(self):
        if not self._terms:
            return "VirtualSum(0)"
        return "VirtualSum(" + " + ".join(f"{c}*[{_show(s)}]" for s, c in self.items()) + ")"


def _show(sym) -> str:
    if isinstance(sym, tuple):
        return " x ".join(str(s) for s in sym) if sym else "1"
    return str(sym)


def total(sums) -> VirtualSum:
    out: list = []
    for s in sums:
        out.extend(s.items())
    return VirtualSum(out)


# GL rewrites ---------------------------------------------------------------


def _factors(sym) -> list:
    if isinstance(sym, (Segment, GenSegment)):
        return [_as_segment(sym)]
    return [_as_segment(p) for p in sym]


def _leading(seg: Segment, x: HalfInt, rho: ScuspSymbol) -> bool:
    return not seg.is_empty() and seg.rho == rho and seg.start == x


def _trailing(seg: Segment, x: HalfInt, rho: ScuspSymbol) -> bool:
    return not seg.is_empty() and rho.dual_label == seg.rho.label and seg.end == x


def _leibniz(factors: list, hit, rewrite) -> list:
    out = []
    for i, f in enumerate(factors):
        if hit(f):
            out.append(tuple(factors[:i]) + (rewrite(f),) + tuple(factors[i + 1:]))
    return out


def jac_gl(x, rho: ScuspSymbol, sym) -> VirtualSum:
    x = HalfInt.of(x)
    factors = _factors(sym)
    terms = _leibniz(factors, lambda f: _leading(f, x, rho), Segment.drop_first)
    return VirtualSum((gl_product(t), 1) for t in terms)


def jac_op_gl(x, rho: ScuspSymbol, sym) -> VirtualSum:
    x = HalfInt.of(x)
    factors = _factors(sym)
    terms = _leibniz(factors, lambda f: _trailing(f, x, rho), Segment.drop_last)
    return VirtualSum((gl_product(t), 1) for t in terms)


def jac_theta(x, rho: ScuspSymbol, sym) -> VirtualSum:
    """Jac_x composed after Jac^op_{-x}."""
    x = HalfInt.of(x)
    out: list = []
    for prod, c in jac_op_gl(-x, rho, sym).items():
        out.extend((p, c * d) for p, d in jac_gl(x, rho, prod).items())
    return VirtualSum(out)


def gl_of_parameter(phi: Parameter) -> tuple:
    """pi_phi as a product of Steinberg segments."""
    parts = []
    for b, m in phi.blocks:
        parts.extend([Segment.steinberg(b.rho, b.a)] * m)
    return gl_product(parts)


# packets -------------------------------------------------------------------


def minus_parameter(phi: Parameter, rho: ScuspSymbol, x) -> Parameter | None:
    """phi_- : replace (rho, 2x+1) by (rho, 2x-1); None when undefined."""
    x = HalfInt.of(x)
    if x.doubled <= 0:
        return None
    a = x.doubled + 1
    top = JordanBlock(rho, a)
    m = phi.mult(top)
    if m == 0:
        return None
    blocks = [(b, k) for b, k in phi.blocks if b != top]
    if m > 1:
        blocks.append((top, m - 1))
    if a - 2 > 0:
        blocks.append((JordanBlock(rho, a - 2), 1))
    return Parameter(phi.group.with_rank(phi.group.n - rho.dim), blocks)


def _packet_step(x: HalfInt, rho: ScuspSymbol, pi: Packet):
    """Shared Jacquet rule for discrete and doubled-block packets."""
    phi, eps = pi.phi, pi.eps
    a = x.doubled + 1
    top = JordanBlock(rho, a)
    m_top = phi.mult(top)
    if m_top == 0:
        return None
    if m_top > 1:
        raise NonDiscreteParameter(f"Jacquet step on the doubled block {top} is not modelled")
    phi_minus = minus_parameter(phi, rho, x)
    if a == 2:
        if eps[top] != 1:
            return None
        new_eps = eps.restrict(phi_minus.jord)
    else:
        low = JordanBlock(rho, a - 2)
        m_low = phi.mult(low)
        if m_low == 0:
            new_eps = eps.restrict([b for b in phi.jord if b != top]).replace({low: eps[top]})
        elif m_low == 1:
            if eps[top] * eps[low] != 1:
                return None
            new_eps = eps.restrict(phi_minus.jord)
        else:
            raise NonDiscreteParameter(f"Jacquet step would triple the block {low}")
    return Packet(phi_minus, new_eps, pi.level)


def jac_packet(x, rho: ScuspSymbol, pi: Packet):
    """Jac_x of a discrete-series packet member; returns a Packet or None (zero)."""
    x = HalfInt.of(x)
    if x.doubled <= 0:
        raise NonPositiveX(f"x = {x} must be positive")
    require_discrete(pi.phi)
    return _packet_step(x, rho, pi)


def _jac_any_packet(x: HalfInt, rho: ScuspSymbol, pi: Packet):
    if x.doubled < 0:
        return None
    if x.doubled == 0:
        if pi.phi.mult(JordanBlock(rho, 1)) > 1:
            raise NonDiscreteParameter("Jac_0 on a doubled (rho,1) block is not modelled")
        return None
    return _packet_step(x, rho, pi)


def jac_induced(x, rho: ScuspSymbol, sym: Induced) -> VirtualSum:
    x = HalfInt.of(x)
    gl = list(sym.gl)
    out: list = []
    for t in _leibniz(gl, lambda f: _leading(f, x, rho), Segment.drop_first):
        out.append((induce(t, sym.inner), 1))
    for t in _leibniz(gl, lambda f: _trailing(f, -x, rho), Segment.drop_last):
        out.append((induce(t, sym.inner), 1))
    inner = _jac_any_packet(x, rho, sym.inner)
    if inner is not None:
        out.append((induce(gl, inner), 1))
    return VirtualSum(out)


@lru_cache(maxsize=200_000)
def _jac_symbol(x: HalfInt, rho: ScuspSymbol, sym) -> VirtualSum:
    if isinstance(sym, Packet):
        res = _jac_any_packet(x, rho, sym)
        return VirtualSum.zero() if res is None else VirtualSum.of(res)
    if isinstance(sym, Induced):
        return jac_induced(x, rho, sym)
    if isinstance(sym, tuple):
        return jac_gl(x, rho, sym)
    raise ValidationError(f"cannot apply Jacquet functor to {sym!r}")


def jac(x, rho: ScuspSymbol, target) -> VirtualSum:
    """Jac_x applied to a symbol or, linearly, to a VirtualSum."""
    x = HalfInt.of(x)
    if isinstance(target, VirtualSum):
        out: list = []
        for sym, c in target.items():
            out.extend((s, c * d) for s, d in _jac_symbol(x, rho, sym).items())
        return VirtualSum(out)
    return _jac_symbol(x, rho, canonical(target))


def jac_sequence(xs, rho: ScuspSymbol, target) -> VirtualSum:
    """Jac_{x_s} o ... o Jac_{x_1}, applying xs from left to right."""
    current = target if isinstance(target, VirtualSum) else VirtualSum.of(target)
    for x in xs:
        current = jac(x, rho, current)
        if current.is_zero():
            break
    return current


def restrict_to_bar(vsum: VirtualSum) -> VirtualSum:
    """Map sigma0-level packets to bar-level classes.

    For SOeven parameters with trivial eps0 the restriction splits into
    two theta0-conjugates with one common class, giving coefficient 2.
    """
    out: list = []
    for sym, c in vsum.items():
        packet = sym.inner if isinstance(sym, Induced) else sym
        if not isinstance(packet, Packet) or packet.level is not Level.SIGMA0:
            raise ValidationError("restrict_to_bar expects sigma0-level packet symbols")
        phi = packet.phi
        k = 2 if phi.group.kind is Kind.SO_EVEN and eps0(phi).is_trivial() else 1
        bar = Packet(phi, packet.eps, Level.BAR)
        out.append((induce(sym.gl, bar) if isinstance(sym, Induced) else bar, c * k))
    return VirtualSum(out)


# special even orthogonal tables ---------------------------------------------


@dataclass(frozen=True)
class Twisted:
    """Abstract classical-group symbol with a theta0 marker."""

    name: str
    theta: bool = False

    def twist(self) -> "Twisted":
        return Twisted(self.name, not self.theta)


def so_even_jac_table(x, rho: ScuspSymbol, tau, inner_rank: int, inner: Twisted, inner_jac) -> Counter:
    """Group-level Jac_x(tau |x inner) for SO(2n) with inner of rank n.

    inner_jac(x, sym) returns abstract names for Jac_x of a Twisted symbol.
    Terms are (gl_product, Twisted) pairs; the trivial group is named '1'.
    """
    x = HalfInt.of(x)
    tau = _factors(tau)
    d = sum(s.length * s.rho.dim for s in tau)
    lead = [gl_product(t) for t in _leibniz(tau, lambda f: _leading(f, x, rho), Segment.drop_first)]
    trail = [gl_product(t) for t in _leibniz(tau, lambda f: _trailing(f, -x, rho), Segment.drop_last)]
    odd = rho.dim % 2 == 1
    out: Counter = Counter()
    n, d_rho = inner_rank, rho.dim
    if n == 0 and d == d_rho:
        for t in lead:
            out[(t, inner)] += 1
        if not odd:
            for t in trail:
                out[(t, inner)] += 1
        return out
    if n == 0:
        for t in lead:
            out[(t, inner)] += 1
        for t in trail:
            out[(t, inner.twist() if odd else inner)] += 1
        return out
    for j in inner_jac(x, inner):
        out[(gl_product(tau), j)] += 1
    if n == d_rho:
        for j in inner_jac(x, inner.twist()):
            out[(gl_product(tau), j.twist())] += 1
    for t in lead:
        out[(t, inner)] += 1
    for t in trail:
        out[(t, inner.twist() if odd else inner)] += 1
    return out


def collapse_theta(terms: Counter) -> Counter:
    """Forget theta0 markers (passage to bar-level classes)."""
    out: Counter = Counter()
    for (gl, sym), c in terms.items():
        out[(gl, sym.name)] += c
    return out


def unified_bar_formula(x, rho: ScuspSymbol, tau, inner_rank: int, inner: Twisted, inner_jac) -> Counter:
    """Right-hand side of the combined bar-Jac formula, bar-level classes."""
    x = HalfInt.of(x)
    factors = _factors(tau)
    out: Counter = Counter()
    for t in _leibniz(factors, lambda f: _leading(f, x, rho), Segment.drop_first):
        out[(gl_product(t), inner.name)] += 1
    for t in _leibniz(factors, lambda f: _trailing(f, -x, rho), Segment.drop_last):
        out[(gl_product(t), inner.name)] += 1
    if inner_rank > 0:
        bar = list(inner_jac(x, inner))
        if inner_rank == rho.dim:
            bar += list(inner_jac(x, inner.twist()))
        for j in bar:
            out[(gl_product(factors), j.name)] += 1
    return out
