"""Segments, generalized segments and the linking predicates."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import HalfInt, ScuspSymbol
from .errors import InvalidSegment, MixedMonotonicity


@dataclass(frozen=True)
class Segment:
    """Arithmetic progression start, start+step, ... of the given length.

    Length-one segments always carry step -1 and the empty segment is
    normalized to start 0, so equal progressions compare equal.
    """

    rho: ScuspSymbol
    start: HalfInt
    length: int
    step: int = -1

    def __post_init__(self):
        if self.length < 0 or self.step not in (1, -1):
            raise InvalidSegment("bad segment shape")
        if self.length <= 1:
            object.__setattr__(self, "step", -1)
        if self.length == 0:
            object.__setattr__(self, "start", HalfInt(0))

    @classmethod
    def between(cls, rho: ScuspSymbol, first, last) -> "Segment":
        first, last = HalfInt.of(first), HalfInt.of(last)
        diff = last.doubled - first.doubled
        if diff % 2:
            raise InvalidSegment(f"endpoints {first} and {last} differ by a non-integer")
        return cls(rho, first, abs(diff) // 2 + 1, -1 if diff <= 0 else 1)

    @classmethod
    def descending(cls, rho: ScuspSymbol, first, last) -> "Segment":
        """<first, first-1, ..., last>; empty when last = first + 1."""
        first, last = HalfInt.of(first), HalfInt.of(last)
        diff = first.doubled - last.doubled
        if diff % 2 or diff < -2:
            raise InvalidSegment(f"no descending segment from {first} to {last}")
        return cls(rho, first, diff // 2 + 1, -1)

    @classmethod
    def empty(cls, rho: ScuspSymbol) -> "Segment":
        return cls(rho, HalfInt(0), 0)

    @classmethod
    def steinberg(cls, rho: ScuspSymbol, a: int, shift=0) -> "Segment":
        shift = HalfInt.of(shift)
        return cls(rho, HalfInt(a - 1) + shift, a, -1)

    @property
    def end(self) -> HalfInt:
        return self.start + self.step * (self.length - 1)

    def is_empty(self) -> bool:
        return self.length == 0

    def elements(self) -> list[HalfInt]:
        return [self.start + self.step * i for i in range(self.length)]

    def doubled_set(self) -> frozenset:
        return frozenset(x.doubled for x in self.elements())

    def shift(self, s) -> "Segment":
        if self.is_empty():
            return self
        return Segment(self.rho, self.start + HalfInt.of(s), self.length, self.step)

    def drop_first(self) -> "Segment":
        if self.length <= 1:
            return Segment.empty(self.rho)
        return Segment(self.rho, self.start + self.step, self.length - 1, self.step)

    def drop_last(self) -> "Segment":
        if self.length <= 1:
            return Segment.empty(self.rho)
        return Segment(self.rho, self.start, self.length - 1, self.step)

    def sort_key(self):
        return (self.rho.label, -self.start.doubled, self.length, self.step)

    def __str__(self):
        if self.is_empty():
            return f"<{self.rho.label}:>"
        if self.length == 1:
            return f"<{self.rho.label}:{self.start}>"
        return f"<{self.rho.label}:{self.start}..{self.end}>"


def _direction(seg: Segment) -> int:
    return 0 if seg.length <= 1 else seg.step


def _sets_linked(a: frozenset, b: frozenset) -> bool:
    if not a or not b or a <= b or b <= a:
        return False
    union = sorted(a | b)
    return all(y - x == 2 for x, y in zip(union, union[1:]))


def is_linked(s1: Segment, s2: Segment) -> bool:
    if _direction(s1) * _direction(s2) < 0:
        raise MixedMonotonicity(f"{s1} and {s2} run in opposite directions")
    return _sets_linked(s1.doubled_set(), s2.doubled_set())


def product_reducible(s1: Segment, s2: Segment) -> bool:
    linked = is_linked(s1, s2)
    return s1.rho == s2.rho and linked


@dataclass(frozen=True)
class GenSegment:
    """Rectangular grid of exponents with monotone rows and columns."""

    rho: ScuspSymbol
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(HalfInt.of(x) for x in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows or not rows[0] or any(len(r) != len(rows[0]) for r in rows):
            raise InvalidSegment("generalized segment must be a nonempty rectangle")
        m, n = len(rows), len(rows[0])
        row_step = (rows[0][1] - rows[0][0]).doubled // 2 if n > 1 else 0
        col_step = (rows[1][0] - rows[0][0]).doubled // 2 if m > 1 else 0
        if n > 1 and row_step not in (1, -1):
            raise InvalidSegment("rows must have step +-1")
        if m > 1 and col_step not in (1, -1):
            raise InvalidSegment("columns must have step +-1")
        if n > 1 and m > 1 and row_step != -col_step:
            raise InvalidSegment("rows and columns must have opposite monotonicity")
        x11 = rows[0][0]
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                if x != x11 + j * row_step + i * col_step:
                    raise InvalidSegment("entries are not an arithmetic grid")

    @classmethod
    def from_segment(cls, seg: Segment) -> "GenSegment":
        if seg.is_empty():
            raise InvalidSegment("empty segment has no grid")
        return cls(seg.rho, (tuple(seg.elements()),))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    @property
    def kind(self) -> int:
        """Row direction: -1 decreasing rows, +1 increasing rows, 0 for 1x1."""
        m, n = self.shape
        if n > 1:
            return (self.rows[0][1] - self.rows[0][0]).doubled // 2
        if m > 1:
            return -((self.rows[1][0] - self.rows[0][0]).doubled // 2)
        return 0

    def transpose(self) -> "GenSegment":
        return GenSegment(self.rho, tuple(zip(*self.rows)))

    def shift(self, s) -> "GenSegment":
        s = HalfInt.of(s)
        return GenSegment(self.rho, tuple(tuple(x + s for x in row) for row in self.rows))

    def corner(self, i: int, j: int) -> HalfInt:
        return self.rows[i][j]

    def sides(self) -> tuple:
        """Top, bottom, left and right sides as doubled-value sets."""
        top = frozenset(x.doubled for x in self.rows[0])
        bottom = frozenset(x.doubled for x in self.rows[-1])
        left = frozenset(r[0].doubled for r in self.rows)
        right = frozenset(r[-1].doubled for r in self.rows)
        return top, bottom, left, right

    def diagonal(self) -> Segment:
        return Segment.between(self.rho, self.rows[-1][0], self.rows[0][-1])

    def __str__(self):
        body = "|".join(",".join(str(x) for x in row) for row in self.rows)
        return f"<{self.rho.label}:[{body}]>"


def gen_is_linked(g1: GenSegment, g2: GenSegment) -> bool:
    if g1.kind * g2.kind < 0:
        g1 = g1.transpose()
    if not is_linked(g1.diagonal(), g2.diagonal()):
        return False
    for a, b in zip(g1.sides(), g2.sides()):
        if a <= b or b <= a:
            return False
    return True


def gen_product_irreducible(g1: GenSegment, g2: GenSegment) -> bool:
    """Irreducibility guaranteed when True; False means possibly reducible."""
    return not (g1.rho == g2.rho and gen_is_linked(g1, g2))


def speh_matrix(rho: ScuspSymbol, a: int, b: int) -> GenSegment:
    if a < 1 or b < 1:
        raise InvalidSegment("a and b must be positive")
    rows = []
    for i in range(b):
        first = HalfInt(a - b) + i
        rows.append(tuple(first - j for j in range(a)))
    return GenSegment(rho, tuple(rows))


def speh_pair_reducible(rho, a, b, rho2, a2, b2, s) -> bool:
    s = HalfInt.of(s)
    if rho != rho2:
        return False
    if not (HalfInt(a + b + a2 + b2) + s).is_integer():
        return False
    lower = abs(a - a2) + abs(b - b2)  # doubled form of |(a-a')/2| + |(b-b')/2|
    upper = abs(a + a2 + b + b2) - 2
    return lower < abs(s.doubled) <= upper


_SEG_RE = re.compile(r"^<\s*([^:<>]+?)\s*:\s*(.*?)\s*>$")


def parse_gl_symbol(text: str, lookup) -> Segment | GenSegment:
    """Parse '<rho:2..-1>', '<rho:3>', '<rho:>' or '<rho:[0,-1|1,0]>'."""
    m = _SEG_RE.match(text.strip())
    if not m:
        raise InvalidSegment(f"cannot parse GL symbol {text!r}")
    label, body = m.group(1), m.group(2)
    if label not in lookup:
        raise InvalidSegment(f"unknown symbol {label!r}")
    rho = lookup[label]
    if not body:
        return Segment.empty(rho)
    if body.startswith("["):
        if not body.endswith("]"):
            raise InvalidSegment(f"unterminated grid in {text!r}")
        rows = [tuple(HalfInt.of(x) for x in r.split(",")) for r in body[1:-1].split("|")]
        return GenSegment(rho, tuple(rows))
    if ".." in body:
        first, last = body.split("..", 1)
        return Segment.between(rho, HalfInt.of(first), HalfInt.of(last))
    return Segment(rho, HalfInt.of(body), 1)
