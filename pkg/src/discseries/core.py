"""Exact base types: half-integers, quadratic characters, supercuspidal
symbols, Jordan blocks, parameters and their epsilon-characters."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable

from .errors import (
    DeterminantMismatch,
    DimensionMismatch,
    InvalidEpsilon,
    NonDiscreteParameter,
    NotSelfDual,
    ValidationError,
)


@dataclass(frozen=True, order=True)
class HalfInt:
    """An element of (1/2)Z, stored as twice its value."""

    doubled: int

    @classmethod
    def of(cls, value) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a half-integer")
        if isinstance(value, int):
            return cls(2 * value)
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, Fraction):
            twice = 2 * value
            if twice.denominator != 1:
                raise ValueError(f"{value} is not a half-integer")
            return cls(int(twice))
        raise TypeError(f"cannot convert {value!r} to HalfInt")

    @classmethod
    def half(cls, numerator: int) -> "HalfInt":
        """numerator/2"""
        return cls(numerator)

    def is_integer(self) -> bool:
        return self.doubled % 2 == 0

    def to_fraction(self) -> Fraction:
        return Fraction(self.doubled, 2)

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return HalfInt(self.doubled + other.doubled)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return HalfInt(self.doubled - other.doubled)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return HalfInt(other.doubled - self.doubled)

    def __neg__(self):
        return HalfInt(-self.doubled)

    def __abs__(self):
        return HalfInt(abs(self.doubled))

    def __mul__(self, k):
        if isinstance(k, int) and not isinstance(k, bool):
            return HalfInt(self.doubled * k)
        return NotImplemented

    __rmul__ = __mul__

    def __str__(self):
        if self.doubled % 2 == 0:
            return str(self.doubled // 2)
        return f"{self.doubled}/2"

    def __repr__(self):
        return f"HalfInt({self})"


def _coerce(value):
    if isinstance(value, HalfInt):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return HalfInt(2 * value)
    return None


@dataclass(frozen=True)
class QuadChar:
    """Element of an elementary abelian 2-group given by generator labels."""

    generators: frozenset = frozenset()

    @classmethod
    def of(cls, labels: Iterable[str] = ()) -> "QuadChar":
        out: frozenset = frozenset()
        for label in labels:
            out = out ^ {label}
        return cls(frozenset(out))

    def __mul__(self, other: "QuadChar") -> "QuadChar":
        return QuadChar(self.generators ^ other.generators)

    def is_trivial(self) -> bool:
        return not self.generators

    def sorted(self) -> list[str]:
        return sorted(self.generators)

    def __str__(self):
        return "*".join(self.sorted()) if self.generators else "1"


TRIVIAL = QuadChar()


class SdType(str, Enum):
    ORTHOGONAL = "orthogonal"
    SYMPLECTIC = "symplectic"
    NONE = "none"

    def opposite(self) -> "SdType":
        if self is SdType.ORTHOGONAL:
            return SdType.SYMPLECTIC
        if self is SdType.SYMPLECTIC:
            return SdType.ORTHOGONAL
        return SdType.NONE


@dataclass(frozen=True)
class ScuspSymbol:
    """A formal unitary supercuspidal representation of GL(dim)."""

    label: str
    dim: int
    self_dual: bool
    sd_type: SdType
    central_char: QuadChar = TRIVIAL
    torsion: int = 1
    dual_label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "sd_type", SdType(self.sd_type))
        if not isinstance(self.central_char, QuadChar):
            object.__setattr__(self, "central_char", QuadChar.of(self.central_char))
        if self.dim < 1 or self.torsion < 1:
            raise ValidationError(f"{self.label}: dim and torsion must be positive")
        if (self.sd_type is SdType.NONE) == self.self_dual:
            raise ValidationError(f"{self.label}: sd_type must be 'none' exactly when not self-dual")
        if self.sd_type is SdType.SYMPLECTIC and self.dim % 2:
            raise ValidationError(f"{self.label}: symplectic type needs even dimension")
        if self.dim == 1 and self.self_dual and self.sd_type is not SdType.ORTHOGONAL:
            raise ValidationError(f"{self.label}: a self-dual character is orthogonal")
        if self.self_dual:
            if self.dual_label not in (None, self.label):
                raise ValidationError(f"{self.label}: self-dual symbol with a different dual")
            object.__setattr__(self, "dual_label", self.label)

    def is_dual_of(self, other: "ScuspSymbol") -> bool:
        return self.dual_label is not None and self.dual_label == other.label

    def __str__(self):
        return self.label


class BlockType(str, Enum):
    ORTHOGONAL = "orthogonal"
    SYMPLECTIC = "symplectic"


@dataclass(frozen=True)
class JordanBlock:
    rho: ScuspSymbol
    a: int

    def __post_init__(self):
        if self.a < 1:
            raise ValidationError(f"block ({self.rho.label},{self.a}) needs a >= 1")

    @property
    def key(self) -> tuple[str, int]:
        return (self.rho.label, self.a)

    @property
    def dim(self) -> int:
        return self.a * self.rho.dim

    @property
    def central_char(self) -> QuadChar:
        return self.rho.central_char if self.a % 2 else TRIVIAL

    def __lt__(self, other: "JordanBlock"):
        return self.key < other.key

    def __str__(self):
        return f"({self.rho.label},{self.a})"


def block_type(b: JordanBlock) -> BlockType:
    if not b.rho.self_dual:
        raise NotSelfDual(f"{b.rho.label} is not self-dual")
    orth = b.rho.sd_type is SdType.ORTHOGONAL
    if orth == (b.a % 2 == 1):
        return BlockType.ORTHOGONAL
    return BlockType.SYMPLECTIC


class Kind(str, Enum):
    SP = "Sp"
    SO_ODD = "SOodd"
    SO_EVEN = "SOeven"


@dataclass(frozen=True)
class GroupType:
    kind: Kind
    n: int
    eta: QuadChar = TRIVIAL

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if not isinstance(self.eta, QuadChar):
            object.__setattr__(self, "eta", QuadChar.of(self.eta))
        if self.n < 0:
            raise ValidationError("rank must be nonnegative")
        if self.kind is not Kind.SO_EVEN and not self.eta.is_trivial():
            raise ValidationError("eta is only meaningful for SOeven")

    @property
    def N(self) -> int:
        return 2 * self.n + 1 if self.kind is Kind.SP else 2 * self.n

    @property
    def dual_type(self) -> BlockType:
        return BlockType.SYMPLECTIC if self.kind is Kind.SO_ODD else BlockType.ORTHOGONAL

    def with_rank(self, n: int) -> "GroupType":
        return GroupType(self.kind, n, self.eta)

    @staticmethod
    def rank_for(kind: Kind, N: int) -> int:
        kind = Kind(kind)
        if kind is Kind.SP:
            if N % 2 == 0:
                raise DimensionMismatch(f"Sp needs odd N, got {N}")
            return (N - 1) // 2
        if N % 2:
            raise DimensionMismatch(f"{kind.value} needs even N, got {N}")
        return N // 2

    def __str__(self):
        name = {Kind.SP: "Sp", Kind.SO_ODD: "SO", Kind.SO_EVEN: "SO"}[self.kind]
        if self.kind is Kind.SP:
            return f"Sp({2 * self.n})"
        if self.kind is Kind.SO_ODD:
            return f"SO({2 * self.n + 1})"
        return f"{name}({2 * self.n},{self.eta})"


def _normalize_blocks(blocks) -> tuple:
    counts: dict = {}
    for item in blocks:
        if isinstance(item, JordanBlock):
            block, mult = item, 1
        else:
            block, mult = item
        if mult < 1:
            raise ValidationError(f"multiplicity of {block} must be positive")
        if block.key in counts and counts[block.key][0] != block:
            raise ValidationError(f"two different symbols share the label {block.rho.label}")
        prev = counts.get(block.key, (block, 0))[1]
        counts[block.key] = (block, prev + mult)
    return tuple(counts[k] for k in sorted(counts))


@dataclass(frozen=True)
class Parameter:
    """A group together with a multiset of Jordan blocks."""

    group: GroupType
    blocks: tuple

    def __post_init__(self):
        object.__setattr__(self, "blocks", _normalize_blocks(self.blocks))
        total = self.block_dim()
        if total != self.group.N:
            raise DimensionMismatch(f"blocks have total dimension {total}, {self.group} needs {self.group.N}")
        if self.group.kind is Kind.SO_EVEN:
            det = TRIVIAL
            for b, m in self.blocks:
                if m % 2:
                    det = det * b.central_char
            if det != self.group.eta:
                raise DeterminantMismatch(f"determinant {det} differs from eta {self.group.eta}")

    @classmethod
    def unchecked(cls, group: GroupType, blocks) -> "Parameter":
        """Build without the dimension/determinant checks (fuzzing only)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "group", group)
        object.__setattr__(obj, "blocks", _normalize_blocks(blocks))
        return obj

    @classmethod
    def over(cls, kind, blocks, eta: QuadChar = TRIVIAL) -> "Parameter":
        """Infer the rank from the block dimensions."""
        blocks = _normalize_blocks(blocks)
        N = sum(b.dim * m for b, m in blocks)
        return cls(GroupType(kind, GroupType.rank_for(kind, N), eta), blocks)

    def block_dim(self) -> int:
        return sum(b.dim * m for b, m in self.blocks)

    @property
    def jord(self) -> tuple:
        return tuple(b for b, _ in self.blocks)

    def mult(self, block: JordanBlock) -> int:
        for b, m in self.blocks:
            if b == block:
                return m
        return 0

    def contains(self, rho: ScuspSymbol, a: int) -> bool:
        return any(b.rho == rho and b.a == a for b, _ in self.blocks)

    def jord_rho(self, rho: ScuspSymbol) -> list[int]:
        return [b.a for b, _ in self.blocks if b.rho == rho]

    def rhos(self) -> list[ScuspSymbol]:
        seen: dict = {}
        for b, _ in self.blocks:
            seen.setdefault(b.rho.label, b.rho)
        return [seen[k] for k in sorted(seen)]

    @property
    def is_discrete(self) -> bool:
        dual = self.group.dual_type
        for b, m in self.blocks:
            if m != 1 or not b.rho.self_dual or block_type(b) is not dual:
                return False
        return True

    def is_tempered_shape(self) -> bool:
        """Self-dual, type-correct blocks with multiplicities at most two."""
        dual = self.group.dual_type
        return all(
            m <= 2 and b.rho.self_dual and block_type(b) is dual for b, m in self.blocks
        )

    def doubled(self) -> tuple:
        return tuple(b for b, m in self.blocks if m == 2)

    def __str__(self):
        parts = [str(b) if m == 1 else f"{m}{b}" for b, m in self.blocks]
        return f"{self.group}:{{{', '.join(parts)}}}"


def require_discrete(phi: Parameter) -> None:
    if not phi.is_discrete:
        raise NonDiscreteParameter(f"{phi} is not discrete")


@dataclass(frozen=True)
class EpsilonChar:
    """Sign function on the distinct blocks of a parameter."""

    values: tuple

    def __post_init__(self):
        vals = tuple(sorted(((b, int(v)) for b, v in self.values), key=lambda p: p[0].key))
        for _, v in vals:
            if v not in (1, -1):
                raise InvalidEpsilon(f"epsilon values must be +-1, got {v}")
        if len({b.key for b, _ in vals}) != len(vals):
            raise InvalidEpsilon("epsilon assigns a block twice")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_signs(cls, blocks, signs) -> "EpsilonChar":
        blocks = list(blocks)
        signs = list(signs)
        if len(blocks) != len(signs):
            raise InvalidEpsilon(f"expected {len(blocks)} signs, got {len(signs)}")
        return cls(tuple(zip(blocks, signs)))

    @classmethod
    def trivial(cls, blocks) -> "EpsilonChar":
        return cls(tuple((b, 1) for b in blocks))

    @property
    def blocks(self) -> tuple:
        return tuple(b for b, _ in self.values)

    @property
    def signs(self) -> tuple:
        return tuple(v for _, v in self.values)

    def __getitem__(self, block: JordanBlock) -> int:
        for b, v in self.values:
            if b == block:
                return v
        raise KeyError(str(block))

    def get(self, rho: ScuspSymbol, a: int) -> int:
        return self[JordanBlock(rho, a)]

    def __mul__(self, other: "EpsilonChar") -> "EpsilonChar":
        if self.blocks != other.blocks:
            raise InvalidEpsilon("characters live on different block sets")
        return EpsilonChar(tuple((b, v * w) for (b, v), (_, w) in zip(self.values, other.values)))

    def product(self) -> int:
        out = 1
        for v in self.signs:
            out *= v
        return out

    def restrict(self, blocks) -> "EpsilonChar":
        keep = {b.key for b in blocks}
        return EpsilonChar(tuple((b, v) for b, v in self.values if b.key in keep))

    def replace(self, mapping: dict) -> "EpsilonChar":
        """Return a copy with selected values changed or blocks added."""
        current = {b.key: (b, v) for b, v in self.values}
        for b, v in mapping.items():
            current[b.key] = (b, v)
        return EpsilonChar(tuple(current.values()))

    def is_trivial(self) -> bool:
        return all(v == 1 for v in self.signs)

    def __str__(self):
        return "(" + ",".join("+" if v > 0 else "-" for v in self.signs) + ")"


class Level(str, Enum):
    SIGMA0 = "sigma0"
    BAR = "bar"


@dataclass(frozen=True)
class ComponentGroupInfo:
    rank_sigma0: int
    sigma_index: int
    eps0_trivial: bool


def eps0(phi: Parameter) -> EpsilonChar:
    if phi.group.kind is not Kind.SO_EVEN:
        return EpsilonChar.trivial(phi.jord)
    return EpsilonChar(tuple((b, -1 if b.dim % 2 else 1) for b in phi.jord))


def component_group(phi: Parameter) -> ComponentGroupInfo:
    require_discrete(phi)
    trivial = eps0(phi).is_trivial()
    return ComponentGroupInfo(len(phi.jord), 1 if trivial else 2, trivial)


def _constrained(phi: Parameter) -> list:
    """Blocks whose signs enter the product constraint."""
    if any(m > 2 for _, m in phi.blocks):
        raise NonDiscreteParameter(f"{phi}: multiplicity above two is not supported")
    return [b for b, m in phi.blocks if m == 1]


def is_valid_epsilon(phi: Parameter, eps: EpsilonChar) -> bool:
    if eps.blocks != phi.jord:
        return False
    constrained = {b.key for b in _constrained(phi)}
    prod = 1
    for b, v in eps.values:
        if b.key in constrained:
            prod *= v
    return prod == 1


def check_epsilon(phi: Parameter, eps: EpsilonChar) -> None:
    if eps.blocks != phi.jord:
        raise InvalidEpsilon(f"epsilon blocks {[str(b) for b in eps.blocks]} differ from Jord of {phi}")
    if not is_valid_epsilon(phi, eps):
        raise InvalidEpsilon(f"epsilon {eps} violates the product constraint for {phi}")


def canonical_bar(phi: Parameter, eps: EpsilonChar) -> EpsilonChar:
    """Representative of eps modulo eps0 with +1 on the first odd-dimensional block."""
    e0 = eps0(phi)
    if e0.is_trivial():
        return eps
    first = next(b for b, v in e0.values if v == -1)
    return eps if eps[first] == 1 else eps * e0


def packet_characters(phi: Parameter, level: Level = Level.SIGMA0) -> list[EpsilonChar]:
    """All characters for a discrete parameter or a tempered one with doubled blocks."""
    level = Level(level)
    if not phi.is_tempered_shape():
        raise NonDiscreteParameter(f"{phi} is neither discrete nor of tempered shape")
    blocks = phi.jord
    out = []
    for signs in itertools.product((1, -1), repeat=len(blocks)):
        eps = EpsilonChar.from_signs(blocks, signs)
        if not is_valid_epsilon(phi, eps):
            continue
        if level is Level.BAR and canonical_bar(phi, eps) != eps:
            continue
        out.append(eps)
    return out


def epsilon_characters(phi: Parameter, level: Level = Level.SIGMA0) -> list[EpsilonChar]:
    require_discrete(phi)
    return packet_characters(phi, level)


def parse_signs(text: str) -> list[int]:
    """Parse '+,-,-' or '1,-1,-1' into a sign list."""
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok in ("+", "+1", "1"):
            out.append(1)
        elif tok in ("-", "-1"):
            out.append(-1)
        elif tok:
            raise InvalidEpsilon(f"bad sign {tok!r}")
    return out
