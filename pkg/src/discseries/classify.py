"""Cuspidal support, admissible triples and the bijection with (phi, eps)."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache

from .core import (
    EpsilonChar,
    GroupType,
    HalfInt,
    JordanBlock,
    Level,
    Parameter,
    ScuspSymbol,
    block_type,
    check_epsilon,
    epsilon_characters,
    require_discrete,
)
from .errors import InconsistentDelta, NotAdmissible, ValidationError
from .jacquet import Induced, Packet, _packet_step, jac, jac_packet, VirtualSum
from .segments import Segment

# supercuspidal criterion ----------------------------------------------------


def is_supercuspidal(phi: Parameter, eps: EpsilonChar) -> bool:
    require_discrete(phi)
    check_epsilon(phi, eps)
    for b in phi.jord:
        a = b.a
        if a > 2:
            low = JordanBlock(b.rho, a - 2)
            if phi.mult(low) == 0 or eps[b] * eps[low] != -1:
                return False
        if a == 2 and eps[b] != -1:
            return False
    return True


# one reduction step ---------------------------------------------------------


@dataclass(frozen=True)
class ReductionStep:
    rho: ScuspSymbol
    x: HalfInt
    block: JordanBlock
    case: int  # 1 identification, 2 doubling, 3 removal of (rho,2)
    phi: Parameter
    eps: EpsilonChar

    @property
    def emitted(self) -> tuple:
        return (self.rho, self.x)

    @property
    def next(self) -> tuple:
        return (self.phi, self.eps)


def _step_at(phi: Parameter, eps: EpsilonChar, b: JordanBlock) -> ReductionStep | None:
    if b.a < 2:
        return None
    x = HalfInt(b.a - 1)
    res = _packet_step(x, b.rho, Packet(phi, eps))
    if res is None:
        return None
    if b.a == 2:
        case = 3
    elif phi.mult(JordanBlock(b.rho, b.a - 2)):
        case = 2
    else:
        case = 1
    return ReductionStep(b.rho, x, b, case, res.phi, res.eps)


def reducible_blocks(phi: Parameter, eps: EpsilonChar) -> list:
    """Blocks (rho, a) whose Jacquet step at x = (a-1)/2 is nonzero."""
    return [b for b in phi.jord if _step_at(phi, eps, b) is not None]


def reduce_once(phi: Parameter, eps: EpsilonChar, prefer: JordanBlock | None = None):
    """One Jacquet step; None iff (phi, eps) is supercuspidal.

    The block is `prefer` when it admits a step, otherwise the largest a
    with ties broken by label.
    """
    require_discrete(phi)
    check_epsilon(phi, eps)
    if prefer is not None:
        step = _step_at(phi, eps, prefer) if phi.mult(prefer) else None
        if step is not None:
            return step
    cands = reducible_blocks(phi, eps)
    if not cands:
        return None
    best = min(cands, key=lambda b: (-b.a, b.rho.label))
    return _step_at(phi, eps, best)


# cuspidal support ------------------------------------------------------------


@dataclass(frozen=True)
class SupportResult:
    emissions: tuple
    segments: tuple
    cusp: tuple  # (Parameter, EpsilonChar)
    origin: tuple = field(default=(), compare=False)


def _drop_doubled(phi: Parameter, eps: EpsilonChar):
    (d,) = phi.doubled()
    rest = [(b, m) for b, m in phi.blocks if b != d]
    inner_phi = Parameter(phi.group.with_rank(phi.group.n - d.dim), rest)
    return d, inner_phi, eps.restrict(inner_phi.jord)


def _run(phi: Parameter, eps: EpsilonChar, choose) -> tuple:
    """Drive the reduction; choose(phi, eps, chain) returns a ReductionStep or None."""
    emissions: list = []
    chains: list = []
    current: list = []
    chain = None
    while True:
        if phi.doubled():
            d, phi, eps = _drop_doubled(phi, eps)
            for k in range(d.a):
                current.append((d.rho, HalfInt(d.a - 1 - 2 * k)))
            chain = None
            continue
        step = choose(phi, eps, chain)
        if step is None:
            break
        if chain is None or step.block != chain:
            if current:
                chains.append(current)
            current = []
        current.append(step.emitted)
        chain = JordanBlock(step.rho, step.block.a - 2) if step.case == 1 else None
        phi, eps = step.phi, step.eps
    if current:
        chains.append(current)
    for c in chains:
        emissions.extend(c)
    return emissions, chains, phi, eps


def _chain_segment(chain: list) -> Segment:
    rho, first = chain[0]
    return Segment.between(rho, first, chain[-1][1])


def cuspidal_support(phi: Parameter, eps: EpsilonChar) -> SupportResult:
    require_discrete(phi)
    check_epsilon(phi, eps)
    emissions, chains, cphi, ceps = _run(
        phi, eps, lambda p, e, chain: reduce_once(p, e, prefer=chain)
    )
    return SupportResult(
        tuple(emissions), tuple(_chain_segment(c) for c in chains), (cphi, ceps), (phi, eps)
    )


def cusp_by_random_order(phi: Parameter, eps: EpsilonChar, rng: random.Random) -> tuple:
    """Cusp reached by picking any admissible block at every step."""
    require_discrete(phi)

    def choose(p, e, _chain):
        cands = reducible_blocks(p, e)
        if not cands:
            return None
        return _step_at(p, e, rng.choice(cands))

    _, _, cphi, ceps = _run(phi, eps, choose)
    return cphi, ceps


def replay(result: SupportResult) -> bool:
    """Re-apply the emissions as Jacquet functors and look for the cusp.

    Discrete stages are replayed through jac_packet; once a doubled block
    appears the packet is replaced by St(rho, c) |x pi' and the generic
    functor is applied to that induced symbol.
    """
    phi, eps = result.origin
    current = VirtualSum.of(Packet(phi, eps))
    tracking: Packet | None = Packet(phi, eps)
    for rho, x in result.emissions:
        if tracking is not None:
            nxt = jac_packet(x, rho, tracking)
            if nxt is None:
                return False
            if nxt.phi.doubled():
                d, iphi, ieps = _drop_doubled(nxt.phi, nxt.eps)
                current = VirtualSum.of(Induced((Segment.steinberg(d.rho, d.a),), Packet(iphi, ieps)))
                tracking = None
            elif nxt.phi.is_discrete:
                current = VirtualSum.of(nxt)
                tracking = nxt
            continue
        current = jac(x, rho, current)
        if current.is_zero():
            return False
        if tracking is None and len(current) == 1:
            (sym,) = current.symbols()
            if isinstance(sym, Packet) and sym.phi.is_discrete:
                tracking = sym
    cusp = Packet(*result.cusp)
    return current.coefficient(cusp) > 0


def emission_conservation(phi: Parameter, result: SupportResult) -> bool:
    gl = sum(2 * rho.dim for rho, _ in result.emissions)
    return gl + result.cusp[0].group.N == phi.group.N


# admissible triples ----------------------------------------------------------


def _pair_key(b1: JordanBlock, b2: JordanBlock) -> tuple:
    return (b1, b2) if b1.key > b2.key else (b2, b1)


@dataclass(frozen=True)
class AdmissibleTriple:
    jord: tuple
    cusp_phi: Parameter
    cusp_eps: EpsilonChar
    delta_single: tuple = ()
    delta_pair: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "jord", tuple(sorted(self.jord, key=lambda b: b.key)))
        single = tuple(sorted(((b, int(v)) for b, v in dict(self.delta_single).items()), key=lambda p: p[0].key))
        pairs = {}
        for (b1, b2), v in dict(self.delta_pair).items():
            k = _pair_key(b1, b2)
            if k in pairs and pairs[k] != v:
                raise InconsistentDelta(f"Delta({b1};{b2}) is not symmetric")
            pairs[k] = int(v)
        object.__setattr__(self, "delta_single", single)
        object.__setattr__(self, "delta_pair", tuple(sorted(pairs.items(), key=lambda p: (p[0][0].key, p[0][1].key))))

    def single(self, b: JordanBlock) -> int | None:
        return dict(self.delta_single).get(b)

    def pair(self, b1: JordanBlock, b2: JordanBlock) -> int | None:
        return dict(self.delta_pair).get(_pair_key(b1, b2))

    def jord_rho(self, rho: ScuspSymbol) -> list:
        return sorted(b.a for b in self.jord if b.rho == rho)

    def rhos(self) -> list:
        seen = {b.rho.label: b.rho for b in self.jord}
        seen.update({b.rho.label: b.rho for b in self.cusp_phi.jord})
        return [seen[k] for k in sorted(seen)]

    @property
    def group(self) -> GroupType:
        kind = self.cusp_phi.group.kind
        N = sum(b.dim for b in self.jord)
        return GroupType(kind, GroupType.rank_for(kind, N), self.cusp_phi.group.eta)

    def restrict(self, blocks) -> "AdmissibleTriple":
        keep = {b.key for b in blocks}
        return AdmissibleTriple(
            tuple(b for b in self.jord if b.key in keep),
            self.cusp_phi,
            self.cusp_eps,
            tuple((b, v) for b, v in self.delta_single if b.key in keep),
            tuple((k, v) for k, v in self.delta_pair if k[0].key in keep and k[1].key in keep),
        )


def single_domain(jord, cusp_phi: Parameter) -> list:
    """Blocks on which the single-block Delta is defined."""
    return [b for b in jord if b.a % 2 == 0 or not cusp_phi.jord_rho(b.rho)]


def check_delta(t: AdmissibleTriple) -> None:
    """Raise InconsistentDelta unless Delta has the right domain and cocycle laws."""
    if len({b.key for b in t.jord}) != len(t.jord):
        raise InconsistentDelta("Jord must be multiplicity free")
    want = {b.key for b in single_domain(t.jord, t.cusp_phi)}
    have = {b.key for b, _ in t.delta_single}
    if want != have:
        raise InconsistentDelta("single-block Delta defined on the wrong blocks")
    want_pairs = {
        (b1.key, b2.key) for b1, b2 in itertools.combinations(t.jord, 2) if b1.rho == b2.rho
    }
    have_pairs = {tuple(sorted((k[0].key, k[1].key))) for k, _ in t.delta_pair}
    if {tuple(sorted(p)) for p in want_pairs} != have_pairs:
        raise InconsistentDelta("pair Delta must be defined exactly on same-rho pairs")
    for v in [v for _, v in t.delta_single] + [v for _, v in t.delta_pair]:
        if v not in (1, -1):
            raise InconsistentDelta("Delta values must be +-1")
    for rho in t.rhos():
        blocks = [JordanBlock(rho, a) for a in t.jord_rho(rho)]
        for b1, b2 in itertools.combinations(blocks, 2):
            s1, s2 = t.single(b1), t.single(b2)
            if s1 is not None and s2 is not None and s1 * s2 != t.pair(b1, b2):
                raise InconsistentDelta(f"Delta({b1})Delta({b2}) != Delta({b1};{b2})")
        for b1, b2, b3 in itertools.permutations(blocks, 3):
            if t.pair(b1, b2) * t.pair(b2, b3) != t.pair(b1, b3):
                raise InconsistentDelta(f"pair Delta is not a cocycle on {b1},{b2},{b3}")


def triple_of(phi: Parameter, eps: EpsilonChar) -> AdmissibleTriple:
    require_discrete(phi)
    check_epsilon(phi, eps)
    cphi, ceps = cuspidal_support(phi, eps).cusp
    single = tuple((b, eps[b]) for b in single_domain(phi.jord, cphi))
    pairs = tuple(
        ((b1, b2), eps[b1] * eps[b2])
        for b1, b2 in itertools.combinations(phi.jord, 2)
        if b1.rho == b2.rho
    )
    return AdmissibleTriple(phi.jord, cphi, ceps, single, pairs)


def jord_plus(t: AdmissibleTriple, rho: ScuspSymbol, remaining=None) -> list:
    blocks = sorted(remaining if remaining is not None else t.jord, key=lambda b: b.a)
    mine = [b for b in blocks if b.rho == rho]
    out = sorted(t.cusp_phi.jord_rho(rho))
    if mine and mine[0].a % 2 == 0 and t.single(mine[0]) == 1:
        out = [0] + out
    return out


def _alternated_on(t: AdmissibleTriple, remaining) -> bool:
    for rho in t.rhos():
        mine = sorted((b for b in remaining if b.rho == rho), key=lambda b: b.a)
        for lo, hi in zip(mine, mine[1:]):
            if t.pair(hi, lo) != -1:
                return False
        if len(jord_plus(t, rho, remaining)) != len(mine):
            return False
    return True


def is_alternated(t: AdmissibleTriple) -> bool:
    check_delta(t)
    return _alternated_on(t, t.jord)


def removable_pairs(t: AdmissibleTriple, remaining) -> list:
    """Adjacent same-rho pairs (a, a_-) with Delta(a; a_-) = +1."""
    out = []
    by_rho: dict = {}
    for b in remaining:
        by_rho.setdefault(b.rho.label, []).append(b)
    for label in sorted(by_rho):
        mine = sorted(by_rho[label], key=lambda b: b.a)
        for lo, hi in zip(mine, mine[1:]):
            if t.pair(hi, lo) == 1:
                out.append((hi, lo))
    return out


def subordination_chain(t: AdmissibleTriple) -> list | None:
    """Pairs removed on the way to an alternated triple, or None."""
    check_delta(t)

    @lru_cache(maxsize=None)
    def search(remaining: frozenset):
        if _alternated_on(t, remaining):
            return ()
        for hi, lo in removable_pairs(t, remaining):
            rest = search(remaining - {hi, lo})
            if rest is not None:
                return ((hi, lo),) + rest
        return None

    found = search(frozenset(t.jord))
    return None if found is None else list(found)


def is_admissible(t: AdmissibleTriple) -> bool:
    return subordination_chain(t) is not None


def terminal_outcomes(t: AdmissibleTriple) -> set:
    """Alternatedness of every maximal removal sequence (all orders explored)."""
    check_delta(t)
    outcomes: set = set()

    def walk(remaining: frozenset):
        pairs = removable_pairs(t, remaining)
        if not pairs:
            outcomes.add(_alternated_on(t, remaining))
            return
        for hi, lo in pairs:
            walk(remaining - {hi, lo})

    walk(frozenset(t.jord))
    return outcomes


def admissibility_type(t: AdmissibleTriple) -> str:
    if is_alternated(t):
        return "alternated"
    return "mixed" if is_admissible(t) else "none"


def _core_bijection(t: AdmissibleTriple, core, rho: ScuspSymbol) -> dict:
    mine = sorted((b for b in core if b.rho == rho), key=lambda b: b.a)
    return dict(zip(mine, jord_plus(t, rho, core)))


def parameter_of(t: AdmissibleTriple) -> tuple:
    """The unique (phi, eps) whose triple is t."""
    chain = subordination_chain(t)
    if chain is None:
        raise NotAdmissible("triple is neither alternated nor mixed")
    removed = {b for pair in chain for b in pair}
    core = [b for b in t.jord if b not in removed]
    values: dict = {}
    for rho in sorted({b.rho for b in t.jord}, key=lambda r: r.label):
        mine = [b for b in t.jord if b.rho == rho]
        anchored = [b for b in mine if t.single(b) is not None]
        if anchored:
            for b in mine:
                values[b] = t.single(b)
            continue
        l_rho = _core_bijection(t, core, rho)
        seeds = [b for b in sorted(l_rho, key=lambda b: b.a) if l_rho[b] > 0]
        if not seeds:
            raise NotAdmissible(f"no anchor for the signs on {rho.label}")
        seed = seeds[0]
        base = t.cusp_eps.get(rho, l_rho[seed])
        for b in mine:
            values[b] = base if b == seed else base * t.pair(b, seed)
    phi = Parameter(t.group, [(b, 1) for b in t.jord])
    eps = EpsilonChar(tuple((b, values[b]) for b in phi.jord))
    try:
        check_epsilon(phi, eps)
        again = triple_of(phi, eps)
    except ValidationError as exc:
        raise NotAdmissible(f"reconstruction failed: {exc}") from exc
    if again != t:
        raise NotAdmissible("reconstructed parameter does not reproduce the triple")
    return phi, eps


def construct_standard_module(t: AdmissibleTriple) -> tuple:
    """Induced symbol containing pi(phi, eps), together with (phi, eps)."""
    chain = subordination_chain(t)
    if chain is None:
        raise NotAdmissible("triple is neither alternated nor mixed")
    phi, eps = parameter_of(t)
    removed = {b for pair in chain for b in pair}
    core = [b for b in t.jord if b not in removed]
    parts: list = []
    for hi, lo in chain:
        parts.append(Segment.descending(hi.rho, HalfInt(hi.a - 1), -HalfInt(lo.a - 1)))
    for rho in t.rhos():
        l_rho = _core_bijection(t, core, rho)
        for b in sorted(l_rho, key=lambda b: b.a):
            parts.append(Segment.descending(rho, HalfInt(b.a - 1), HalfInt(l_rho[b] + 1)))
    return Induced(tuple(parts), Packet(t.cusp_phi, t.cusp_eps)), (phi, eps)


# enumeration -----------------------------------------------------------------


def candidate_blocks(group: GroupType, alphabet) -> list:
    dual = group.dual_type
    out = []
    for rho in sorted(alphabet, key=lambda r: r.label):
        if not rho.self_dual:
            continue
        for a in range(1, group.N // rho.dim + 1):
            b = JordanBlock(rho, a)
            if block_type(b) is dual:
                out.append(b)
    return out


def discrete_parameters(group: GroupType, alphabet) -> list:
    """All discrete parameters of the group over the alphabet, canonical order."""
    cands = candidate_blocks(group, alphabet)
    out: list = []

    def walk(i: int, chosen: list, left: int):
        if left == 0:
            try:
                out.append(Parameter(group, [(b, 1) for b in chosen]))
            except ValidationError:
                pass
            return
        for j in range(i, len(cands)):
            if cands[j].dim <= left:
                walk(j + 1, chosen + [cands[j]], left - cands[j].dim)

    walk(0, [], group.N)
    return sorted(out, key=lambda p: tuple(b.key for b in p.jord))


def enumerate_packets(group: GroupType, alphabet) -> list:
    return [(phi, eps) for phi in discrete_parameters(group, alphabet) for eps in epsilon_characters(phi, Level.SIGMA0)]


def supercuspidals(group: GroupType, alphabet) -> list:
    return [(p, e) for p, e in enumerate_packets(group, alphabet) if is_supercuspidal(p, e)]


# cocycle-level brute force ---------------------------------------------------


def _delta_options(blocks: list, singles_defined: bool) -> list:
    """All Delta assignments on one rho obeying the three laws, by filtering."""
    pairs = list(itertools.combinations(blocks, 2))
    singles = blocks if singles_defined else []
    out = []
    for sv in itertools.product((1, -1), repeat=len(singles)):
        s = dict(zip(singles, sv))
        for pv in itertools.product((1, -1), repeat=len(pairs)):
            p = {_pair_key(*k): v for k, v in zip(pairs, pv)}
            ok = all(s[b1] * s[b2] == p[_pair_key(b1, b2)] for b1, b2 in pairs) if s else True
            if ok:
                ok = all(
                    p[_pair_key(b1, b2)] * p[_pair_key(b2, b3)] == p[_pair_key(b1, b3)]
                    for b1, b2, b3 in itertools.permutations(blocks, 3)
                )
            if ok:
                out.append((tuple(s.items()), tuple(p.items())))
    return out


def brute_force_triples(group: GroupType, alphabet) -> list:
    """Admissible triples built from Jord sets, supercuspidal cusps and all Delta."""
    jords = [phi.jord for phi in discrete_parameters(group, alphabet)]
    cusps = []
    for m in range(group.n + 1):
        cusps.extend(supercuspidals(group.with_rank(m), alphabet))
    out = []
    for jord in jords:
        for cphi, ceps in cusps:
            per_rho = []
            for label in sorted({b.rho.label for b in jord}):
                blocks = [b for b in jord if b.rho.label == label]
                defined = blocks[0].a % 2 == 0 or not cphi.jord_rho(blocks[0].rho)
                per_rho.append(_delta_options(blocks, defined))
            for combo in itertools.product(*per_rho):
                single = tuple(x for s, _ in combo for x in s)
                pair = tuple(x for _, p in combo for x in p)
                t = AdmissibleTriple(jord, cphi, ceps, single, pair)
                if is_admissible(t):
                    out.append(t)
    return out


# section 11 identities -------------------------------------------------------


def jord_from_st_reducibility(phi: Parameter, eps: EpsilonChar, rho: ScuspSymbol, a: int) -> bool:
    """Irreducibility of St(rho, a) |x pi(phi, eps), which holds exactly
    for blocks of the dual group's type lying in Jord(phi)."""
    require_discrete(phi)
    check_epsilon(phi, eps)
    if not rho.self_dual:
        return False
    b = JordanBlock(rho, a)
    return block_type(b) is phi.group.dual_type and phi.mult(b) == 1


def rebuild_jord(phi: Parameter, eps: EpsilonChar, alphabet) -> tuple:
    """Jord(phi) recovered purely from the irreducibility predicate."""
    found = []
    for rho in sorted(alphabet, key=lambda r: r.label):
        for a in range(1, phi.group.N // rho.dim + 1):
            if jord_from_st_reducibility(phi, eps, rho, a):
                found.append(JordanBlock(rho, a))
    return tuple(found)


def dimension_identity(phi: Parameter) -> bool:
    return sum(b.a * b.rho.dim * m for b, m in phi.blocks) == phi.group.N
