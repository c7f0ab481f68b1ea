"""Acceptance checks 1-9, runnable from the CLI and from the test suite."""

from __future__ import annotations

import itertools
import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import classify, endoscopy
from .core import (
    EpsilonChar,
    GroupType,
    HalfInt,
    JordanBlock,
    Kind,
    Level,
    Parameter,
    QuadChar,
    ScuspSymbol,
    epsilon_characters,
    packet_characters,
)
from .jacquet import Induced, Packet, jac_packet, jac_sequence, minus_parameter
from .lfactors import (
    Cuspidal,
    Langlands,
    Steinberg,
    Tempered,
    factorization_identity_check,
    reducibility_from_lfactors,
    reducibility_point,
    rho_cross_parameter,
)
from .segments import Segment, gen_is_linked, is_linked, speh_matrix, speh_pair_reducible

SEED = 20240611


def default_alphabet() -> list:
    return [
        ScuspSymbol("chi", 1, True, "orthogonal"),
        ScuspSymbol("chip", 1, True, "orthogonal", central_char=QuadChar.of(["chip"])),
        ScuspSymbol("rho2", 2, True, "symplectic"),
    ]


def default_twists() -> dict:
    return {("rho2", QuadChar.of(["chip"])): "rho2"}


def eta_values(alphabet) -> list:
    gens = sorted({g for r in alphabet for g in r.central_char.generators})
    out = []
    for k in range(len(gens) + 1):
        for combo in itertools.combinations(gens, k):
            out.append(QuadChar.of(combo))
    return out


def groups_up_to(max_n: int, alphabet) -> list:
    out = []
    for n in range(max_n + 1):
        out.append(GroupType(Kind.SP, n))
        out.append(GroupType(Kind.SO_ODD, n))
        for eta in eta_values(alphabet):
            out.append(GroupType(Kind.SO_EVEN, n, eta))
    return out


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number} [{self.name}] {status}: {self.detail}"


class Context:
    def __init__(self, max_n: int = 4, threads: int = 1, alphabet=None, twists=None):
        self.max_n = max_n
        self.threads = max(1, threads)
        self.alphabet = list(alphabet) if alphabet is not None else default_alphabet()
        self.twists = twists if twists is not None else default_twists()
        self.table = endoscopy.TwistTable(self.alphabet, self.twists)
        self.groups = groups_up_to(max_n, self.alphabet)

    def map(self, fn, items) -> list:
        items = list(items)
        if self.threads == 1 or len(items) < 2:
            return [fn(i) for i in items]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(fn, items))


# 1 -----------------------------------------------------------------------


def _bijection_for(ctx: Context, g: GroupType) -> tuple:
    packets = classify.enumerate_packets(g, ctx.alphabet)
    brute = classify.brute_force_triples(g, ctx.alphabet)
    triples = [classify.triple_of(p, e) for p, e in packets]
    ok = len(set(triples)) == len(packets) and set(triples) == set(brute) and len(brute) == len(set(brute))
    ok = ok and all(classify.parameter_of(t) == pe for t, pe in zip(triples, packets))
    ok = ok and all(classify.triple_of(*classify.parameter_of(t)) == t for t in brute)
    return ok, len(packets), len(brute)


def check_bijection(ctx: Context) -> CriterionResult:
    res = ctx.map(lambda g: _bijection_for(ctx, g), ctx.groups)
    bad = [str(g) for g, r in zip(ctx.groups, res) if not r[0]]
    total = sum(r[1] for r in res)
    detail = f"{len(ctx.groups)} groups, {total} packets matched by {sum(r[2] for r in res)} brute-force triples"
    if bad:
        detail += "; mismatch on " + ", ".join(bad)
    return CriterionResult(1, "bijection", not bad, detail)


# 2 -----------------------------------------------------------------------


def _corrupt(phi: Parameter, rng: random.Random) -> Parameter:
    blocks = list(phi.blocks)
    i = rng.randrange(len(blocks))
    b, m = blocks[i]
    blocks[i] = (JordanBlock(b.rho, b.a + rng.choice((1, 2))), m)
    return Parameter.unchecked(phi.group, blocks)


def check_dimension(ctx: Context) -> CriterionResult:
    rng = random.Random(SEED + 2)
    params = [p for g in ctx.groups for p in classify.discrete_parameters(g, ctx.alphabet)]
    holds = sum(classify.dimension_identity(p) for p in params)
    fuzzed = [_corrupt(p, rng) for p in params if p.blocks]
    caught = sum(not classify.dimension_identity(p) for p in fuzzed)
    ok = holds == len(params) and caught == len(fuzzed)
    return CriterionResult(2, "dimension identity", ok, f"{holds}/{len(params)} hold, {caught}/{len(fuzzed)} corruptions rejected")


# 3 -----------------------------------------------------------------------


def _criterion_agreement(ctx: Context, g: GroupType) -> tuple:
    n = agree = 0
    for phi, eps in classify.enumerate_packets(g, ctx.alphabet):
        n += 1
        sup = classify.cuspidal_support(phi, eps)
        if classify.is_supercuspidal(phi, eps) == (not sup.emissions):
            agree += 1
    return n, agree


def check_supercuspidal(ctx: Context) -> CriterionResult:
    res = ctx.map(lambda g: _criterion_agreement(ctx, g), ctx.groups)
    n, agree = sum(r[0] for r in res), sum(r[1] for r in res)
    return CriterionResult(3, "supercuspidal criterion vs support", n == agree, f"{agree}/{n} agree")


# 4 -----------------------------------------------------------------------


def random_induced(rng: random.Random, packets: list, alphabet: list) -> tuple:
    phi, eps = rng.choice(packets)
    selfdual = [r for r in alphabet if r.self_dual]
    rho = rng.choice(selfdual)
    parts = []
    for _ in range(rng.randint(0, 3)):
        r = rho if rng.random() < 0.7 else rng.choice(alphabet)
        start = HalfInt(rng.randint(-6, 6))
        length = rng.randint(1, 4)
        step = rng.choice((-1, -1, 1))
        parts.append(Segment(r, start, length, step))
    sym = Induced(tuple(parts), Packet(phi, eps))
    return sym, rho


def _active_points(sym, rho) -> set:
    """Exponents at which a single Jacquet step can be nonzero."""
    out = set()
    for s in sym.gl:
        if s.rho == rho:
            out.update({s.start, -s.end})
    for b in sym.inner.phi.jord:
        if b.rho == rho and b.a > 1:
            out.add(HalfInt(b.a - 1))
    return out


def _random_pair(rng: random.Random, sym, rho) -> tuple:
    active = sorted(_active_points(sym, rho))
    noise = [HalfInt(d) for d in range(-7, 8)]
    while True:
        x = rng.choice(active) if active and rng.random() < 0.9 else rng.choice(noise)
        y = rng.choice(active) if active and rng.random() < 0.9 else rng.choice(noise)
        if abs((x - y).doubled) != 2:
            return x, y


def _commutation_batch(ctx: Context, seed: int, count: int, packets: list) -> tuple:
    rng = random.Random(seed)
    ok = nonzero = 0
    for _ in range(count):
        sym, rho = random_induced(rng, packets, ctx.alphabet)
        x, y = _random_pair(rng, sym, rho)
        a = jac_sequence([x, y], rho, sym)
        b = jac_sequence([y, x], rho, sym)
        ok += a == b
        nonzero += not a.is_zero()
    return ok, nonzero


def check_commutation(ctx: Context, total: int = 10_000, batches: int = 20) -> CriterionResult:
    packets = [pe for g in ctx.groups for pe in classify.enumerate_packets(g, ctx.alphabet)]
    per = -(-total // batches)
    res = ctx.map(lambda i: _commutation_batch(ctx, SEED + 400 + i, per, packets), range(batches))
    ok, nonzero = sum(r[0] for r in res), sum(r[1] for r in res)
    n = per * batches
    return CriterionResult(4, "Jacquet commutation", ok == n, f"{ok}/{n} symbols commute ({nonzero} with nonzero result)")


# 5 -----------------------------------------------------------------------


def _coherence_for(ctx: Context, g: GroupType) -> tuple:
    checks = bad = 0
    for phi in classify.discrete_parameters(g, ctx.alphabet):
        chars = epsilon_characters(phi, Level.SIGMA0)
        for rho in ctx.alphabet:
            if not rho.self_dual:
                continue
            for d in range(1, g.N + 1):
                x = HalfInt(d)
                checks += 1
                outs = [jac_packet(x, rho, Packet(phi, e)) for e in chars]
                hits = Counter((o.phi, o.eps) for o in outs if o is not None)
                phi_minus = minus_parameter(phi, rho, x)
                if phi_minus is None:
                    bad += bool(hits)
                    continue
                want = Counter((phi_minus, e) for e in packet_characters(phi_minus, Level.SIGMA0))
                bad += hits != want
                bar_hits = Counter()
                for e in epsilon_characters(phi, Level.BAR):
                    o = jac_packet(x, rho, Packet(phi, e, Level.BAR))
                    if o is not None:
                        bar_hits[(o.phi, o.eps)] += 1
                bar_want = Counter((phi_minus, e) for e in packet_characters(phi_minus, Level.BAR))
                bad += bar_hits != bar_want
    return checks, bad


def check_packet_coherence(ctx: Context) -> CriterionResult:
    res = ctx.map(lambda g: _coherence_for(ctx, g), ctx.groups)
    checks, bad = sum(r[0] for r in res), sum(r[1] for r in res)
    return CriterionResult(5, "packet Jacquet coherence", bad == 0, f"{checks} (phi, rho, x) cases, {bad} mismatches")


# 6 -----------------------------------------------------------------------


def gl_reps(alphabet, max_a: int = 4, max_parts: int = 3) -> list:
    sts = [Steinberg(r, a) for r in alphabet for a in range(1, max_a + 1)]
    out: list = [Cuspidal(r, HalfInt(s)) for r in alphabet for s in (-1, 0, 1)]
    out += [Steinberg(r, a, HalfInt(s)) for r in alphabet for a in range(1, max_a + 1) for s in (-1, 0, 1)]
    temps = []
    for k in range(1, max_parts + 1):
        temps += [Tempered(c) for c in itertools.combinations_with_replacement(sts, k)]
    out += temps
    small = [t for t in temps if len(t.parts) <= 2]
    for t1, t2 in itertools.product(small[:24], repeat=2):
        out.append(Langlands(((t1, HalfInt(2)), (t2, HalfInt(1)))))
    return out


def _pole_criterion(ctx: Context, g: GroupType) -> tuple:
    checks = bad = 0
    for phi in classify.discrete_parameters(g, ctx.alphabet):
        for rho in ctx.alphabet:
            L = rho_cross_parameter(rho, phi)
            for a in range(1, 14):
                checks += 1
                bad += L.has_pole(-HalfInt(a - 1)) != phi.contains(rho, a)
    return checks, bad


def check_lfactors(ctx: Context, pole_max_n: int = 6) -> CriterionResult:
    reps = gl_reps(ctx.alphabet)
    fact_bad = sum(not factorization_identity_check(p) for p in reps)
    pole_groups = [g for g in groups_up_to(pole_max_n, ctx.alphabet) if g.N <= 13]
    res = ctx.map(lambda g: _pole_criterion(ctx, g), pole_groups)
    pole_checks, pole_bad = sum(r[0] for r in res), sum(r[1] for r in res)
    red_checks = red_bad = 0
    cases: Counter = Counter()
    for g in ctx.groups:
        for phi, eps in classify.supercuspidals(g, ctx.alphabet):
            for rho in ctx.alphabet:
                point = reducibility_point(phi, rho).a_rho
                cases["jord" if point > 0 else ("opposite" if point == 0 else "none")] += 1
                red_checks += 1
                red_bad += point != reducibility_from_lfactors(phi, rho)
    all_cases = all(cases[k] for k in ("jord", "opposite", "none"))
    ok = fact_bad == 0 and pole_bad == 0 and red_bad == 0 and all_cases
    detail = (
        f"factorization {len(reps) - fact_bad}/{len(reps)}, poles {pole_checks - pole_bad}/{pole_checks}, "
        f"reducibility {red_checks - red_bad}/{red_checks} "
        f"(cases jord={cases['jord']} opposite={cases['opposite']} none={cases['none']})"
    )
    return CriterionResult(6, "L-factor laws", ok, detail)


# 7 -----------------------------------------------------------------------


def check_segments(ctx: Context) -> CriterionResult:
    rho = next(r for r in ctx.alphabet if r.self_dual)
    agree = n = sym_bad = 0
    for a, b, a2, b2 in itertools.product(range(1, 5), repeat=4):
        g1 = speh_matrix(rho, a, b)
        for d in range(-12, 13):
            s = HalfInt(d)
            g2 = speh_matrix(rho, a2, b2).shift(s)
            n += 1
            linked = gen_is_linked(g1, g2)
            agree += linked == speh_pair_reducible(rho, a, b, rho, a2, b2, s)
            if linked != gen_is_linked(g2, g1) or linked != gen_is_linked(g1.transpose(), g2.transpose()):
                sym_bad += 1
    seg_bad = 0
    segs = [Segment.between(rho, HalfInt(x), HalfInt(y)) for x in range(-6, 7) for y in range(-6, 7) if (x - y) % 2 == 0 and x >= y]
    for s1, s2 in itertools.product(segs, repeat=2):
        seg_bad += is_linked(s1, s2) != is_linked(s2, s1)
    ok = agree == n and sym_bad == 0 and seg_bad == 0
    return CriterionResult(7, "segment calculus", ok, f"{agree}/{n} Speh pairs agree, {sym_bad + seg_bad} symmetry failures")


# 8 -----------------------------------------------------------------------


def _endoscopy_for(ctx: Context, g: GroupType) -> tuple:
    checks = bad = 0
    for phi in classify.discrete_parameters(g, ctx.alphabet):
        chars = epsilon_characters(phi, Level.SIGMA0)
        elems = endoscopy.component_elements(phi)
        checks += 1
        bad += not endoscopy.is_nondegenerate(phi)
        for s in elems:
            d = endoscopy.endo_datum(phi, s, ctx.table)
            checks += 1
            bad += d.g1.N + d.g2.N != g.N or d.phi1.block_dim() != d.g1.N or d.phi2.block_dim() != d.g2.N
            for e1, e2 in itertools.product(chars, repeat=2):
                checks += 1
                bad += endoscopy.pairing(e1 * e2, s) != endoscopy.pairing(e1, s) * endoscopy.pairing(e2, s)
            for s2 in elems:
                prod = EpsilonChar(tuple((b, v * w) for (b, v), (_, w) in zip(s.values, s2.values)))
                for e in chars:
                    checks += 1
                    bad += endoscopy.pairing(e, prod) != endoscopy.pairing(e, s) * endoscopy.pairing(e, s2)
            for e in chars:
                checks += 1
                bad += not endoscopy.eps0_twist_negates(phi, e, s)
            for b in phi.jord:
                if b.a >= 2:
                    checks += 1
                    bad += not endoscopy.jacquet_endoscopy_compatible(phi, s, b.rho, HalfInt(b.a - 1), ctx.table)
    return checks, bad


def check_endoscopy(ctx: Context) -> CriterionResult:
    res = ctx.map(lambda g: _endoscopy_for(ctx, g), ctx.groups)
    checks, bad = sum(r[0] for r in res), sum(r[1] for r in res)
    return CriterionResult(8, "endoscopy combinatorics", bad == 0, f"{checks - bad}/{checks} checks hold")


# 9 -----------------------------------------------------------------------

CHECKS = [
    check_bijection,
    check_dimension,
    check_supercuspidal,
    check_commutation,
    check_packet_coherence,
    check_lfactors,
    check_segments,
    check_endoscopy,
]


def run_checks(ctx: Context) -> list:
    return [check(ctx) for check in CHECKS]


def render(results: list) -> str:
    return "\n".join(r.line() for r in results) + "\n"


def check_determinism(ctx: Context, first: list) -> CriterionResult:
    other = 1 if ctx.threads != 1 else 4
    again = run_checks(Context(ctx.max_n, other, ctx.alphabet, ctx.twists))
    same = render(first) == render(again)
    return CriterionResult(9, "determinism", same, "report reproduced exactly with a different thread count" if same else "reports differ")


def verify(max_n: int = 4, threads: int = 1, alphabet=None, twists=None) -> list:
    ctx = Context(max_n, threads, alphabet, twists)
    results = run_checks(ctx)
    results.append(check_determinism(ctx, results))
    return results
