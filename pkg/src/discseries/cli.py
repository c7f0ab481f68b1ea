"""Command-line interface: discseries <verb> [options]."""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, field

from . import classify, endoscopy, lfactors, verify
from .core import (
    EpsilonChar,
    GroupType,
    HalfInt,
    Kind,
    Level,
    QuadChar,
    ScuspSymbol,
    check_epsilon,
    parse_signs,
)
from .errors import DiscSeriesError, ValidationError
from .jacquet import Induced, Packet, VirtualSum, jac_sequence
from .segments import parse_gl_symbol
from .serialize import (
    SCHEMA_VERSION,
    dumps,
    endo_to_json,
    group_to_json,
    lfactor_to_json,
    load_alphabet,
    load_data,
    param_from_json,
    param_to_json,
    support_to_json,
    symbol_result_to_json,
    triple_from_json,
    triple_to_json,
    vsum_to_json,
)

EXIT_USAGE = 1
EXIT_VERIFY = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class Workspace:
    alphabet: list
    twist_table: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        labels = [r.label for r in self.alphabet]
        if len(set(labels)) != len(labels):
            raise ValidationError("alphabet labels must be unique")

    @property
    def symbols(self) -> dict:
        return {r.label: r for r in self.alphabet}

    def symbol(self, label: str) -> ScuspSymbol:
        if label not in self.symbols:
            raise ValidationError(f"unknown symbol {label!r}")
        return self.symbols[label]

    def twists(self) -> endoscopy.TwistTable:
        return endoscopy.TwistTable(self.alphabet, self.twist_table)


def _workspace(args) -> Workspace:
    if args.alphabet:
        symbols, twists = load_alphabet(args.alphabet)
    else:
        symbols, twists = verify.default_alphabet(), verify.default_twists()
    return Workspace(symbols, twists, {"format": "json" if args.json else "text"})


def _emit(args, payload: dict, text: str, default: str = "json") -> None:
    fmt = default
    if args.json:
        fmt = "json"
    elif args.text:
        fmt = "text"
    sys.stdout.write(dumps(payload) if fmt == "json" else text)


def _load_param(args, ws: Workspace, need_eps: bool = True):
    phi, eps = param_from_json(load_data(args.param), ws.symbols)
    if getattr(args, "eps", None):
        eps = EpsilonChar.from_signs(phi.jord, parse_signs(args.eps))
    if need_eps:
        if eps is None:
            raise ValidationError("an epsilon is required (in the file or via --eps)")
        check_epsilon(phi, eps)
    return phi, eps


# verbs -------------------------------------------------------------------------


def cmd_enumerate(args, ws: Workspace) -> int:
    group = GroupType(Kind(args.group), args.n, QuadChar.of(_csv(args.eta)))
    packets = classify.enumerate_packets(group, ws.alphabet)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "group": group_to_json(group),
        "packets": [param_to_json(p, e) for p, e in packets],
    }
    text = "".join(f"{p} {e}\n" for p, e in packets)
    _emit(args, payload, text, default="text")
    return 0


def cmd_classify(args, ws: Workspace) -> int:
    phi, eps = _load_param(args, ws)
    t = classify.triple_of(phi, eps)
    payload = triple_to_json(t)
    payload["type"] = classify.admissibility_type(t)
    text = (
        f"parameter {phi} {eps}\n"
        f"cusp {t.cusp_phi} {t.cusp_eps}\n"
        + "".join(f"delta {b} = {v:+d}\n" for b, v in t.delta_single)
        + "".join(f"delta {k[0]};{k[1]} = {v:+d}\n" for k, v in t.delta_pair)
        + f"type {payload['type']}\n"
    )
    _emit(args, payload, text)
    return 0


def cmd_support(args, ws: Workspace) -> int:
    phi, eps = _load_param(args, ws)
    r = classify.cuspidal_support(phi, eps)
    payload = support_to_json(r)
    gl = " x ".join(str(s) for s in r.segments) or "1"
    text = f"{gl} |x pi({r.cusp[0]}, {r.cusp[1]})\n"
    _emit(args, payload, text)
    return 0


def cmd_build(args, ws: Workspace) -> int:
    t = triple_from_json(load_data(args.triple), ws.symbols)
    module, (phi, eps) = classify.construct_standard_module(t)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "type": classify.admissibility_type(t),
        "module": symbol_result_to_json(module),
        "parameter": param_to_json(phi, eps),
    }
    _emit(args, payload, f"{module}\nsubrepresentation pi({phi}, {eps})\n")
    return 0


_PKT = re.compile(r"^pkt\(\s*([^,()]+?)\s*(?:,\s*([^()]*?)\s*)?\)$")


def parse_symbol(text: str, ws: Workspace, level: Level):
    """'<chi:2> x <chi:1> |x pkt(phi.json, +,-)' or a bare GL product."""
    gl_text, sep, inner_text = text.partition("|x")
    parts = [p for p in re.split(r"\s+x\s+", gl_text.strip()) if p]
    gl = tuple(parse_gl_symbol(p, ws.symbols) for p in parts)
    if not sep:
        return gl
    m = _PKT.match(inner_text.strip())
    if not m:
        raise ValidationError(f"cannot parse packet {inner_text.strip()!r}; expected pkt(FILE[, SIGNS])")
    phi, eps = param_from_json(load_data(m.group(1)), ws.symbols)
    if m.group(2):
        eps = EpsilonChar.from_signs(phi.jord, parse_signs(m.group(2)))
    if eps is None:
        raise ValidationError("packet needs an epsilon")
    return Induced(gl, Packet(phi, eps, level)) if gl else Packet(phi, eps, level)


def cmd_jacquet(args, ws: Workspace) -> int:
    rho = ws.symbol(args.rho)
    xs = [HalfInt.of(x) for x in _csv(args.x)]
    if not xs:
        raise UsageError("--x needs at least one exponent")
    sym = parse_symbol(args.symbol, ws, Level(args.level))
    result = jac_sequence(xs, rho, sym)
    payload = vsum_to_json(result)
    _emit(args, payload, _vsum_text(result))
    return 0


def _vsum_text(v: VirtualSum) -> str:
    if v.is_zero():
        return "0\n"
    lines = []
    for sym, c in v.items():
        if isinstance(sym, tuple):
            body = " x ".join(str(s) for s in sym) or "1"
        else:
            body = str(sym)
        lines.append(f"{c:+d} {body}\n")
    return "".join(lines)


_SHIFT = re.compile(r"^(.*?)(?:\[([^\]]+)\])?$")
_ST = re.compile(r"^St\(\s*([^,()]+?)\s*,\s*(\d+)\s*\)$")


def parse_glrep(text: str, ws: Workspace):
    """chi, chi[1/2], St(chi,3), St(chi,3)[1], St(chi,3)+chi, or
    Langlands data 'St(chi,2)+chi@1;chi@0'."""
    text = text.strip()
    if ";" in text or "@" in text:
        pieces = []
        for piece in text.split(";"):
            body, _, u = piece.partition("@")
            pieces.append((_tempered(body, ws), HalfInt.of(u.strip() or "0")))
        return lfactors.Langlands(tuple(pieces))
    if "+" in text:
        return _tempered(text, ws)
    m = _SHIFT.match(text)
    body, shift = m.group(1).strip(), HalfInt.of(m.group(2) or "0")
    st = _ST.match(body)
    if st:
        return lfactors.Steinberg(ws.symbol(st.group(1)), int(st.group(2)), shift)
    return lfactors.Cuspidal(ws.symbol(body), shift)


def _tempered(text: str, ws: Workspace):
    parts = []
    for term in text.split("+"):
        rep = parse_glrep(term, ws)
        if isinstance(rep, lfactors.Cuspidal):
            rep = lfactors.Steinberg(rep.rho, 1, rep.shift)
        if not isinstance(rep, lfactors.Steinberg) or rep.shift.doubled:
            raise ValidationError(f"tempered terms must be unshifted Steinbergs: {term!r}")
        parts.append(rep)
    return lfactors.Tempered(tuple(parts))


def cmd_lfactor(args, ws: Workspace) -> int:
    op = args.op
    if op in ("rs", "sym2", "wedge2"):
        if not args.pi:
            raise UsageError(f"lfactor {op} needs --pi")
        pi = parse_glrep(args.pi, ws)
        if op == "rs":
            if not args.sigma:
                raise UsageError("lfactor rs needs --sigma")
            L = lfactors.rs(pi, parse_glrep(args.sigma, ws))
        else:
            L = getattr(lfactors, op)(pi)
        payload = lfactor_to_json(L)
        _emit(args, payload, L.render() + "\n")
        return 0
    if not args.param or not args.rho:
        raise UsageError(f"lfactor {op} needs --param and --rho")
    phi, _ = _load_param(args, ws, need_eps=False)
    rho = ws.symbol(args.rho)
    if op == "cross":
        L = lfactors.rho_cross_parameter(rho, phi)
        _emit(args, lfactor_to_json(L), L.render() + "\n")
        return 0
    point = lfactors.reducibility_point(phi, rho, args.full_orthogonal)
    try:
        from_l = lfactors.reducibility_from_lfactors(phi, rho)
    except ValidationError:
        from_l = None
    payload = {
        "schema_version": SCHEMA_VERSION,
        "a_rho": point.a_rho,
        "exponent": str(point.exponent),
        "proviso_holds": point.proviso_holds,
        "from_lfactors": from_l,
    }
    _emit(args, payload, f"a_rho = {point.a_rho}, exponent {point.exponent}\n")
    return 0


def cmd_endo(args, ws: Workspace) -> int:
    phi, _ = _load_param(args, ws, need_eps=False)
    s = EpsilonChar.from_signs(phi.jord, parse_signs(args.s))
    table = ws.twists()
    d = endoscopy.endo_datum(phi, s, table)
    payload = endo_to_json(d)
    payload["in_s_phi"] = endoscopy.in_s_phi(phi, s)
    payload["transfer"] = vsum_to_json(endoscopy.packet_transfer_sum(phi, s, table))["terms"]
    text = (
        f"I:  {d.g1} eta={d.eta1} {d.phi1}\n"
        f"II: {d.g2} eta={d.eta2} {d.phi2}\n"
        f"twisted: {str(d.twisted).lower()}\n"
    )
    _emit(args, payload, text)
    return 0


def cmd_verify(args, ws: Workspace) -> int:
    results = verify.verify(args.max_n, args.threads, ws.alphabet, ws.twist_table)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "max_n": args.max_n,
        "criteria": [
            {"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail} for r in results
        ],
        "passed": all(r.passed for r in results),
    }
    summary = "all criteria passed\n" if payload["passed"] else "some criteria FAILED\n"
    _emit(args, payload, verify.render(results) + summary, default="text")
    return 0 if payload["passed"] else EXIT_VERIFY


def _csv(text: str | None) -> list:
    if not text:
        return []
    return [t.strip() for t in text.split(",") if t.strip()]


# parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alphabet", help="alphabet file (JSON or TOML); built-in chi, chip, rho2 if omitted")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output")
    fmt.add_argument("--text", action="store_true", help="plain text output")

    p = _Parser(prog="discseries", description=__doc__)
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    e = sub.add_parser("enumerate", parents=[common], help="list all (phi, eps) of a group")
    e.add_argument("--group", required=True, choices=[k.value for k in Kind])
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--eta", help="comma-separated generators of eta (SOeven)")
    e.set_defaults(func=cmd_enumerate)

    for name, func, helptext in (
        ("classify", cmd_classify, "admissible triple of (phi, eps)"),
        ("support", cmd_support, "cuspidal support of (phi, eps)"),
    ):
        c = sub.add_parser(name, parents=[common], help=helptext)
        c.add_argument("--param", required=True)
        c.add_argument("--eps", help="signs in canonical block order, e.g. '+,-'")
        c.set_defaults(func=func)

    b = sub.add_parser("build", parents=[common], help="standard module of an admissible triple")
    b.add_argument("--triple", required=True)
    b.set_defaults(func=cmd_build)

    j = sub.add_parser("jacquet", parents=[common], help="apply Jac_x (comma list for composites)")
    j.add_argument("--x", required=True)
    j.add_argument("--rho", required=True)
    j.add_argument("--symbol", required=True)
    j.add_argument("--level", choices=[v.value for v in Level], default=Level.SIGMA0.value)
    j.set_defaults(func=cmd_jacquet)

    lf = sub.add_parser("lfactor", parents=[common], help="formal L-factors")
    lf.add_argument("op", choices=["rs", "sym2", "wedge2", "cross", "reducibility"])
    lf.add_argument("--pi")
    lf.add_argument("--sigma")
    lf.add_argument("--param")
    lf.add_argument("--rho")
    lf.add_argument("--full-orthogonal", action="store_true")
    lf.set_defaults(func=cmd_lfactor)

    en = sub.add_parser("endo", parents=[common], help="endoscopic datum of (phi, s)")
    en.add_argument("--param", "--phi", dest="param", required=True)
    en.add_argument("--s", required=True)
    en.set_defaults(func=cmd_endo)

    v = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    v.add_argument("--max-n", type=int, default=4)
    v.add_argument("--threads", type=int, default=1)
    v.set_defaults(func=cmd_verify)
    return p


_DASHED_VALUES = ("--eps", "--s", "--x")


def _glue_sign_vectors(argv: list) -> list:
    """Turn '--eps -,+' into '--eps=-,+' so argparse does not read a flag;
    the same for negative exponents after --x."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _DASHED_VALUES and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_sign_vectors(argv))
    try:
        ws = _workspace(args)
        return args.func(args, ws)
    except UsageError as exc:
        print(f"discseries: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DiscSeriesError as exc:
        print(f"discseries: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, TypeError, KeyError) as exc:
        print(f"discseries: invalid input: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
