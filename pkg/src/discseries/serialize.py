"""JSON/TOML conversion for alphabets, parameters, triples and results."""

from __future__ import annotations

import json
import sys
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .classify import AdmissibleTriple, SupportResult
from .core import (
    EpsilonChar,
    GroupType,
    HalfInt,
    JordanBlock,
    Kind,
    Parameter,
    QuadChar,
    ScuspSymbol,
)
from .errors import InvalidEpsilon, ValidationError
from .jacquet import Induced, Packet, VirtualSum
from .lfactors import LFactor
from .segments import Segment

SCHEMA_VERSION = 1


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# alphabet --------------------------------------------------------------------


def symbol_to_json(r: ScuspSymbol) -> dict:
    out = {
        "label": r.label,
        "dim": r.dim,
        "self_dual": r.self_dual,
        "sd_type": r.sd_type.value,
        "central_char": r.central_char.sorted(),
        "torsion": r.torsion,
    }
    if not r.self_dual and r.dual_label is not None:
        out["dual_label"] = r.dual_label
    return out


def symbol_from_json(d: dict) -> ScuspSymbol:
    try:
        return ScuspSymbol(
            label=str(d["label"]),
            dim=int(d["dim"]),
            self_dual=bool(d["self_dual"]),
            sd_type=d["sd_type"],
            central_char=QuadChar.of(d.get("central_char", [])),
            torsion=int(d.get("torsion", 1)),
            dual_label=d.get("dual_label"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad symbol record {d!r}: {exc}") from exc


def alphabet_from_data(data) -> tuple:
    """Returns (symbols, twists) from an array or {"symbols", "twists"} object."""
    if isinstance(data, list):
        records, twist_records = data, []
    elif isinstance(data, dict) and "symbols" in data:
        records, twist_records = data["symbols"], data.get("twists", [])
    else:
        raise ValidationError("alphabet must be an array of symbols or an object with 'symbols'")
    symbols = [symbol_from_json(r) for r in records]
    labels = [s.label for s in symbols]
    if len(set(labels)) != len(labels):
        raise ValidationError("alphabet labels must be unique")
    twists = {}
    for t in twist_records:
        try:
            key = (str(t["label"]), QuadChar.of(t["by"] if isinstance(t["by"], list) else [t["by"]]))
            twists[key] = str(t["to"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad twist record {t!r}") from exc
    for (label, eta), target in twists.items():
        back = twists.get((target, eta))
        if back is not None and back != label:
            raise ValidationError(f"twist table is not involutive at ({target}, {eta})")
    return symbols, twists


def alphabet_to_data(symbols, twists=None) -> dict:
    return {
        "symbols": [symbol_to_json(s) for s in symbols],
        "twists": [
            {"label": label, "by": eta.sorted(), "to": to}
            for (label, eta), to in sorted((twists or {}).items(), key=lambda kv: (kv[0][0], kv[0][1].sorted()))
        ],
    }


def load_data(path: str):
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        if p.suffix.lower() == ".toml":
            return tomllib.loads(text)
        return json.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ValidationError(f"cannot parse {path}: {exc}") from exc


def load_alphabet(path: str) -> tuple:
    return alphabet_from_data(load_data(path))


# parameters ------------------------------------------------------------------


def group_to_json(g: GroupType) -> dict:
    return {"kind": g.kind.value, "n": g.n, "eta": g.eta.sorted()}


def group_from_json(d: dict) -> GroupType:
    try:
        return GroupType(Kind(d["kind"]), int(d["n"]), QuadChar.of(d.get("eta", [])))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad group record {d!r}: {exc}") from exc


def block_label(b: JordanBlock) -> str:
    return f"{b.rho.label}:{b.a}"


def _lookup(symbols: dict, label: str) -> ScuspSymbol:
    if label not in symbols:
        raise ValidationError(f"unknown symbol {label!r}")
    return symbols[label]


def parse_block_label(text: str, symbols: dict) -> JordanBlock:
    label, _, a = text.rpartition(":")
    if not label:
        raise ValidationError(f"bad block key {text!r}")
    try:
        return JordanBlock(_lookup(symbols, label), int(a))
    except ValueError as exc:
        raise ValidationError(f"bad block key {text!r}") from exc


def param_to_json(phi: Parameter, eps: EpsilonChar | None = None) -> dict:
    out = {
        "group": group_to_json(phi.group),
        "blocks": [{"rho": b.rho.label, "a": b.a, "mult": m} for b, m in phi.blocks],
    }
    if eps is not None:
        out["epsilon"] = {block_label(b): v for b, v in eps.values}
    return out


def param_from_json(d: dict, symbols: dict) -> tuple:
    """Returns (Parameter, EpsilonChar or None)."""
    try:
        group = group_from_json(d["group"])
        blocks = [
            (JordanBlock(_lookup(symbols, str(r["rho"])), int(r["a"])), int(r.get("mult", 1)))
            for r in d["blocks"]
        ]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad parameter record: {exc}") from exc
    phi = Parameter(group, blocks)
    eps = None
    if "epsilon" in d and d["epsilon"] is not None:
        vals = {}
        for key, v in d["epsilon"].items():
            vals[parse_block_label(key, symbols).key] = int(v)
        if set(vals) != {b.key for b in phi.jord}:
            raise InvalidEpsilon("epsilon keys must be exactly the blocks of the parameter")
        eps = EpsilonChar(tuple((b, vals[b.key]) for b in phi.jord))
    return phi, eps


# results ---------------------------------------------------------------------


def halfint_to_json(x: HalfInt) -> str:
    return str(x)


def segment_to_json(s: Segment) -> str:
    return str(s)


def packet_to_json(p: Packet) -> dict:
    out = param_to_json(p.phi, p.eps)
    out["level"] = p.level.value
    return out


def symbol_result_to_json(sym) -> dict:
    if isinstance(sym, Packet):
        return {"gl": [], "packet": packet_to_json(sym)}
    if isinstance(sym, Induced):
        return {"gl": [segment_to_json(s) for s in sym.gl], "packet": packet_to_json(sym.inner)}
    if isinstance(sym, tuple):
        return {"gl": [segment_to_json(s) for s in sym], "packet": None}
    raise ValidationError(f"cannot serialize {sym!r}")


def vsum_to_json(v: VirtualSum) -> dict:
    terms = []
    for sym, c in v.items():
        t = symbol_result_to_json(sym)
        t["coeff"] = c
        terms.append(t)
    return {"schema_version": SCHEMA_VERSION, "terms": terms}


def support_to_json(r: SupportResult) -> dict:
    cphi, ceps = r.cusp
    return {
        "schema_version": SCHEMA_VERSION,
        "emissions": [{"rho": rho.label, "x": halfint_to_json(x)} for rho, x in r.emissions],
        "segments": [segment_to_json(s) for s in r.segments],
        "cusp": param_to_json(cphi, ceps),
    }


def triple_to_json(t: AdmissibleTriple) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "jord": [{"rho": b.rho.label, "a": b.a} for b in t.jord],
        "cusp": param_to_json(t.cusp_phi, t.cusp_eps),
        "delta_single": {block_label(b): v for b, v in t.delta_single},
        "delta_pair": {f"{block_label(k[0])}|{block_label(k[1])}": v for k, v in t.delta_pair},
    }


def triple_from_json(d: dict, symbols: dict) -> AdmissibleTriple:
    try:
        jord = [JordanBlock(_lookup(symbols, str(r["rho"])), int(r["a"])) for r in d["jord"]]
        cphi, ceps = param_from_json(d["cusp"], symbols)
        single = [(parse_block_label(k, symbols), int(v)) for k, v in d.get("delta_single", {}).items()]
        pairs = []
        for k, v in d.get("delta_pair", {}).items():
            left, _, right = k.partition("|")
            pairs.append(((parse_block_label(left, symbols), parse_block_label(right, symbols)), int(v)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad triple record: {exc}") from exc
    if ceps is None:
        raise ValidationError("the cusp of a triple needs an epsilon")
    return AdmissibleTriple(tuple(jord), cphi, ceps, tuple(single), tuple(pairs))


def lfactor_to_json(L: LFactor) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "factors": [{"r": r, "t": halfint_to_json(t), "mult": m} for r, t, m in L.factors],
        "poles": [halfint_to_json(p) for p in L.poles()],
        "render": L.render(),
    }


def endo_to_json(d) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "twisted": d.twisted,
        "I": {"group": group_to_json(d.g1), "eta": d.eta1.sorted(), "param": param_to_json(d.phi1)},
        "II": {"group": group_to_json(d.g2), "eta": d.eta2.sorted(), "param": param_to_json(d.phi2)},
    }
