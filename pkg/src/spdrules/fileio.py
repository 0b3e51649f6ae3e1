"""JSON rule and profile documents.

Alternatives are written as integers or "p/q" strings, never floats.
Range elements are ``{"single": v}`` or ``{"pair": [v, w]}`` with v, w
adjacent alternatives. Coalitions list agent indices: peaked agents are
0..a-1 and dipped agents a..a+d-1.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .coalition import CoalitionRule, DecisiveSets, LeftCoalitionSystem
from .domain import AgentPartition, AlternativeSpace, ExtElem, Profile, as_rational, format_rational
from .median import DoubleQuota, MedianRule, QuotaSet


class ParseError(ValueError):
    def __init__(self, message: str, path: str = "$", line: int | None = None, col: int | None = None):
        self.path, self.line, self.col = path, line, col
        where = f"line {line}, column {col}" if line is not None else path
        super().__init__(f"{where}: {message}")


def _load_json(text: str) -> Any:
    def no_floats(s):
        raise ValueError(f"inexact number {s}")

    try:
        return json.loads(text, parse_float=no_floats)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, col=exc.colno) from None
    except ValueError as exc:
        raise ParseError(f"{exc}; write rationals as \"p/q\" strings") from None


class _Reader:
    """Small helpers that raise ParseError with a JSON path."""

    def obj(self, v, path: str, required: set[str], optional: set[str] = frozenset()) -> dict:
        if not isinstance(v, dict):
            raise ParseError("expected an object", path)
        unknown = set(v) - required - set(optional)
        if unknown:
            raise ParseError(f"unknown field(s) {sorted(unknown)}", path)
        missing = required - set(v)
        if missing:
            raise ParseError(f"missing field(s) {sorted(missing)}", path)
        return v

    def arr(self, v, path: str) -> list:
        if not isinstance(v, list):
            raise ParseError("expected an array", path)
        return v

    def int_(self, v, path: str) -> int:
        if isinstance(v, bool) or not isinstance(v, int):
            raise ParseError("expected an integer", path)
        return v

    def rational(self, v, path: str) -> Fraction:
        try:
            return as_rational(v)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(str(exc), path) from None


_R = _Reader()


def _alt(space: AlternativeSpace, v, path: str) -> int:
    x = _R.rational(v, path)
    try:
        return space.index_of(x)
    except ValueError as exc:
        raise ParseError(str(exc), path) from None


def _elem(space: AlternativeSpace, v, path: str) -> ExtElem:
    if isinstance(v, dict) and set(v) == {"single"}:
        return ExtElem.single(_alt(space, v["single"], path + ".single"))
    if isinstance(v, dict) and set(v) == {"pair"}:
        return _pair(space, v["pair"], path + ".pair")
    raise ParseError('expected {"single": v} or {"pair": [v, w]}', path)


def _pair(space: AlternativeSpace, v, path: str) -> ExtElem:
    ends = _R.arr(v, path)
    if len(ends) != 2:
        raise ParseError("a pair has exactly two endpoints", path)
    i, j = _alt(space, ends[0], path + "[0]"), _alt(space, ends[1], path + "[1]")
    if j != i + 1:
        raise ParseError(f"{space.label(ExtElem.single(i))} and {space.label(ExtElem.single(j))} are not adjacent alternatives", path)
    return ExtElem.pair(i)


def _count_pairs(v, path: str) -> frozenset[tuple[int, int]]:
    out = set()
    for k, q in enumerate(_R.arr(v, path)):
        p = f"{path}[{k}]"
        q = _R.arr(q, p)
        if len(q) != 2:
            raise ParseError("expected [A-count, D-count]", p)
        out.add((_R.int_(q[0], p + "[0]"), _R.int_(q[1], p + "[1]")))
    return frozenset(out)


def _coalitions(v, path: str, n: int) -> frozenset[frozenset[int]]:
    out = set()
    for k, c in enumerate(_R.arr(v, path)):
        p = f"{path}[{k}]"
        members = [_R.int_(x, f"{p}[{t}]") for t, x in enumerate(_R.arr(c, p))]
        if any(not 0 <= x < n for x in members):
            raise ParseError(f"agent index outside 0..{n - 1}", p)
        out.add(frozenset(members))
    return frozenset(out)


def parse_rule(text: str):
    """A MedianRule or CoalitionRule; rule-level conditions are left to validation."""
    doc = _load_json(text)
    rep = doc.get("representation") if isinstance(doc, dict) else None
    base = {"omega", "agents", "representation"}
    if rep == "median":
        _R.obj(doc, "$", base | {"phantoms"}, {"quotas"})
    elif rep == "coalition":
        form = doc.get("form", "type_anonymous")
        if form == "type_anonymous":
            _R.obj(doc, "$", base | {"range", "thresholds"}, {"form", "decisive"})
        elif form == "general":
            _R.obj(doc, "$", base | {"range", "coalitions", "form"}, {"decisive", "claims_type_anonymous"})
        else:
            raise ParseError('form must be "type_anonymous" or "general"', "$.form")
    else:
        _R.obj(doc, "$", base, set(doc) - base if isinstance(doc, dict) else set())
        raise ParseError('representation must be "median" or "coalition"', "$.representation")

    omega = _R.arr(doc["omega"], "$.omega")
    try:
        space = AlternativeSpace(tuple(_R.rational(v, f"$.omega[{k}]") for k, v in enumerate(omega)))
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), "$.omega") from None
    ag = _R.obj(doc["agents"], "$.agents", {"a", "d"})
    try:
        part = AgentPartition(_R.int_(ag["a"], "$.agents.a"), _R.int_(ag["d"], "$.agents.d"))
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), "$.agents") from None

    if rep == "median":
        phantoms = tuple(_elem(space, v, f"$.phantoms[{k}]") for k, v in enumerate(_R.arr(doc["phantoms"], "$.phantoms")))
        quotas = {}
        for k, entry in enumerate(_R.arr(doc.get("quotas", []), "$.quotas")):
            p = f"$.quotas[{k}]"
            _R.obj(entry, p, {"pair", "quotas"})
            pair = _pair(space, entry["pair"], p + ".pair")
            if pair in quotas:
                raise ParseError("duplicate entry for this pair", p)
            quotas[pair] = QuotaSet(pair, frozenset(DoubleQuota(*q) for q in _count_pairs(entry["quotas"], p + ".quotas")))
        return MedianRule(space, part, phantoms, quotas)

    general = doc.get("form") == "general"
    rng = tuple(_elem(space, v, f"$.range[{k}]") for k, v in enumerate(_R.arr(doc["range"], "$.range")))
    if len(set(rng)) != len(rng):
        raise ParseError("range lists an element twice", "$.range")
    if general:
        claim = doc.get("claims_type_anonymous", False)
        if not isinstance(claim, bool):
            raise ParseError("expected true or false", "$.claims_type_anonymous")
        minimal = {}
        for k, entry in enumerate(_R.arr(doc["coalitions"], "$.coalitions")):
            p = f"$.coalitions[{k}]"
            _R.obj(entry, p, {"element", "minimal"})
            e = _elem(space, entry["element"], p + ".element")
            if e in minimal:
                raise ParseError("duplicate entry for this element", p)
            minimal[e] = _coalitions(entry["minimal"], p + ".minimal", part.n)
        lcs = LeftCoalitionSystem(rng, part.a, minimal=minimal, claims_anonymous=claim)
    else:
        claim = True
        thresholds = {}
        for k, entry in enumerate(_R.arr(doc["thresholds"], "$.thresholds")):
            p = f"$.thresholds[{k}]"
            _R.obj(entry, p, {"element", "threshold"})
            e = _elem(space, entry["element"], p + ".element")
            if e in thresholds:
                raise ParseError("duplicate entry for this element", p)
            thresholds[e] = _R.int_(entry["threshold"], p + ".threshold")
        lcs = LeftCoalitionSystem(rng, part.a, thresholds=thresholds)
    field_name = "coalitions" if general else "count_pairs"
    entries = {}
    for k, entry in enumerate(_R.arr(doc.get("decisive", []), "$.decisive")):
        p = f"$.decisive[{k}]"
        _R.obj(entry, p, {"pair", field_name})
        pair = _pair(space, entry["pair"], p + ".pair")
        if pair in entries:
            raise ParseError("duplicate entry for this pair", p)
        if general:
            entries[pair] = _coalitions(entry["coalitions"], p + ".coalitions", part.n)
        else:
            entries[pair] = _count_pairs(entry["count_pairs"], p + ".count_pairs")
    dec = DecisiveSets(coalitions=entries, claims_anonymous=claim) if general else DecisiveSets(counts=entries)
    try:
        return CoalitionRule(space, part, lcs, dec)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def parse_profile(text: str, space: AlternativeSpace, partition: AgentPartition) -> Profile:
    doc = _R.obj(_load_json(text), "$", {"peaks"}, {"dips"})
    peaks = [_alt(space, v, f"$.peaks[{k}]") for k, v in enumerate(_R.arr(doc["peaks"], "$.peaks"))]
    dips = [_alt(space, v, f"$.dips[{k}]") for k, v in enumerate(_R.arr(doc.get("dips", []), "$.dips"))]
    if len(peaks) != partition.a:
        raise ParseError(f"{len(peaks)} peaks given, the rule has {partition.a} peaked agents", "$.peaks")
    if len(dips) != partition.d:
        raise ParseError(f"{len(dips)} dips given, the rule has {partition.d} dipped agents", "$.dips")
    return Profile(tuple(peaks), tuple(dips))


def load_rule(path: str | Path):
    return parse_rule(Path(path).read_text())


def load_profile(path: str | Path, space: AlternativeSpace, partition: AgentPartition) -> Profile:
    return parse_profile(Path(path).read_text(), space, partition)


# ---------------------------------------------------------------- writing

def _value(space: AlternativeSpace, i: int):
    x = space.value(i)
    return x.numerator if x.denominator == 1 else format_rational(x)


def _elem_doc(space: AlternativeSpace, e: ExtElem) -> dict:
    if e.is_pair:
        return {"pair": [_value(space, e.left), _value(space, e.right)]}
    return {"single": _value(space, e.index)}


def _sorted_coalitions(fam) -> list[list[int]]:
    return sorted((sorted(s) for s in fam), key=lambda c: (len(c), c))


def rule_to_document(rule) -> dict:
    space = rule.space
    doc: dict = {
        "omega": [_value(space, i) for i in range(space.m)],
        "agents": {"a": rule.partition.a, "d": rule.partition.d},
    }
    if isinstance(rule, MedianRule):
        doc["representation"] = "median"
        doc["phantoms"] = [_elem_doc(space, g) for g in rule.phantoms]
        doc["quotas"] = [
            {"pair": _elem_doc(space, p)["pair"], "quotas": sorted([q.qa, q.qd] for q in rule.quota_sets[p].quotas)}
            for p in sorted(rule.quota_sets)
        ]
        return doc
    doc["representation"] = "coalition"
    lcs, dec = rule.lcs, rule.decisive
    doc["range"] = [_elem_doc(space, e) for e in lcs.range]
    if rule.is_threshold_form:
        doc["form"] = "type_anonymous"
        doc["thresholds"] = [{"element": _elem_doc(space, e), "threshold": lcs.thresholds[e]}
                             for e in sorted(lcs.thresholds)]
        doc["decisive"] = [{"pair": _elem_doc(space, p)["pair"], "count_pairs": sorted(list(c) for c in dec.counts[p])}
                           for p in dec.pairs()]
        return doc
    rule = rule.to_general()
    lcs, dec = rule.lcs, rule.decisive
    doc["form"] = "general"
    doc["claims_type_anonymous"] = rule.type_anonymous
    doc["coalitions"] = [{"element": _elem_doc(space, e), "minimal": _sorted_coalitions(lcs.minimal[e])}
                         for e in sorted(lcs.minimal)]
    doc["decisive"] = [{"pair": _elem_doc(space, p)["pair"], "coalitions": _sorted_coalitions(dec.coalitions[p])}
                       for p in dec.pairs()]
    return doc


def dump_rule(rule) -> str:
    return json.dumps(rule_to_document(rule), indent=2) + "\n"


def profile_to_document(space: AlternativeSpace, profile: Profile) -> dict:
    return {"peaks": [_value(space, i) for i in profile.peaks], "dips": [_value(space, i) for i in profile.dips]}
