"""Conversions between the phantom/quota and the coalition representations.

Median to coalition: the range is the interior plus the phantoms, and a
peaked coalition wins at ``alpha`` iff it has at least ``a + 1`` minus the
number of phantoms at or left of ``alpha`` members. Quotas become count
pairs one for one.

Coalition to median: phantoms go where the winning threshold drops, with
the remainder at the range maximum. Only type-anonymous rules can be
converted in this direction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .audit import AuditBudget, Witness, check_equivalence
from .coalition import CoalitionRule, DecisiveSets, LeftCoalitionSystem, count_pair
from .domain import AgentPartition, ExtElem
from .median import DoubleQuota, MedianRule, QuotaSet
from .validation import Violation

#: Pointwise comparison is exhaustive up to this many profiles ...
CONVERSION_EXHAUSTIVE_LIMIT = 10**6
#: ... and otherwise uses this many seeded uniform samples.
CONVERSION_SAMPLES = 10**5


class InexpressibleConversion(ValueError):
    """The target representation cannot express the source rule."""


@dataclass
class ConversionReport:
    source: str
    target: str
    trace: list[str] = field(default_factory=list)
    equal: bool | None = None
    exhaustive: bool = False
    examined: int = 0
    counterexample: Witness | None = None
    findings: list[Violation] = field(default_factory=list)

    def as_dict(self, space=None) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "trace": list(self.trace),
            "behaviorally_equal": self.equal,
            "exhaustive": self.exhaustive,
            "profiles_compared": self.examined,
            "counterexample": None if self.counterexample is None else self.counterexample.as_dict(space),
            "findings": [f.as_dict() for f in self.findings],
        }


def representation_of(rule) -> str:
    if isinstance(rule, MedianRule):
        return "median"
    if isinstance(rule, CoalitionRule):
        return "coalition" if rule.is_threshold_form else "coalition-general"
    raise TypeError(f"not a rule: {rule!r}")


def phantoms_to_lcs(rule: MedianRule, trace: list[str] | None = None) -> LeftCoalitionSystem:
    a = rule.a
    rng = rule.range
    thresholds = {}
    for alpha in rng[:-1]:
        thresholds[alpha] = a + 1 - rule.count_phantoms_at(alpha)[1]
    top = rng[-1]
    # At the top every non-empty coalition wins; the empty one too when the
    # top is a pair, when nobody is peaked, or when the range is one point.
    thresholds[top] = 0 if top.is_pair or a == 0 or len(rng) == 1 else 1
    if trace is not None:
        for alpha in rng:
            trace.append(f"threshold {rule.space.label(alpha)} = {thresholds[alpha]}")
    return LeftCoalitionSystem(rng, a, thresholds=thresholds)


def lcs_to_phantoms(lcs: LeftCoalitionSystem, trace: list[str] | None = None, space=None) -> tuple[ExtElem, ...]:
    """Place ``a + 1`` phantoms where the winning threshold changes."""
    if not lcs.type_anonymous:
        raise InexpressibleConversion("phantoms can only describe a type-anonymous coalition system")
    a = lcs.a
    rng = lcs.range
    sizes = {e: lcs.smallest_size(e) for e in rng}
    placed: list[ExtElem] = []
    label = space.label if space is not None else repr
    for idx, alpha in enumerate(rng):
        if idx == len(rng) - 1:
            count = a + 1 - len(placed)
        elif idx == 0:
            count = a + 1 - sizes[alpha]
        elif sizes[alpha] != sizes[rng[idx - 1]]:
            count = (a + 1 - sizes[alpha]) - len(placed)
        else:
            count = 0
        count = max(count, 0)
        placed += [alpha] * count
        if trace is not None and count:
            trace.append(f"{count} phantom(s) at {label(alpha)}")
    return tuple(placed)


def quotas_to_decisive(qs: QuotaSet) -> frozenset[tuple[int, int]]:
    return frozenset((q.qa, q.qd) for q in qs.quotas)


def decisive_to_quotas(pair: ExtElem, decisive: DecisiveSets, partition: AgentPartition) -> QuotaSet:
    """One double quota per distinct count pair among the minimal decisive coalitions."""
    if decisive.counts is not None:
        cps = decisive.counts[pair]
    else:
        if not decisive.count_closed(pair, partition):
            raise InexpressibleConversion(f"decisive coalitions at {pair!r} depend on agent identities")
        cps = {count_pair(s, partition) for s in decisive.coalitions[pair]}
    return QuotaSet(pair, frozenset(DoubleQuota(*c) for c in cps))


def median_to_coalition(rule: MedianRule, trace: list[str] | None = None) -> CoalitionRule:
    lcs = phantoms_to_lcs(rule, trace)
    counts = {p: quotas_to_decisive(qs) for p, qs in rule.quota_sets.items() if p in lcs.range}
    return CoalitionRule(rule.space, rule.partition, lcs, DecisiveSets(counts=counts))


def coalition_to_median(rule: CoalitionRule, trace: list[str] | None = None) -> MedianRule:
    try:
        rule = rule.to_threshold()
    except ValueError as exc:
        raise InexpressibleConversion(str(exc)) from None
    space, a = rule.space, rule.partition.a
    label = space.label
    phantoms = lcs_to_phantoms(rule.lcs, trace, space)
    target_range = set(space.interior) | set(phantoms)
    quotas = {}
    for p, cps in rule.decisive.counts.items():
        if p not in target_range:
            if trace is not None:
                trace.append(f"decisive sets at {label(p)} dropped: the pair is never reached")
            continue
        # Only A-counts in [n_pair, n_left - 1] ever occur at this pair, so
        # quotas are clamped into that window before re-minimizing.
        lo = rule.lcs.thresholds[p]
        left = ExtElem.single(p.left)
        hi = rule.lcs.thresholds[left] - 1 if left in rule.lcs.range else a
        window = {(max(qa, lo), qd) for qa, qd in cps if qa <= hi}
        kept = frozenset(q for q in window if not any(r != q and r[0] <= q[0] and r[1] <= q[1] for r in window))
        if kept != cps and trace is not None:
            trace.append(f"quotas at {label(p)} normalized to the reachable A-counts {lo}..{hi}")
        quotas[p] = QuotaSet(p, frozenset(DoubleQuota(*q) for q in kept))
    return MedianRule(space, rule.partition, phantoms, quotas)


def convert_rule(rule, to: str, budget: AuditBudget | None = None) -> tuple[object, ConversionReport]:
    """Convert and then compare the two rules profile by profile."""
    if budget is None:
        budget = AuditBudget(max_exhaustive=CONVERSION_EXHAUSTIVE_LIMIT, samples=CONVERSION_SAMPLES)
    source = representation_of(rule)
    report = ConversionReport(source, to)
    if to == "coalition":
        out = median_to_coalition(rule, report.trace) if isinstance(rule, MedianRule) else _to_threshold(rule)
        report.findings = list(out.validate().violations)
    elif to == "median":
        out = rule if isinstance(rule, MedianRule) else coalition_to_median(rule, report.trace)
        report.findings = list(out.validate().violations)
        if out.phantoms and out.phantoms[-1] not in {out.space.max_single, out.space.max_pair}:
            report.findings.append(Violation("PLACEMENT_GAP", "largest placed phantom is not at the top of the line"))
    else:
        raise ValueError(f"unknown target representation {to!r}")
    res = check_equivalence(rule, out, budget)
    report.equal = res.witness is None
    report.exhaustive = res.exhaustive
    report.examined = res.examined
    report.counterexample = res.witness
    return out, report


def _to_threshold(rule: CoalitionRule) -> CoalitionRule:
    try:
        return rule.to_threshold()
    except ValueError as exc:
        raise InexpressibleConversion(str(exc)) from None
