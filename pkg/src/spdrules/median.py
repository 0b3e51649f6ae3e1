"""Mixed median over peaks and phantoms, then double-quota majority votes.

The first step takes the median of the a reported peaks and a+1 fixed
phantoms under the interleaved order. Phantoms may sit on contiguous pairs,
so the median can be a pair; in that case a set of double quotas decides
between the pair's endpoints using how many peaked and how many dipped
agents prefer the left endpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

from .domain import (
    AgentPartition,
    AlternativeSpace,
    ExtElem,
    Kind,
    Profile,
    Side,
    check_profile,
    pair_preference,
)
from .validation import ValidationReport


class DoubleQuota(NamedTuple):
    qa: int
    qd: int

    def met_by(self, ca: int, cd: int) -> bool:
        return ca >= self.qa and cd >= self.qd


@dataclass(frozen=True)
class QuotaSet:
    pair: ExtElem
    quotas: frozenset[DoubleQuota]

    def __post_init__(self):
        object.__setattr__(self, "quotas", frozenset(DoubleQuota(*q) for q in self.quotas))


def quota_decide(qs: QuotaSet | Iterable[DoubleQuota], counts: tuple[int, int]) -> Side:
    """Left iff the support counts meet some double quota componentwise."""
    quotas = qs.quotas if isinstance(qs, QuotaSet) else qs
    ca, cd = counts
    return Side.LEFT if any(DoubleQuota(*q).met_by(ca, cd) for q in quotas) else Side.RIGHT


@dataclass(frozen=True)
class MedianRule:
    space: AlternativeSpace
    partition: AgentPartition
    phantoms: tuple[ExtElem, ...]
    quota_sets: Mapping[ExtElem, QuotaSet] = field(default_factory=dict)

    def __post_init__(self):
        phantoms = tuple(sorted(self.phantoms))
        for g in phantoms:
            if not self.space.contains(g):
                raise ValueError(f"phantom {g!r} is not an element of the extended order")
        quota_sets = {}
        for key, qs in dict(self.quota_sets).items():
            if not isinstance(qs, QuotaSet):
                qs = QuotaSet(key, frozenset(qs))
            if qs.pair != key or not key.is_pair or not self.space.contains(key):
                raise ValueError(f"quota set keyed by {key!r} is not a valid pair entry")
            quota_sets[key] = qs
        object.__setattr__(self, "phantoms", phantoms)
        object.__setattr__(self, "quota_sets", quota_sets)

    @property
    def a(self) -> int:
        return self.partition.a

    @property
    def range(self) -> tuple[ExtElem, ...]:
        """Everything the first step can return: interior points and phantoms."""
        return tuple(sorted(set(self.space.interior) | set(self.phantoms)))

    @property
    def reachable_pairs(self) -> tuple[ExtElem, ...]:
        return tuple(e for e in self.range if e.is_pair)

    def count_phantoms_at(self, e: ExtElem) -> tuple[int, int]:
        """(phantoms equal to e, phantoms at or left of e)."""
        at = sum(1 for g in self.phantoms if g == e)
        upto = sum(1 for g in self.phantoms if g <= e)
        return at, upto

    def min_quota_a(self, pair: ExtElem) -> int:
        return self.a + 1 - self.count_phantoms_at(pair)[1]

    def mixed_median(self, peaks: Sequence[int]) -> ExtElem:
        keys = sorted([2 * p for p in peaks] + [g.key for g in self.phantoms])
        return ExtElem(keys[len(peaks)])

    first_step = mixed_median

    def second_step_counts(self, profile: Profile, pair: ExtElem) -> tuple[int, int]:
        ca = sum(1 for p in profile.peaks if pair_preference(Kind.PEAKED, p, pair) is Side.LEFT)
        cd = sum(1 for x in profile.dips if pair_preference(Kind.DIPPED, x, pair) is Side.LEFT)
        return ca, cd

    def second_step(self, pair: ExtElem, profile: Profile) -> Side:
        try:
            qs = self.quota_sets[pair]
        except KeyError:
            raise ValueError(f"no quota set for reachable pair {self.space.label(pair)}") from None
        return quota_decide(qs, self.second_step_counts(profile, pair))

    def evaluate(self, profile: Profile) -> int:
        check_profile(self.space, self.partition, profile)
        return self._evaluate(profile)

    def _evaluate(self, profile: Profile) -> int:
        e = self.mixed_median(profile.peaks)
        if not e.is_pair:
            return e.index
        return e.left if self.second_step(e, profile) is Side.LEFT else e.right

    def validate(self) -> ValidationReport:
        return validate_median_rule(self)


def count_phantoms_at(rule: MedianRule, e: ExtElem) -> tuple[int, int]:
    return rule.count_phantoms_at(e)


def mixed_median(rule: MedianRule, peaks: Sequence[int]) -> ExtElem:
    return rule.mixed_median(peaks)


def second_step_counts(rule: MedianRule, profile: Profile, pair: ExtElem) -> tuple[int, int]:
    return rule.second_step_counts(profile, pair)


def eval_median_rule(rule: MedianRule, profile: Profile) -> int:
    return rule.evaluate(profile)


def validate_median_rule(rule: MedianRule) -> ValidationReport:
    """Check the phantom and quota conditions; violations are returned, not raised."""
    rep = ValidationReport()
    space, a, d = rule.space, rule.partition.a, rule.partition.d
    ph = rule.phantoms
    label = space.label

    rep.check("DEF1_COUNT")
    if len(ph) != a + 1:
        rep.fail("DEF1_COUNT", f"{len(ph)} phantoms given, {a + 1} required")

    lows = {space.min_single, space.min_pair} - {None}
    highs = {space.max_single, space.max_pair} - {None}
    rep.check("DEF1_I")
    rep.check("DEF1_II")
    if ph:
        if ph[0] not in lows:
            rep.fail("DEF1_I", f"smallest phantom {label(ph[0])} is neither the minimum alternative nor the minimum pair")
        if ph[-1] not in highs:
            rep.fail("DEF1_II", f"largest phantom {label(ph[-1])} is neither the maximum alternative nor the maximum pair")

    rep.check("DEF1_NO_DIPPED")
    if d == 0 and any(g.is_pair for g in ph):
        rep.fail("DEF1_NO_DIPPED", "pair phantoms need at least one dipped agent to break the pair")

    rep.check("QUOTA_KEYS")
    expected = set(rule.reachable_pairs)
    given = set(rule.quota_sets)
    for p in sorted(expected - given):
        rep.fail("QUOTA_KEYS", f"reachable pair {label(p)} has no quota set")
    for p in sorted(given - expected):
        rep.fail("QUOTA_KEYS", f"quota set for {label(p)}, which the median never returns")

    for c in ("DEF2_I", "DEF2_II", "DEF2_III", "DEF2_BOUND"):
        rep.check(c)
    for pair in sorted(given & expected):
        quotas = sorted(rule.quota_sets[pair].quotas)
        where = label(pair)
        for q in quotas:
            if not (0 <= q.qa <= a):
                rep.fail("DEF2_I", f"{where}: A-quota {q.qa} outside 0..{a}")
            if not (1 <= q.qd <= d):
                rep.fail("DEF2_I", f"{where}: D-quota {q.qd} outside 1..{d}")
        for i, q in enumerate(quotas):
            for r in quotas[i + 1:]:
                if (q.qa >= r.qa and q.qd >= r.qd) or (r.qa >= q.qa and r.qd >= q.qd):
                    rep.fail("DEF2_II", f"{where}: quotas {tuple(q)} and {tuple(r)} are comparable")
        at, upto = rule.count_phantoms_at(pair)
        qmin = a + 1 - upto
        if not any(q.qa == qmin for q in quotas):
            rep.fail("DEF2_III", f"{where}: no quota with the minimal A-quota {qmin}")
        if len(quotas) > at:
            rep.fail("DEF2_BOUND", f"{where}: {len(quotas)} quotas but only {at} phantoms at the pair")
    return rep
