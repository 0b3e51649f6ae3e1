"""Left coalition systems and left-decisive sets.

The first step walks the range from the left and stops at the first
element whose left-support coalition (peaked agents whose peak is at or
left of it) is winning for that element. If it stops on a pair, the
pair's left endpoint wins iff the agents preferring it contain some
left-decisive coalition.

Both families come in two forms. The type-anonymous form stores only
sizes: one threshold per range element and a set of (A-count, D-count)
pairs per range pair. The general form stores explicit antichains of
minimal coalitions, which is what a merely strategy-proof rule needs.
Coalitions are frozensets of agent indices; peaked agents are 0..a-1,
dipped agents a..n-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from .domain import (
    AgentPartition,
    AlternativeSpace,
    ExtElem,
    Kind,
    Profile,
    Side,
    check_profile,
    is_antichain,
    minimal_sets,
    pair_preference,
)
from .validation import ValidationReport

Coalition = frozenset
MAX_ENUMERATED_AGENTS = 20


def _subsets(items: Sequence[int], guard: int = MAX_ENUMERATED_AGENTS):
    if len(items) > guard:
        raise ValueError(f"refusing to enumerate subsets of {len(items)} agents (limit {guard})")
    for k in range(len(items) + 1):
        for c in combinations(items, k):
            yield frozenset(c)


@dataclass(frozen=True)
class LeftCoalitionSystem:
    """Winning coalitions of peaked agents for each element of the range.

    Give ``thresholds`` (element -> smallest winning size; ``a + 1`` means
    nothing wins) for the type-anonymous form, or ``minimal`` (element ->
    antichain of minimal winning coalitions) for the general form.
    """

    range: tuple[ExtElem, ...]
    a: int
    thresholds: Mapping[ExtElem, int] | None = None
    minimal: Mapping[ExtElem, frozenset[frozenset[int]]] | None = None
    claims_anonymous: bool = False

    def __post_init__(self):
        object.__setattr__(self, "range", tuple(sorted(set(self.range))))
        if (self.thresholds is None) == (self.minimal is None):
            raise ValueError("give exactly one of thresholds or minimal coalitions")
        if self.thresholds is not None:
            object.__setattr__(self, "thresholds", {k: int(v) for k, v in self.thresholds.items()})
            object.__setattr__(self, "claims_anonymous", True)
        else:
            fam = {k: frozenset(frozenset(s) for s in v) for k, v in self.minimal.items()}
            object.__setattr__(self, "minimal", fam)

    @property
    def type_anonymous(self) -> bool:
        """True for the threshold form, or when the general form claims it."""
        return self.claims_anonymous

    @property
    def is_threshold_form(self) -> bool:
        return self.thresholds is not None

    def contains(self, alpha: ExtElem, coalition: frozenset[int]) -> bool:
        if self.thresholds is not None:
            return len(coalition) >= self.thresholds[alpha]
        return any(s <= coalition for s in self.minimal[alpha])

    def family(self, alpha: ExtElem) -> frozenset[frozenset[int]]:
        """Minimal winning coalitions of ``alpha``."""
        if self.minimal is not None:
            return self.minimal[alpha]
        k = self.thresholds[alpha]
        if k > self.a:
            return frozenset()
        return frozenset(frozenset(c) for c in combinations(range(self.a), k))

    def smallest_size(self, alpha: ExtElem) -> int:
        """Size of the smallest winning coalition, ``a + 1`` if none wins."""
        if self.thresholds is not None:
            return self.thresholds[alpha]
        fam = self.minimal[alpha]
        return min((len(s) for s in fam), default=self.a + 1)

    def to_general(self) -> LeftCoalitionSystem:
        return LeftCoalitionSystem(
            self.range, self.a, minimal={e: self.family(e) for e in self.range},
            claims_anonymous=self.type_anonymous,
        )

    def size_closed(self, alpha: ExtElem) -> bool:
        if self.thresholds is not None:
            return True
        agents = list(range(self.a))
        sizes = {len(s) for s in self.minimal[alpha]}
        return all(self.contains(alpha, frozenset(c)) for k in sizes for c in combinations(agents, k))

    def to_threshold(self, label=repr) -> LeftCoalitionSystem:
        if self.thresholds is not None:
            return self
        bad = [e for e in self.range if e in self.minimal and not self.size_closed(e)]
        if bad:
            raise ValueError(f"winning coalitions at {', '.join(map(label, bad))} depend on agent identities")
        return LeftCoalitionSystem(self.range, self.a, thresholds={e: self.smallest_size(e) for e in self.range})


@dataclass(frozen=True)
class DecisiveSets:
    """Left-decisive coalitions per range pair.

    ``counts`` maps each pair to an antichain of (A-count, D-count) pairs
    (type-anonymous form); ``coalitions`` maps it to an antichain of
    explicit coalitions over all agents (general form).
    """

    counts: Mapping[ExtElem, frozenset[tuple[int, int]]] | None = None
    coalitions: Mapping[ExtElem, frozenset[frozenset[int]]] | None = None
    claims_anonymous: bool = False

    def __post_init__(self):
        if self.counts is None and self.coalitions is None:
            object.__setattr__(self, "counts", {})
        if self.counts is not None and self.coalitions is not None:
            raise ValueError("give exactly one of counts or coalitions")
        if self.counts is not None:
            object.__setattr__(self, "counts", {k: frozenset((int(x), int(y)) for x, y in v)
                                                for k, v in self.counts.items()})
            object.__setattr__(self, "claims_anonymous", True)
        else:
            object.__setattr__(self, "coalitions", {k: frozenset(frozenset(s) for s in v)
                                                    for k, v in self.coalitions.items()})

    @property
    def type_anonymous(self) -> bool:
        return self.claims_anonymous

    @property
    def is_count_form(self) -> bool:
        return self.counts is not None

    def pairs(self) -> tuple[ExtElem, ...]:
        src = self.counts if self.counts is not None else self.coalitions
        return tuple(sorted(src))

    def decides_left(self, pair: ExtElem, supporters: frozenset[int], partition: AgentPartition) -> bool:
        if self.counts is not None:
            ca = sum(1 for i in supporters if i < partition.a)
            cd = len(supporters) - ca
            return any(ca >= qa and cd >= qd for qa, qd in self.counts[pair])
        return any(s <= supporters for s in self.coalitions[pair])

    def expand(self, pair: ExtElem, partition: AgentPartition) -> frozenset[frozenset[int]]:
        if self.coalitions is not None:
            return self.coalitions[pair]
        return expand_count_pairs(self.counts[pair], partition)

    def to_general(self, partition: AgentPartition) -> DecisiveSets:
        return DecisiveSets(coalitions={p: self.expand(p, partition) for p in self.pairs()},
                            claims_anonymous=self.type_anonymous)

    def count_closed(self, pair: ExtElem, partition: AgentPartition) -> bool:
        if self.counts is not None:
            return True
        fam = self.coalitions[pair]
        keys = {count_pair(s, partition) for s in fam}
        return expand_count_pairs(keys, partition) <= fam

    def to_counts(self, partition: AgentPartition, label=repr) -> DecisiveSets:
        if self.counts is not None:
            return self
        bad = [p for p in self.pairs() if not self.count_closed(p, partition)]
        if bad:
            raise ValueError(f"decisive coalitions at {', '.join(map(label, bad))} depend on agent identities")
        return DecisiveSets(counts={p: frozenset(count_pair(s, partition) for s in self.coalitions[p])
                                    for p in self.pairs()})


def count_pair(coalition: frozenset[int], partition: AgentPartition) -> tuple[int, int]:
    ca = sum(1 for i in coalition if i < partition.a)
    return ca, len(coalition) - ca


def expand_count_pairs(pairs, partition: AgentPartition) -> frozenset[frozenset[int]]:
    """Every coalition whose (A-count, D-count) is one of ``pairs``."""
    out = set()
    for qa, qd in pairs:
        if qa > partition.a or qd > partition.d or qa < 0 or qd < 0:
            continue
        for sa in combinations(partition.peaked, qa):
            for sd in combinations(partition.dipped, qd):
                out.add(frozenset(sa + sd))
    return frozenset(out)


@dataclass(frozen=True)
class CoalitionRule:
    space: AlternativeSpace
    partition: AgentPartition
    lcs: LeftCoalitionSystem
    decisive: DecisiveSets

    def __post_init__(self):
        if self.lcs.a != self.partition.a:
            raise ValueError("coalition system and partition disagree on the number of peaked agents")
        for e in self.lcs.range:
            if not self.space.contains(e):
                raise ValueError(f"range element {e!r} is not in the extended order")
        for p in self.decisive.pairs():
            if not p.is_pair or not self.space.contains(p):
                raise ValueError(f"decisive sets keyed by {p!r}, which is not a pair")

    @property
    def range(self) -> tuple[ExtElem, ...]:
        return self.lcs.range

    @property
    def type_anonymous(self) -> bool:
        return self.lcs.type_anonymous and self.decisive.type_anonymous

    @property
    def is_threshold_form(self) -> bool:
        return self.lcs.is_threshold_form and self.decisive.is_count_form

    def support(self, peaks: Sequence[int], alpha: ExtElem) -> frozenset[int]:
        return frozenset(i for i, p in enumerate(peaks) if 2 * p <= alpha.key)

    def omega(self, peaks: Sequence[int]) -> ExtElem:
        for alpha in self.lcs.range:
            if self.lcs.contains(alpha, self.support(peaks, alpha)):
                return alpha
        raise ValueError("no range element has a winning support coalition; the system is not well defined")

    first_step = omega

    def left_supporters(self, profile: Profile, pair: ExtElem) -> frozenset[int]:
        a = self.partition.a
        sup = [i for i, p in enumerate(profile.peaks) if pair_preference(Kind.PEAKED, p, pair) is Side.LEFT]
        sup += [a + j for j, x in enumerate(profile.dips) if pair_preference(Kind.DIPPED, x, pair) is Side.LEFT]
        return frozenset(sup)

    def second_step(self, pair: ExtElem, profile: Profile) -> Side:
        if pair not in self.decisive.pairs():
            raise ValueError(f"no decisive sets for reachable pair {self.space.label(pair)}")
        sup = self.left_supporters(profile, pair)
        return Side.LEFT if self.decisive.decides_left(pair, sup, self.partition) else Side.RIGHT

    def evaluate(self, profile: Profile) -> int:
        check_profile(self.space, self.partition, profile)
        return self._evaluate(profile)

    def _evaluate(self, profile: Profile) -> int:
        e = self.omega(profile.peaks)
        if not e.is_pair:
            return e.index
        return e.left if self.second_step(e, profile) is Side.LEFT else e.right

    def to_general(self) -> CoalitionRule:
        return CoalitionRule(self.space, self.partition, self.lcs.to_general(),
                             self.decisive.to_general(self.partition))

    def to_threshold(self) -> CoalitionRule:
        """Size-only form; raises ValueError if the rule depends on identities."""
        label = self.space.label
        return CoalitionRule(self.space, self.partition, self.lcs.to_threshold(label),
                             self.decisive.to_counts(self.partition, label))

    def validate(self, reachability_budget: int = 10**6) -> ValidationReport:
        return validate_coalition_rule(self, reachability_budget)


def omega_eval(rule: CoalitionRule, peaks: Sequence[int]) -> ExtElem:
    return rule.omega(peaks)


def g_eval(rule: CoalitionRule, profile: Profile, pair: ExtElem) -> Side:
    return rule.second_step(pair, profile)


def eval_coalition_rule(rule: CoalitionRule, profile: Profile) -> int:
    return rule.evaluate(profile)


def minimal_coalitions_of_difference(
    lcs: LeftCoalitionSystem, x: ExtElem | None, pair: ExtElem
) -> frozenset[frozenset[int]]:
    """Minimal members of L(pair) minus L(x).

    ``x`` may be None (or outside the range), in which case L(x) is empty:
    only the leftmost pair can follow a missing left endpoint.
    """
    if x is not None and x.is_pair:
        raise ValueError("x must be a single alternative")
    in_x = x is not None and x in lcs.range
    diff = [s for s in _subsets(list(range(lcs.a)))
            if lcs.contains(pair, s) and not (in_x and lcs.contains(x, s))]
    return minimal_sets(diff)


def reachable_elements(rule: CoalitionRule, budget: int = 10**6) -> set[ExtElem] | None:
    """Range elements the first step actually returns, or None if m**a is over budget."""
    from itertools import product

    m, a = rule.space.m, rule.partition.a
    if m ** a > budget:
        return None
    seen = set()
    for peaks in product(range(m), repeat=a):
        seen.add(rule.omega(peaks))
        if len(seen) == len(rule.range):
            break
    return seen


def validate_coalition_rule(rule: CoalitionRule, reachability_budget: int = 10**6) -> ValidationReport:
    rep = ValidationReport()
    space, part = rule.space, rule.partition
    lcs, dec = rule.lcs, rule.decisive
    rng = lcs.range
    label = space.label
    a, d = part.a, part.d
    full_a = frozenset(range(a))

    for c in ("RANGE_I", "RANGE_II", "RANGE_III"):
        rep.check(c)
    rset = set(rng)
    if not rng:
        rep.fail("RANGE_III", "the range is empty")
        return rep
    lows = {space.min_single, space.min_pair} - {None}
    highs = {space.max_single, space.max_pair} - {None}
    if not rset & lows:
        rep.fail("RANGE_I", "range holds neither the minimum alternative nor the minimum pair")
    if not rset & highs:
        rep.fail("RANGE_II", "range holds neither the maximum alternative nor the maximum pair")
    for e in space.interior:
        if e not in rset:
            rep.fail("RANGE_III", f"interior alternative {label(e)} missing from the range")

    rep.check("LCS_KEYS")
    given = set(lcs.thresholds if lcs.thresholds is not None else lcs.minimal)
    for e in sorted(rset - given):
        rep.fail("LCS_KEYS", f"no winning coalitions given for {label(e)}")
    for e in sorted(given - rset):
        rep.fail("LCS_KEYS", f"winning coalitions given for {label(e)}, which is outside the range")
    if not rep.ok:
        return rep

    rep.check("DEF4_I")
    if lcs.thresholds is not None:
        for e in rng:
            if not 0 <= lcs.thresholds[e] <= a + 1:
                rep.fail("DEF4_I", f"{label(e)}: threshold {lcs.thresholds[e]} outside 0..{a + 1}")
    else:
        for e in rng:
            fam = lcs.minimal[e]
            if any(not s <= full_a for s in fam):
                rep.fail("DEF4_I", f"{label(e)}: coalition with agents outside the peaked group")
            if not is_antichain(fam):
                rep.fail("DEF4_I", f"{label(e)}: listed coalitions are not inclusion-minimal")

    rep.check("DEF4_II")
    for lo, hi in zip(rng, rng[1:]):
        if lcs.thresholds is not None:
            ok = lcs.thresholds[lo] >= lcs.thresholds[hi]
        else:
            ok = all(lcs.contains(hi, s) for s in lcs.minimal[lo])
        if not ok:
            rep.fail("DEF4_II", f"a coalition winning at {label(lo)} does not win at {label(hi)}")

    rep.check("DEF4_III")  # a finite set of alternatives always has a maximum
    rep.check("DEF4_IV")
    top = rng[-1]
    empty = frozenset()
    if space.max_single not in rset and not lcs.contains(top, empty):
        rep.fail("DEF4_IV", f"the maximum alternative is outside the range, so the empty coalition must win at {label(top)}")
    for e in rng[:-1]:
        if lcs.contains(e, empty):
            rep.fail("DEF4_IV", f"the empty coalition wins at {label(e)}, which is not the range maximum")

    rep.check("WELL_DEFINED")
    if not lcs.contains(top, full_a):
        rep.fail("WELL_DEFINED", f"the whole peaked group does not win at the range maximum {label(top)}")

    rep.check("DEF4_V")
    if lcs.thresholds is None:
        bad = [e for e in rng if not lcs.size_closed(e)]
        if bad:
            rep.anonymity_failures.append("DEF4_V")
            if lcs.claims_anonymous:
                for e in bad:
                    rep.fail("DEF4_V", f"{label(e)}: winning depends on which peaked agents form the coalition")

    pairs = [e for e in rng if e.is_pair]
    rep.check("DECISIVE_KEYS")
    dkeys = set(dec.pairs())
    for p in sorted(set(pairs) - dkeys):
        rep.fail("DECISIVE_KEYS", f"range pair {label(p)} has no decisive sets")
    for p in sorted(dkeys - set(pairs)):
        rep.fail("DECISIVE_KEYS", f"decisive sets given for {label(p)}, which is outside the range")

    for c in ("DEF6_I", "DEF6_II", "DEF6_III", "DEF6_IV"):
        rep.check(c)
    anon_w = True
    for p in sorted(set(pairs) & dkeys):
        where = label(p)
        if dec.counts is not None:
            cps = sorted(dec.counts[p])
            for qa, qd in cps:
                if not (0 <= qa <= a) or not (1 <= qd <= d):
                    rep.fail("DEF6_I", f"{where}: count pair {(qa, qd)} needs 0<=A<={a} and 1<=D<={d}")
            for i, q in enumerate(cps):
                for r in cps[i + 1:]:
                    if (q[0] >= r[0] and q[1] >= r[1]) or (r[0] >= q[0] and r[1] >= q[1]):
                        rep.fail("DEF6_III", f"{where}: count pairs {q} and {r} are comparable")
            a_parts = {qa for qa, _ in cps}
        else:
            fam = dec.coalitions[p]
            for s in fam:
                if any(not 0 <= i < part.n for i in s):
                    rep.fail("DEF6_I", f"{where}: coalition {sorted(s)} names unknown agents")
                elif not any(i >= a for i in s):
                    rep.fail("DEF6_I", f"{where}: coalition {sorted(s)} has no dipped agent")
            if not is_antichain(fam):
                rep.fail("DEF6_III", f"{where}: decisive coalitions are not an antichain")
            if not dec.count_closed(p, part):
                anon_w = False
            a_parts = None
        x = ExtElem.single(p.left)
        try:
            bs = minimal_coalitions_of_difference(lcs, x, p)
        except ValueError as exc:
            rep.warn("DEF6_II_SKIPPED", f"{where}: {exc}")
            continue
        for b in sorted(bs, key=sorted):
            if a_parts is not None:
                found = len(b) in a_parts
            else:
                found = any(s & full_a == b for s in dec.coalitions[p])
            if not found:
                rep.fail("DEF6_II", f"{where}: minimal support {sorted(b)} has no decisive coalition with that peaked part")
    if not anon_w:
        rep.anonymity_failures.append("DEF6_IV")
        if dec.claims_anonymous:
            rep.fail("DEF6_IV", "decisive coalitions depend on agent identities")

    if rep.ok:
        seen = reachable_elements(rule, reachability_budget)
        if seen is None:
            rep.warn("REACHABILITY_SKIPPED", f"m**a exceeds {reachability_budget}; reachability not checked")
        else:
            for e in rng:
                if e not in seen:
                    rep.warn("UNREACHABLE", f"{label(e)} is never returned by the first step")
    return rep
