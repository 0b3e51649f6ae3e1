"""Brute-force checks of incentive and anonymity properties.

Every check runs on the full outcome table when ``m ** n`` fits in the
exhaustive budget and otherwise on seeded uniform samples of profiles.
Samples come from ``numpy.random.default_rng(seed)`` (PCG64), so a seed
pins the sampled profiles exactly.

Search orders are fixed so that "the first witness" is well defined:
manipulations go agent (or coalition), then the other agents' locations
in lexicographic order, then the deviators' true rankings in
lexicographic order, then misreports; anonymity checks go profile, then
transposition; equivalence checks go profile.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Protocol, Sequence

import numpy as np

from .domain import (
    AgentPartition,
    AlternativeSpace,
    ExtElem,
    Kind,
    Profile,
    Ranking,
    Side,
    enumerate_rankings,
    extended_order_elements,
    restricted_extremum,
)


class Rule(Protocol):
    """Anything with a space, a partition and ``evaluate``.

    Two-step rules also expose ``first_step`` and ``second_step``, which
    tabulation uses to skip the dips whenever the first step is a single.
    """

    space: AlternativeSpace
    partition: AgentPartition

    def evaluate(self, profile: Profile) -> int: ...


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class AuditBudget:
    max_exhaustive: int = 10**6
    samples: int = 10_000
    seed: int = 0
    max_coalition: int = 4
    jobs: int = 1

    def __post_init__(self):
        if self.max_exhaustive < 1 or self.samples < 1 or self.max_coalition < 1 or self.jobs < 1:
            raise ValueError("budget fields must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


DEFAULT_BUDGET = AuditBudget()


@dataclass(frozen=True)
class Witness:
    """A replayable counterexample.

    ``profile``/``outcome`` is the truthful (or original) situation and
    ``alternate``/``alternate_outcome`` the deviation, permuted profile,
    or, for an equivalence counterexample, the same profile under the
    second rule. ``agents`` are the deviators or the two transposed agents.
    """

    kind: str
    profile: Profile
    alternate: Profile
    agents: tuple[int, ...]
    outcome: int
    alternate_outcome: int
    rankings: tuple[Ranking, ...] = ()

    def replay(self, rule: Rule, other: Rule | None = None) -> bool:
        if rule.evaluate(self.profile) != self.outcome:
            return False
        second = other if self.kind == "EquivalenceCounterexample" else rule
        if second.evaluate(self.alternate) != self.alternate_outcome:
            return False
        if self.kind in ("Manipulation", "GroupManipulation"):
            if len(self.rankings) != len(self.agents):
                return False
            for agent, r in zip(self.agents, self.rankings):
                if r.kind is not rule.partition.kind_of(agent):
                    return False
                if restricted_extremum(r) != self.profile.location(agent):
                    return False
                if not r.prefers(self.alternate_outcome, self.outcome):
                    return False
            untouched = set(range(rule.partition.n)) - set(self.agents)
            return all(self.profile.location(i) == self.alternate.location(i) for i in untouched)
        if self.kind == "AnonymityViolation":
            i, j = self.agents
            swapped = list(self.profile.flat)
            swapped[i], swapped[j] = swapped[j], swapped[i]
            return (tuple(swapped) == self.alternate.flat and rule.partition.kind_of(i) is rule.partition.kind_of(j)
                    and self.outcome != self.alternate_outcome)
        return self.profile == self.alternate and self.outcome != self.alternate_outcome

    def as_dict(self, space: AlternativeSpace | None = None) -> dict:
        def out(x: int):
            if space is None:
                return x
            v = space.value(x)
            return v.numerator if v.denominator == 1 else space.label(ExtElem.single(x))

        def loc(p: Profile):
            return {"peaks": [out(x) for x in p.peaks], "dips": [out(x) for x in p.dips]}

        d = {
            "kind": self.kind,
            "profile": loc(self.profile),
            "alternate": loc(self.alternate),
            "agents": list(self.agents),
            "outcome": out(self.outcome),
            "alternate_outcome": out(self.alternate_outcome),
        }
        if self.rankings:
            d["rankings"] = [[out(x) for x in r.order] for r in self.rankings]
        return d


@dataclass
class AuditResult:
    check: str
    witness: Witness | None
    examined: int
    exhaustive: bool
    notes: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.witness is None

    @property
    def status(self) -> str:
        if self.witness is not None:
            return "witness"
        return "pass" if self.exhaustive else "partial-coverage"


# ---------------------------------------------------------------- tables

def _fill_rows(rule: Rule, peak_rows: list[tuple[int, ...]]) -> list[np.ndarray]:
    m, d = rule.space.m, rule.partition.d
    two_step = hasattr(rule, "first_step")
    out = []
    for peaks in peak_rows:
        block = np.empty((m,) * d, dtype=np.int16)
        if not two_step:
            # Any outcome function of the profile; no shortcut through the peaks.
            for dips in product(range(m), repeat=d):
                block[dips] = rule.evaluate(Profile(peaks, dips))
            out.append(block)
            continue
        e = rule.first_step(peaks)
        if not e.is_pair:
            block[...] = e.index
        else:
            for dips in product(range(m), repeat=d):
                side = rule.second_step(e, Profile(peaks, dips))
                block[dips] = e.left if side is Side.LEFT else e.right
        out.append(block)
    return out


def tabulate(rule: Rule, budget: AuditBudget = DEFAULT_BUDGET) -> np.ndarray:
    """Outcome index for every profile; axes are the peaks then the dips.

    ``table[p1, ..., pa, d1, ..., dd]`` is the outcome, so C-order
    iteration is lexicographic in (peaks, dips).
    """
    m, a, d = rule.space.m, rule.partition.a, rule.partition.d
    if m ** (a + d) > budget.max_exhaustive:
        raise BudgetExceeded(f"{m}**{a + d} profiles exceed the exhaustive budget {budget.max_exhaustive}")
    rows = list(product(range(m), repeat=a))
    if budget.jobs > 1 and len(rows) > 1:
        chunks = [rows[i::budget.jobs] for i in range(budget.jobs)]
        with ProcessPoolExecutor(max_workers=budget.jobs) as pool:
            parts = list(pool.map(_fill_rows, [rule] * len(chunks), chunks))
        blocks = {}
        for chunk, part in zip(chunks, parts):
            blocks.update(zip(chunk, part))
        filled = [blocks[r] for r in rows]
    else:
        filled = _fill_rows(rule, rows)
    table = np.empty((m,) * (a + d), dtype=np.int16)
    for peaks, block in zip(rows, filled):
        table[peaks] = block
    return table


def iter_profiles(space: AlternativeSpace, partition: AgentPartition):
    for flat in product(range(space.m), repeat=partition.n):
        yield Profile.from_flat(flat, partition.a)


def _sample_profiles(space: AlternativeSpace, partition: AgentPartition, budget: AuditBudget) -> np.ndarray:
    rng = np.random.default_rng(budget.seed)
    return rng.integers(0, space.m, size=(budget.samples, partition.n))


# ---------------------------------------------------------------- preferences

@lru_cache(maxsize=None)
def _ranking_data(m: int, kind: Kind):
    ranks = enumerate_rankings(m, kind)
    pos = np.array([r.position() for r in ranks], dtype=np.int16)
    ext = np.array([restricted_extremum(r) for r in ranks], dtype=np.int64)
    return ranks, pos, ext


@lru_cache(maxsize=None)
def _can_prefer(m: int, kind: Kind) -> np.ndarray:
    """``G[v, x, y]``: some ranking with extremum v puts x strictly above y."""
    _, pos, ext = _ranking_data(m, kind)
    g = np.zeros((m, m, m), dtype=bool)
    for p, v in zip(pos, ext):
        g[v] |= p[:, None] < p[None, :]
    return g


def _profile_from(flat: Sequence[int], a: int) -> Profile:
    return Profile.from_flat([int(x) for x in flat], a)


# ---------------------------------------------------------------- strategy-proofness

def find_manipulation(rule: Rule, budget: AuditBudget = DEFAULT_BUDGET) -> AuditResult:
    """Look for an agent who gains by misreporting its peak or dip."""
    t0 = time.perf_counter()
    m, part = rule.space.m, rule.partition
    n = part.n
    if m ** n <= budget.max_exhaustive:
        table = tabulate(rule, budget)
        w = _manipulation_in_table(table, part, m)
        res = AuditResult("sp", w, m ** n, True)
    else:
        res = _sampled_manipulation(rule, budget)
    res.elapsed = time.perf_counter() - t0
    return res


def _manipulation_in_table(table: np.ndarray, part: AgentPartition, m: int) -> Witness | None:
    n = part.n
    for i in range(n):
        kind = part.kind_of(i)
        ranks, pos, ext = _ranking_data(m, kind)
        t = np.moveaxis(table, i, -1).reshape(-1, m)  # (others, report)
        r_idx = np.arange(len(ranks))
        truth = t[:, ext]  # (K, R)
        pos_truth = pos[r_idx[None, :], truth]
        pos_mis = pos[r_idx[None, :, None], t[:, None, :]]  # (K, R, m)
        better = pos_mis < pos_truth[:, :, None]
        if better.any():
            k, r, j = np.unravel_index(int(np.argmax(better)), better.shape)
            others = np.unravel_index(k, (m,) * (n - 1)) if n > 1 else ()
            flat = list(int(x) for x in others)
            truthful = flat[:i] + [int(ext[r])] + flat[i:]
            lie = flat[:i] + [int(j)] + flat[i:]
            return Witness("Manipulation", _profile_from(truthful, part.a), _profile_from(lie, part.a), (i,),
                           int(t[k, ext[r]]), int(t[k, j]), (ranks[r],))
    return None


def _sampled_manipulation(rule: Rule, budget: AuditBudget) -> AuditResult:
    m, part = rule.space.m, rule.partition
    samples = _sample_profiles(rule.space, part, budget)
    for row in samples:
        flat = [int(x) for x in row]
        for i in range(part.n):
            kind = part.kind_of(i)
            ranks, pos, ext = _ranking_data(m, kind)
            outs = []
            for j in range(m):
                alt = flat[:]
                alt[i] = j
                outs.append(rule.evaluate(_profile_from(alt, part.a)))
            truth = outs[flat[i]]
            for r, rk in enumerate(ranks):
                if ext[r] != flat[i]:
                    continue
                for j in range(m):
                    if pos[r][outs[j]] < pos[r][truth]:
                        lie = flat[:]
                        lie[i] = j
                        w = Witness("Manipulation", _profile_from(flat, part.a), _profile_from(lie, part.a),
                                    (i,), truth, outs[j], (rk,))
                        return AuditResult("sp", w, len(samples), False)
    return AuditResult("sp", None, len(samples), False,
                       [f"{len(samples)} sampled profiles, seed {budget.seed}"])


def find_group_manipulation(rule: Rule, budget: AuditBudget = DEFAULT_BUDGET) -> AuditResult:
    """Look for a coalition whose joint misreport makes every member strictly better off.

    Coalitions of size up to ``budget.max_coalition`` are searched, smallest
    first; the result is exhaustive only if that covers every coalition.
    """
    t0 = time.perf_counter()
    m, part = rule.space.m, rule.partition
    n = part.n
    table = tabulate(rule, budget)
    cap = min(budget.max_coalition, n)
    examined = 0
    witness = None
    for s in range(1, cap + 1):
        for coal in combinations(range(n), s):
            examined += 1
            witness = _group_witness(table, part, m, coal)
            if witness is not None:
                break
        if witness is not None:
            break
    res = AuditResult("gsp", witness, m ** n, cap == n)
    if cap < n:
        res.notes.append(f"coalitions up to size {cap} of {n} agents searched")
    res.elapsed = time.perf_counter() - t0
    return res


def _group_witness(table: np.ndarray, part: AgentPartition, m: int, coal: tuple[int, ...]) -> Witness | None:
    n, s = part.n, len(coal)
    rest = [i for i in range(n) if i not in coal]
    t = np.transpose(table, rest + list(coal)).reshape(-1, m ** s)  # (others, joint report)
    kinds = [part.kind_of(i) for i in coal]
    gs = [_can_prefer(m, k) for k in kinds]
    first_k = None
    for te, ext in enumerate(product(range(m), repeat=s)):
        truth = t[:, te][:, None]
        ok = np.ones(t.shape, dtype=bool)
        for g, v in zip(gs, ext):
            ok &= g[v][t, truth]
        hits = np.flatnonzero(ok.any(axis=1))
        if hits.size and (first_k is None or hits[0] < first_k):
            first_k = int(hits[0])
    if first_k is None:
        return None
    # Exact first witness at that row, in ranking-then-misreport order.
    row = t[first_k]
    per_member = [_ranking_data(m, k) for k in kinds]
    for combo in product(*(range(len(rd[0])) for rd in per_member)):
        ext = [int(per_member[q][2][r]) for q, r in enumerate(combo)]
        te = int(np.ravel_multi_index(ext, (m,) * s))
        ok = np.ones(row.shape, dtype=bool)
        for q, r in enumerate(combo):
            pos = per_member[q][1][r]
            ok &= pos[row] < pos[row[te]]
        if ok.any():
            j = int(np.argmax(ok))
            lie = [int(x) for x in np.unravel_index(j, (m,) * s)]
            others = [int(x) for x in np.unravel_index(first_k, (m,) * (n - s))] if n > s else []
            truthful = [0] * n
            mis = [0] * n
            for idx, agent in enumerate(rest):
                truthful[agent] = mis[agent] = others[idx]
            for q, agent in enumerate(coal):
                truthful[agent] = ext[q]
                mis[agent] = lie[q]
            rks = tuple(per_member[q][0][r] for q, r in enumerate(combo))
            kind = "Manipulation" if s == 1 else "GroupManipulation"
            return Witness(kind, _profile_from(truthful, part.a), _profile_from(mis, part.a), coal,
                           int(row[te]), int(row[j]), rks)
    raise AssertionError("row flagged as manipulable but no ranking combination found")


# ---------------------------------------------------------------- anonymity

def _transpositions(part: AgentPartition, side: str) -> list[tuple[int, int]]:
    out = []
    if side in ("both", "A"):
        out += list(combinations(part.peaked, 2))
    if side in ("both", "D"):
        out += list(combinations(part.dipped, 2))
    return out


def check_type_anonymity(
    rule: Rule,
    budget: AuditBudget = DEFAULT_BUDGET,
    side: str = "both",
    profiles: Iterable[Profile] | None = None,
) -> AuditResult:
    """Compare outcomes under every transposition of two same-type agents.

    ``side`` restricts the transpositions to peaked ("A") or dipped ("D")
    agents; ``profiles`` restricts the search to the given profiles.
    Transpositions generate all type-preserving permutations, so a clean
    exhaustive run certifies type-anonymity.
    """
    if side not in ("both", "A", "D"):
        raise ValueError("side must be 'both', 'A' or 'D'")
    t0 = time.perf_counter()
    m, part = rule.space.m, rule.partition
    swaps = _transpositions(part, side)
    if profiles is not None:
        rows = [p.flat for p in profiles]
        res = _anonymity_on_rows(rule, rows, swaps, exhaustive=False)
        res.notes.append(f"restricted to {len(rows)} given profiles")
    elif m ** part.n <= budget.max_exhaustive:
        table = tabulate(rule, budget)
        res = AuditResult("anon", None, m ** part.n, True)
        if swaps:
            mism = np.stack([(table != np.swapaxes(table, i, j)).ravel() for i, j in swaps], axis=1)
            if mism.any():
                k, s = np.unravel_index(int(np.argmax(mism)), mism.shape)
                flat = [int(x) for x in np.unravel_index(k, table.shape)]
                i, j = swaps[s]
                alt = flat[:]
                alt[i], alt[j] = alt[j], alt[i]
                res.witness = Witness("AnonymityViolation", _profile_from(flat, part.a),
                                      _profile_from(alt, part.a), (i, j), int(table[tuple(flat)]),
                                      int(table[tuple(alt)]))
    else:
        rows = [tuple(int(x) for x in r) for r in _sample_profiles(rule.space, part, budget)]
        res = _anonymity_on_rows(rule, rows, swaps, exhaustive=False)
        res.notes.append(f"{len(rows)} sampled profiles, seed {budget.seed}")
    res.elapsed = time.perf_counter() - t0
    return res


def _anonymity_on_rows(rule: Rule, rows, swaps, exhaustive: bool) -> AuditResult:
    a = rule.partition.a
    for flat in rows:
        flat = list(flat)
        prof = _profile_from(flat, a)
        base = rule.evaluate(prof)
        for i, j in swaps:
            alt = flat[:]
            alt[i], alt[j] = alt[j], alt[i]
            other = rule.evaluate(_profile_from(alt, a))
            if other != base:
                w = Witness("AnonymityViolation", prof, _profile_from(alt, a), (i, j), base, other)
                return AuditResult("anon", w, len(rows), exhaustive)
    return AuditResult("anon", None, len(rows), exhaustive)


# ---------------------------------------------------------------- equivalence

def check_equivalence(rule_x: Rule, rule_y: Rule, budget: AuditBudget = DEFAULT_BUDGET) -> AuditResult:
    """First profile (lexicographic, or in sample order) where the rules disagree."""
    if rule_x.space != rule_y.space or rule_x.partition != rule_y.partition:
        raise ValueError("rules are defined on different alternatives or agent partitions")
    t0 = time.perf_counter()
    m, part = rule_x.space.m, rule_x.partition
    if m ** part.n <= budget.max_exhaustive:
        tx, ty = tabulate(rule_x, budget), tabulate(rule_y, budget)
        diff = tx != ty
        res = AuditResult("eq", None, m ** part.n, True)
        if diff.any():
            flat = [int(x) for x in np.unravel_index(int(np.argmax(diff)), diff.shape)]
            prof = _profile_from(flat, part.a)
            res.witness = Witness("EquivalenceCounterexample", prof, prof, (), int(tx[tuple(flat)]),
                                  int(ty[tuple(flat)]))
    else:
        rows = _sample_profiles(rule_x.space, part, budget)
        res = AuditResult("eq", None, len(rows), False, [f"{len(rows)} sampled profiles, seed {budget.seed}"])
        for row in rows:
            prof = _profile_from(row, part.a)
            x, y = rule_x.evaluate(prof), rule_y.evaluate(prof)
            if x != y:
                res.witness = Witness("EquivalenceCounterexample", prof, prof, (), x, y)
                break
    res.elapsed = time.perf_counter() - t0
    return res


# ---------------------------------------------------------------- random rules

def random_setting(seed: int, max_m: int = 4, max_a: int = 3, max_d: int = 3) -> tuple[AlternativeSpace, AgentPartition]:
    """Dimensions for which a valid rule exists, drawn from ``seed``."""
    rng = np.random.default_rng(seed)
    while True:
        m = int(rng.integers(1, max_m + 1))
        a = int(rng.integers(0, max_a + 1))
        d = int(rng.integers(0, max_d + 1))
        if a + d == 0 or (a == 0 and m > 2):
            continue
        space = AlternativeSpace(tuple(range(1, m + 1)))
        return space, AgentPartition(a, d)


def random_valid_rule(space: AlternativeSpace, partition: AgentPartition, seed: int,
                      representation: str = "median"):
    """A rule drawn from the characterized family, deterministic per seed.

    ``representation`` is "median" (phantoms and double quotas),
    "coalition" (threshold form) or "general" (explicit coalitions, not
    necessarily type-anonymous).
    """
    from .coalition import CoalitionRule, DecisiveSets, LeftCoalitionSystem
    from .median import DoubleQuota, MedianRule, QuotaSet

    rng = np.random.default_rng(seed)
    m, a, d = space.m, partition.a, partition.d
    if a == 0 and m > 2:
        raise ValueError("without peaked agents at most two alternatives can be in the range")
    if a == 0 and m == 2 and d == 0:
        raise ValueError("no agents")

    def antichain(qmin: int, qmax: int) -> frozenset:
        # Distinct A-quotas from [qmin, qmax] including qmin, D-quotas strictly decreasing.
        width = qmax - qmin + 1
        size = int(rng.integers(1, min(width, d) + 1))
        extra = sorted(int(x) for x in rng.choice(np.arange(qmin + 1, qmax + 1), size - 1, replace=False)) if size > 1 else []
        qas = [qmin] + extra
        qds = sorted((int(x) for x in rng.choice(np.arange(1, d + 1), size, replace=False)), reverse=True)
        return frozenset(zip(qas, qds))

    if representation == "median":
        allowed = [e for e in extended_order_elements(space) if d > 0 or not e.is_pair]
        lows = [e for e in (space.min_single, space.min_pair) if e is not None and e in allowed]
        highs = [e for e in (space.max_single, space.max_pair) if e is not None and e in allowed]
        if a == 0:
            both = [e for e in lows if e in highs]
            phantoms = [both[int(rng.integers(len(both)))]]
        else:
            lo = lows[int(rng.integers(len(lows)))]
            hi = highs[int(rng.integers(len(highs)))]
            phantoms = [lo, hi]
            middle = [e for e in allowed if lo <= e <= hi]
            for _ in range(a - 1):
                pairs_so_far = [g for g in phantoms if g.is_pair]
                if pairs_so_far and rng.random() < 0.3:
                    phantoms.append(pairs_so_far[int(rng.integers(len(pairs_so_far)))])
                else:
                    phantoms.append(middle[int(rng.integers(len(middle)))])
        phantoms = sorted(phantoms)
        rule = MedianRule(space, partition, tuple(phantoms))
        quotas = {}
        for p in rule.reachable_pairs:
            at, upto = rule.count_phantoms_at(p)
            qmin = a + 1 - upto
            quotas[p] = QuotaSet(p, frozenset(DoubleQuota(*q) for q in antichain(qmin, qmin + at - 1)))
        return MedianRule(space, partition, tuple(phantoms), quotas)

    if representation not in ("coalition", "general"):
        raise ValueError(f"unknown representation {representation!r}")

    rng_elems, thresholds = _random_thresholds(space, partition, rng)
    if representation == "coalition" or a == 0:
        counts = {}
        for p in rng_elems:
            if p.is_pair:
                left = ExtElem.single(p.left)
                upper = thresholds[left] - 1 if left in thresholds else a
                counts[p] = antichain(thresholds[p], upper)
        rule = CoalitionRule(space, partition, LeftCoalitionSystem(tuple(rng_elems), a, thresholds=thresholds),
                             DecisiveSets(counts=counts))
        return rule if representation == "coalition" else rule.to_general()
    return _random_general(space, partition, rng_elems, rng)


def _random_thresholds(space: AlternativeSpace, part: AgentPartition, rng: np.random.Generator):
    m, a, d = space.m, part.a, part.d
    if m == 1:
        return [space.min_single], {space.min_single: int(rng.integers(0, a + 1))}
    if a == 0:
        return [space.min_pair], {space.min_pair: 0}
    while True:
        elems = set(space.interior)
        if rng.random() < 0.7 or d == 0:
            elems.add(space.min_single)
        if d > 0 and (space.min_single not in elems or rng.random() < 0.4):
            elems.add(space.min_pair)
        if rng.random() < 0.7 or d == 0:
            elems.add(space.max_single)
        if d > 0 and (space.max_single not in elems or rng.random() < 0.4):
            elems.add(space.max_pair)
        if d > 0:
            for p in space.pairs[1:-1]:
                if rng.random() < 0.5:
                    elems.add(p)
        order = sorted(elems)
        thresholds: dict[ExtElem, int] = {}
        kept = []
        ok = True
        for idx, e in enumerate(order):
            is_max = idx == len(order) - 1
            prev = thresholds[kept[-1]] if kept else None
            if e.is_pair and kept and kept[-1] == ExtElem.single(e.left):
                if is_max:
                    val = 0
                elif prev >= 2:
                    val = int(rng.integers(1, prev))
                elif e in (space.min_pair, space.max_pair) and not _covered(e, elems, space):
                    ok = False
                    break
                else:
                    continue  # optional pair that cannot be reached; leave it out
            elif is_max:
                if e.is_pair:
                    val = 0
                else:
                    val = int(rng.integers(0, (prev if prev is not None else a) + 1))
            else:
                hi = prev if prev is not None else a
                val = hi if (prev is not None and rng.random() < 0.5) else int(rng.integers(1, hi + 1))
            thresholds[e] = val
            kept.append(e)
        if ok:
            return kept, thresholds


def _covered(pair: ExtElem, elems: set, space: AlternativeSpace) -> bool:
    if pair == space.min_pair and space.min_single in elems:
        return True
    return pair == space.max_pair and space.max_single in elems


def _random_general(space: AlternativeSpace, part: AgentPartition, order: list[ExtElem], rng: np.random.Generator):
    from .coalition import CoalitionRule, DecisiveSets, LeftCoalitionSystem, minimal_coalitions_of_difference
    from .domain import minimal_sets

    a, d = part.a, part.d
    full = frozenset(range(a))
    subsets = [frozenset(c) for k in range(a + 1) for c in combinations(range(a), k)]

    def up(base):
        return {s for s in subsets if any(b <= s for b in base)}

    def random_nonempty():
        nonempty = subsets[1:]
        return nonempty[int(rng.integers(len(nonempty)))]

    fams: dict[ExtElem, set] = {}
    prev: set = set()
    for idx, e in enumerate(order):
        is_max = idx == len(order) - 1
        if is_max and e.is_pair:
            fam = set(subsets)
        else:
            picks = [random_nonempty() for _ in range(int(rng.integers(0, 3)))]
            if not prev:
                picks.append(random_nonempty())
            if is_max:
                picks.append(full)
            fam = prev | up(picks)
            if e.is_pair and fam == prev:
                missing = [s for s in subsets[1:] if s not in prev]
                if not missing:
                    continue  # an interior pair that could never be reached
                fam |= up([missing[int(rng.integers(len(missing)))]])
        fams[e] = fam
        prev = fam
    order = [e for e in order if e in fams]
    lcs = LeftCoalitionSystem(tuple(order), a, minimal={e: minimal_sets(f) for e, f in fams.items()})

    dsubsets = [frozenset(c) for k in range(1, d + 1) for c in combinations(part.dipped, k)]
    coalitions = {}
    for p in order:
        if not p.is_pair:
            continue
        bs = minimal_coalitions_of_difference(lcs, ExtElem.single(p.left), p)
        base = [b | dsubsets[int(rng.integers(len(dsubsets)))] for b in bs]
        extras = []
        if rng.random() < 0.5:
            extras.append(subsets[int(rng.integers(len(subsets)))] | dsubsets[int(rng.integers(len(dsubsets)))])
        fam = minimal_sets(base + extras)
        if not all(any(s & full == b for s in fam) for b in bs):
            fam = minimal_sets(base)
        coalitions[p] = fam
    return CoalitionRule(space, part, lcs, DecisiveSets(coalitions=coalitions))
