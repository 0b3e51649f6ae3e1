import statistics
from itertools import product

import pytest

from spdrules import (
    AgentPartition,
    AlternativeSpace,
    DoubleQuota,
    ExtElem,
    MedianRule,
    Profile,
    QuotaSet,
    Side,
    count_phantoms_at,
    eval_median_rule,
    mixed_median,
    quota_decide,
    random_valid_rule,
    second_step_counts,
)

from conftest import idx

SPACE = AlternativeSpace.of(1, 2, 3, 4)
PAIR = SPACE.max_pair


def _with_quotas(rule, quotas):
    return MedianRule(rule.space, rule.partition, rule.phantoms,
                      {PAIR: QuotaSet(PAIR, frozenset(DoubleQuota(*q) for q in quotas))})


def test_count_phantoms(median_rule):
    assert count_phantoms_at(median_rule, PAIR) == (2, 4)
    assert count_phantoms_at(median_rule, ExtElem.single(0)) == (1, 1)
    low = MedianRule(SPACE, AgentPartition(1, 0), (ExtElem.single(1), ExtElem.single(3)))
    assert low.count_phantoms_at(ExtElem.single(0)) == (0, 0)


def test_mixed_median(median_rule):
    assert SPACE.label(mixed_median(median_rule, idx(SPACE, 1, 2, 2))) == "2"
    assert mixed_median(median_rule, idx(SPACE, 1, 4, 4)) == PAIR


def test_single_agent_between_extreme_phantoms():
    rule = MedianRule(SPACE, AgentPartition(1, 0), (SPACE.min_single, SPACE.max_single))
    for p in range(4):
        assert rule.mixed_median((p,)) == ExtElem.single(p)


def test_second_step_counts(median_rule):
    peaks = idx(SPACE, 1, 4, 4)
    assert second_step_counts(median_rule, Profile(peaks, idx(SPACE, 2, 2, 1)), PAIR) == (1, 0)
    assert second_step_counts(median_rule, Profile(peaks, idx(SPACE, 2, 2, 4)), PAIR) == (1, 1)
    high = idx(SPACE, 4, 4, 4)
    assert second_step_counts(median_rule, Profile(high, idx(SPACE, 4, 4, 4)), PAIR) == (0, 3)


def test_quota_decide():
    qs = QuotaSet(PAIR, frozenset({DoubleQuota(0, 2), DoubleQuota(1, 1)}))
    assert quota_decide(qs, (1, 0)) is Side.RIGHT
    assert quota_decide(qs, (1, 1)) is Side.LEFT
    assert quota_decide(QuotaSet(PAIR, frozenset({DoubleQuota(0, 1)})), (0, 0)) is Side.RIGHT


def test_worked_outcomes(median_rule):
    label = lambda i: SPACE.label(ExtElem.single(i))  # noqa: E731
    for dips in product(range(4), repeat=3):
        assert label(eval_median_rule(median_rule, Profile(idx(SPACE, 1, 2, 2), dips))) == "2"
    assert label(median_rule.evaluate(Profile(idx(SPACE, 1, 4, 4), idx(SPACE, 2, 2, 1)))) == "4"
    assert label(median_rule.evaluate(Profile(idx(SPACE, 1, 4, 4), idx(SPACE, 2, 2, 4)))) == "3"


def test_evaluate_rejects_wrong_dimensions(median_rule):
    with pytest.raises(ValueError):
        median_rule.evaluate(Profile((0, 0), (0, 0, 0)))


def test_valid_worked_rule(median_rule):
    rep = median_rule.validate()
    assert rep.ok, rep.violations
    assert {"DEF1_I", "DEF1_II", "DEF2_I", "DEF2_II", "DEF2_III", "DEF2_BOUND"} <= set(rep.checked)


def test_smallest_phantom_must_be_at_the_bottom():
    rule = MedianRule(SPACE, AgentPartition(3, 3),
                      (ExtElem.single(1), ExtElem.single(1), PAIR, PAIR),
                      {PAIR: QuotaSet(PAIR, frozenset({DoubleQuota(0, 2), DoubleQuota(1, 1)}))})
    assert "DEF1_I" in rule.validate().codes


def test_largest_phantom_must_be_at_the_top():
    rule = MedianRule(SPACE, AgentPartition(1, 0), (SPACE.min_single, ExtElem.single(2)))
    assert rule.validate().codes == ["DEF1_II"]


def test_zero_dipped_quota_rejected(median_rule):
    assert "DEF2_I" in _with_quotas(median_rule, [(0, 0)]).validate().codes


def test_comparable_quotas_rejected(median_rule):
    assert "DEF2_II" in _with_quotas(median_rule, [(0, 2), (1, 2)]).validate().codes


def test_missing_minimal_quota_rejected(median_rule):
    assert _with_quotas(median_rule, [(1, 1)]).validate().codes == ["DEF2_III"]


def test_too_many_quotas_rejected(median_rule):
    # Two phantoms sit on the pair, so at most two quotas.
    assert "DEF2_BOUND" in _with_quotas(median_rule, [(0, 3), (1, 2), (2, 1)]).validate().codes


def test_phantom_count_and_keys():
    part = AgentPartition(1, 1)
    rule = MedianRule(SPACE, part, (SPACE.min_single, PAIR, PAIR))
    codes = rule.validate().codes
    assert "DEF1_COUNT" in codes and "QUOTA_KEYS" in codes
    extra = MedianRule(SPACE, part, (SPACE.min_single, SPACE.max_single),
                       {PAIR: QuotaSet(PAIR, frozenset({DoubleQuota(0, 1)}))})
    assert extra.validate().codes == ["QUOTA_KEYS"]


def test_pair_phantoms_need_dipped_agents():
    rule = MedianRule(SPACE, AgentPartition(1, 0), (SPACE.min_single, PAIR),
                      {PAIR: QuotaSet(PAIR, frozenset({DoubleQuota(0, 1)}))})
    assert "DEF1_NO_DIPPED" in rule.validate().codes


def test_constructor_rejects_foreign_elements():
    with pytest.raises(ValueError):
        MedianRule(SPACE, AgentPartition(0, 1), (ExtElem.single(9),))
    with pytest.raises(ValueError):
        MedianRule(SPACE, AgentPartition(0, 1), (PAIR,), {ExtElem.single(1): QuotaSet(ExtElem.single(1), frozenset())})


def test_range_is_interior_plus_phantoms(median_rule):
    assert [SPACE.label(e) for e in median_rule.range] == ["1", "2", "3", "(3,4)"]
    assert median_rule.reachable_pairs == (PAIR,)


def test_constant_rule_on_one_point():
    space = AlternativeSpace.of(7)
    rule = MedianRule(space, AgentPartition(0, 2), (space.min_single,))
    assert rule.validate().ok
    assert {rule.evaluate(Profile((), (0, 0)))} == {0}


@pytest.mark.parametrize("seed", range(12))
def test_pair_medians_are_phantoms_and_outcomes_in_range(seed):
    space = AlternativeSpace(tuple(range(1, 2 + seed % 4)))
    part = AgentPartition(1 + seed % 4, 1 + seed % 3)
    rule = random_valid_rule(space, part, seed)
    for peaks in product(range(space.m), repeat=part.a):
        e = rule.mixed_median(peaks)
        if e.is_pair:
            assert e in rule.phantoms
        elif e.index not in peaks:
            assert e in rule.phantoms
        for dips in [(0,) * part.d, (space.m - 1,) * part.d]:
            assert 0 <= rule.evaluate(Profile(peaks, dips)) < space.m


@pytest.mark.parametrize("seed", range(10))
def test_raising_a_peak_never_lowers_the_median(seed):
    space = AlternativeSpace.of(1, 2, 3, 4)
    part = AgentPartition(3, 2)
    rule = random_valid_rule(space, part, seed)
    for peaks in product(range(4), repeat=3):
        base = rule.mixed_median(peaks)
        for i in range(3):
            if peaks[i] < 3:
                raised = list(peaks)
                raised[i] += 1
                assert rule.mixed_median(raised) >= base


def moulin_median(space, peaks, phantoms):
    """Plain median of peak locations and phantom locations as rationals."""
    values = [space.value(p) for p in peaks] + [space.value(g.index) for g in phantoms]
    return statistics.median(values)


@pytest.mark.parametrize("m,a", [(m, a) for m in range(1, 6) for a in range(1, 5)])
def test_no_dipped_agents_reduces_to_moulin(m, a):
    space = AlternativeSpace(tuple(range(1, m + 1)))
    part = AgentPartition(a, 0)
    for seed in range(3):
        rule = random_valid_rule(space, part, seed)
        assert all(not g.is_pair for g in rule.phantoms)
        for peaks in product(range(m), repeat=a):
            assert space.value(rule.evaluate(Profile(peaks, ()))) == moulin_median(space, peaks, rule.phantoms)


@pytest.mark.parametrize("d", range(1, 5))
def test_no_peaked_agents_two_points_is_a_quota_vote(d):
    space = AlternativeSpace.of(1, 2)
    for q in range(1, d + 1):
        rule = MedianRule(space, AgentPartition(0, d), (space.min_pair,),
                          {space.min_pair: QuotaSet(space.min_pair, frozenset({DoubleQuota(0, q)}))})
        assert rule.validate().ok
        for dips in product(range(2), repeat=d):
            # A dipped agent wants the left point exactly when its dip is the right point.
            expect = 0 if sum(1 for x in dips if x == 1) >= q else 1
            assert rule.evaluate(Profile((), dips)) == expect
