from itertools import product
from pathlib import Path

import pytest

from spdrules import AgentPartition, AlternativeSpace, Profile, load_rule

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def median_rule():
    return load_rule(FIXTURES / "median_three_by_three.json")


@pytest.fixture
def coalition_rule():
    return load_rule(FIXTURES / "coalition_three_by_three.json")


@pytest.fixture
def nonanonymous_rule():
    return load_rule(FIXTURES / "coalition_nonanonymous.json")


def idx(space: AlternativeSpace, *values) -> tuple[int, ...]:
    return tuple(space.index_of(v) for v in values)


class TableRule:
    """An arbitrary outcome function given as a dict, for checking the search engine."""

    def __init__(self, m: int, a: int, d: int, outcomes: dict[tuple[int, ...], int]):
        self.space = AlternativeSpace(tuple(range(1, m + 1)))
        self.partition = AgentPartition(a, d)
        self.outcomes = outcomes

    def evaluate(self, profile: Profile) -> int:
        return self.outcomes[profile.flat]


def random_table_rule(rng, m: int, a: int, d: int) -> TableRule:
    flats = list(product(range(m), repeat=a + d))
    return TableRule(m, a, d, {f: int(rng.integers(m)) for f in flats})
