"""Alternatives on a line, the interleaved order, agents and preferences.

Alternatives are a finite, strictly increasing tuple of exact rationals.
Everything else in the package refers to alternatives by their index into
that tuple, so profiles and outcomes are plain integers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence


class Kind(enum.Enum):
    PEAKED = "peaked"
    DIPPED = "dipped"


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


def as_rational(value) -> Fraction:
    """Parse ``3``, ``"3"``, ``"3/2"`` or a Fraction. Floats are refused."""
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact coordinate {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        if "." in value or "e" in value.lower():
            raise ValueError(f"coordinate {value!r} must be an integer or p/q")
        return Fraction(value.strip())
    raise TypeError(f"cannot read coordinate {value!r}")


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, order=True)
class ExtElem:
    """An alternative or a contiguous pair, ordered by ``key``.

    ``key = 2*i`` for the i-th alternative and ``2*i + 1`` for the pair
    made of alternatives i and i+1, so integer order on keys is the
    interleaved order in which every pair sits between its endpoints.
    """

    key: int

    @classmethod
    def single(cls, i: int) -> ExtElem:
        return cls(2 * i)

    @classmethod
    def pair(cls, i: int) -> ExtElem:
        return cls(2 * i + 1)

    @property
    def is_pair(self) -> bool:
        return self.key % 2 == 1

    @property
    def index(self) -> int:
        """Point index of a single, left point index of a pair."""
        return self.key // 2

    @property
    def left(self) -> int:
        return self.key // 2

    @property
    def right(self) -> int:
        if not self.is_pair:
            raise ValueError("a single alternative has no right endpoint")
        return self.key // 2 + 1

    def __repr__(self) -> str:
        kind = "Pair" if self.is_pair else "Single"
        return f"{kind}({self.index})"


@dataclass(frozen=True)
class AlternativeSpace:
    points: tuple[Fraction, ...]

    def __post_init__(self):
        pts = tuple(as_rational(p) for p in self.points)
        if not pts:
            raise ValueError("the set of alternatives must be non-empty")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("alternatives must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, *values) -> AlternativeSpace:
        return cls(tuple(values))

    @property
    def m(self) -> int:
        return len(self.points)

    @property
    def pairs(self) -> tuple[ExtElem, ...]:
        return tuple(ExtElem.pair(i) for i in range(self.m - 1))

    @property
    def singles(self) -> tuple[ExtElem, ...]:
        return tuple(ExtElem.single(i) for i in range(self.m))

    @property
    def interior(self) -> tuple[ExtElem, ...]:
        return tuple(ExtElem.single(i) for i in range(1, self.m - 1))

    @property
    def min_single(self) -> ExtElem:
        return ExtElem.single(0)

    @property
    def max_single(self) -> ExtElem:
        return ExtElem.single(self.m - 1)

    @property
    def min_pair(self) -> ExtElem | None:
        return ExtElem.pair(0) if self.m >= 2 else None

    @property
    def max_pair(self) -> ExtElem | None:
        return ExtElem.pair(self.m - 2) if self.m >= 2 else None

    def contains(self, e: ExtElem) -> bool:
        return 0 <= e.key <= 2 * (self.m - 1)

    def index_of(self, value) -> int:
        v = as_rational(value)
        try:
            return self.points.index(v)
        except ValueError:
            raise ValueError(f"{format_rational(v)} is not an alternative") from None

    def value(self, i: int) -> Fraction:
        return self.points[i]

    def label(self, e: ExtElem) -> str:
        if e.is_pair:
            return f"({format_rational(self.points[e.left])},{format_rational(self.points[e.right])})"
        return format_rational(self.points[e.index])


def extended_order_elements(space: AlternativeSpace) -> list[ExtElem]:
    """All alternatives and contiguous pairs in interleaved order (2m-1 items)."""
    return [ExtElem(k) for k in range(2 * space.m - 1)]


@dataclass(frozen=True)
class AgentPartition:
    """``a`` single-peaked agents (indices 0..a-1) then ``d`` single-dipped ones."""

    a: int
    d: int

    def __post_init__(self):
        if self.a < 0 or self.d < 0:
            raise ValueError("agent counts must be non-negative")
        if self.a + self.d < 1:
            raise ValueError("there must be at least one agent")

    @property
    def n(self) -> int:
        return self.a + self.d

    @property
    def peaked(self) -> range:
        return range(self.a)

    @property
    def dipped(self) -> range:
        return range(self.a, self.a + self.d)

    def kind_of(self, agent: int) -> Kind:
        if not 0 <= agent < self.n:
            raise IndexError(agent)
        return Kind.PEAKED if agent < self.a else Kind.DIPPED


@dataclass(frozen=True)
class Profile:
    """Restricted peaks of the peaked agents and restricted dips of the dipped ones."""

    peaks: tuple[int, ...]
    dips: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "peaks", tuple(int(p) for p in self.peaks))
        object.__setattr__(self, "dips", tuple(int(x) for x in self.dips))

    @classmethod
    def from_flat(cls, flat: Sequence[int], a: int) -> Profile:
        return cls(tuple(flat[:a]), tuple(flat[a:]))

    @property
    def flat(self) -> tuple[int, ...]:
        return self.peaks + self.dips

    def location(self, agent: int) -> int:
        return self.flat[agent]

    def replace(self, agent: int, location: int) -> Profile:
        flat = list(self.flat)
        flat[agent] = location
        return Profile.from_flat(flat, len(self.peaks))


def check_profile(space: AlternativeSpace, partition: AgentPartition, profile: Profile) -> None:
    if len(profile.peaks) != partition.a or len(profile.dips) != partition.d:
        raise ValueError(
            f"profile has {len(profile.peaks)} peaks and {len(profile.dips)} dips, "
            f"expected {partition.a} and {partition.d}"
        )
    for x in profile.flat:
        if not 0 <= x < space.m:
            raise ValueError(f"location index {x} outside 0..{space.m - 1}")


def pair_preference(kind: Kind, location: int, pair: ExtElem) -> Side:
    """Which endpoint of a contiguous pair an agent strictly prefers.

    A peaked agent prefers the left point iff its peak is at or left of it;
    a dipped agent prefers the left point iff its dip is at or right of the
    right point. No restricted peak or dip can fall strictly inside a pair.
    """
    if not pair.is_pair:
        raise ValueError(f"{pair!r} is not a pair")
    if kind is Kind.PEAKED:
        return Side.LEFT if location <= pair.left else Side.RIGHT
    return Side.LEFT if location >= pair.right else Side.RIGHT


@dataclass(frozen=True)
class Ranking:
    kind: Kind
    order: tuple[int, ...]

    def position(self) -> tuple[int, ...]:
        """``position()[x]`` is the rank of alternative x (0 = best)."""
        pos = [0] * len(self.order)
        for r, x in enumerate(self.order):
            pos[x] = r
        return tuple(pos)

    def prefers(self, x: int, y: int) -> bool:
        return self.order.index(x) < self.order.index(y)


def is_single_peaked(order: Sequence[int]) -> bool:
    peak = order[0]
    pos = {x: r for r, x in enumerate(order)}
    for x in pos:
        for y in pos:
            if (peak >= x > y or peak <= x < y) and pos[x] > pos[y]:
                return False
    return True


@lru_cache(maxsize=None)
def _peaked_orders(m: int) -> tuple[tuple[int, ...], ...]:
    # Peel the worst remaining alternative off one end of the interval.
    out = []

    def peel(lo: int, hi: int, worst_first: list[int]):
        if lo == hi:
            out.append(tuple(reversed(worst_first + [lo])))
            return
        peel(lo + 1, hi, worst_first + [lo])
        peel(lo, hi - 1, worst_first + [hi])

    peel(0, m - 1, [])
    return tuple(sorted(out))


def enumerate_rankings(space: AlternativeSpace | int, kind: Kind) -> list[Ranking]:
    """Every single-peaked (or single-dipped) strict order, 2**(m-1) of them."""
    m = space if isinstance(space, int) else space.m
    if m < 1:
        raise ValueError("need at least one alternative")
    orders = _peaked_orders(m)
    if kind is Kind.DIPPED:
        orders = tuple(sorted(tuple(reversed(o)) for o in orders))
    return [Ranking(kind, o) for o in orders]


def restricted_extremum(r: Ranking) -> int:
    """The peak of a peaked ranking, the dip of a dipped one."""
    return r.order[0] if r.kind is Kind.PEAKED else r.order[-1]


def minimal_sets(family: Iterable[frozenset]) -> frozenset[frozenset]:
    """Inclusion-minimal members of a family of sets."""
    fam = sorted(set(family), key=len)
    keep: list[frozenset] = []
    for s in fam:
        if not any(k <= s for k in keep):
            keep.append(s)
    return frozenset(keep)


def is_antichain(family: Iterable[frozenset]) -> bool:
    fam = list(family)
    return all(not (s < t or t < s) for i, s in enumerate(fam) for t in fam[i + 1:])
