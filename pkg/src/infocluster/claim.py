"""Exact check of the few-large-events claim.

If ``N`` events each have probability greater than ``eps`` (with ``1/eps``
an integer) and every pairwise intersection has probability less than
``eps**2 / 2``, then ``N < 2/eps``. Points are equiprobable and all
arithmetic is over :class:`fractions.Fraction`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator


@dataclass(frozen=True)
class EventSystem:
    points: int
    events: tuple[frozenset, ...]

    def __post_init__(self):
        if self.points < 1:
            raise ValueError("probability space needs at least one point")
        events = tuple(frozenset(e) for e in self.events)
        for e in events:
            if not e <= frozenset(range(self.points)):
                raise ValueError(f"event {sorted(e)} leaves the space of {self.points} points")
        object.__setattr__(self, "events", events)

    @classmethod
    def from_masks(cls, points: int, masks: Iterable[int]) -> "EventSystem":
        return cls(points, tuple(frozenset(i for i in range(points) if mask >> i & 1) for mask in masks))

    def probability(self, event: frozenset) -> Fraction:
        return Fraction(len(event), self.points)


def unit_fraction(eps) -> Fraction:
    eps = Fraction(eps)
    if eps <= 0 or eps.numerator != 1:
        raise ValueError(f"eps must be 1/k for a positive integer k, got {eps}")
    return eps


@dataclass(frozen=True)
class ClaimCheck:
    events: int
    hypotheses_hold: bool
    union_lower_bound: Fraction   # sum p_i - sum_{i<j} p_ij
    union_probability: Fraction
    passed: bool


def claim_check(ev: EventSystem, eps) -> ClaimCheck:
    eps = unit_fraction(eps)
    probs = [ev.probability(e) for e in ev.events]
    pair_probs = [ev.probability(a & b) for a, b in combinations(ev.events, 2)]
    holds = all(p > eps for p in probs) and all(q < eps * eps / 2 for q in pair_probs)
    lower = sum(probs, Fraction(0)) - sum(pair_probs, Fraction(0))
    union = ev.probability(frozenset().union(*ev.events))
    n = len(ev.events)
    passed = (not holds) or n < 2 / eps
    return ClaimCheck(n, holds, lower, union, passed)


def disjoint_events(eps) -> EventSystem:
    """``1/eps`` pairwise disjoint events of probability exactly ``eps``."""
    k = unit_fraction(eps).denominator
    return EventSystem(k, tuple(frozenset({i}) for i in range(k)))


@dataclass
class ClaimSearch:
    eps: Fraction
    max_points: int
    max_events: int
    instances: int = 0
    largest: int = 0
    counterexample: EventSystem | None = None


def admissible_families(points: int, eps: Fraction, max_events: int) -> Iterator[tuple[int, ...]]:
    """Every family of distinct events meeting both hypotheses, as bit masks.

    Families are built in increasing mask order, so each is produced once;
    the empty family is included.
    """
    # p > eps  <=>  |E| > eps * points;  p_ij < eps^2/2  <=>  |E_i & E_j| < eps^2 * points / 2
    big = [mask for mask in range(1, 1 << points) if Fraction(mask.bit_count(), points) > eps]
    pair_cap = eps * eps * points / 2

    def grow(chosen: tuple[int, ...], start: int):
        yield chosen
        if len(chosen) == max_events:
            return
        for k in range(start, len(big)):
            cand = big[k]
            if all((cand & other).bit_count() < pair_cap for other in chosen):
                yield from grow(chosen + (cand,), k + 1)

    yield from grow((), 0)


def claim_search(eps, max_points: int = 10, max_events: int = 6) -> ClaimSearch:
    """Exhaustively look for event systems that meet the hypotheses with ``N >= 2/eps``."""
    eps = unit_fraction(eps)
    result = ClaimSearch(eps, max_points, max_events)
    for points in range(1, max_points + 1):
        for family in admissible_families(points, eps, max_events):
            result.instances += 1
            result.largest = max(result.largest, len(family))
            if len(family) >= 2 / eps:
                ev = EventSystem.from_masks(points, family)
                if claim_check(ev, eps).hypotheses_hold and result.counterexample is None:
                    result.counterexample = ev
    return result
