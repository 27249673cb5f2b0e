"""Grid discretization and exhaustive generation of Hider strategies.

Grid(m) restricts burial depths to {1/m, ..., m/m}. Restricting the Hider
can only help the Searcher, so values computed on a grid upper-bound the
continuous game value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .core import GameConfig, HiderPure, canonicalize, format_hider


@dataclass(frozen=True)
class Grid:
    """Depth discretization into m equal steps."""

    m: int

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"grid resolution must be a positive integer, got {self.m!r}")

    def depth(self, step: int) -> Fraction:
        return Fraction(step, self.m)


def _placements(n: int, k: int, m: int):
    """Yield per-location ascending step tuples with sum of maxima <= m."""

    def rec(loc, remaining, depth_budget):
        if loc == n:
            if remaining == 0:
                yield ()
            return
        # Leaving the location empty costs no depth budget.
        for rest in rec(loc + 1, remaining, depth_budget):
            yield ((),) + rest
        if depth_budget < 1:
            return
        for count in range(1, remaining + 1):
            for combo in itertools.combinations_with_replacement(
                range(1, depth_budget + 1), count
            ):
                for rest in rec(loc + 1, remaining - count, depth_budget - combo[-1]):
                    yield (combo,) + rest

    yield from rec(0, k, m)


def enumerate_grid_hiders(
    cfg: GameConfig, grid: Grid, reduce_symmetry: bool = False
) -> list[tuple[HiderPure, int]]:
    """All valid Hider strategies on the grid, with multiplicities.

    Unreduced, every strategy appears with weight 1. With symmetry
    reduction, one canonical representative per location-relabeling orbit
    appears with its orbit size as weight, so weights always sum to the
    unreduced count. Output order is lexicographic and deterministic.
    """
    m = grid.m
    raw = []
    for placement in _placements(cfg.n, cfg.k, m):
        sets = tuple(tuple(Fraction(s, m) for s in loc) for loc in placement)
        raw.append(HiderPure(sets))
    raw.sort()
    if not reduce_symmetry:
        return [(hp, 1) for hp in raw]
    reduced: dict[HiderPure, int] = {}
    for hp in raw:
        canon, orbit = canonicalize(hp)
        if canon not in reduced:
            reduced[canon] = orbit
    return sorted(reduced.items())


def family_D(x: Fraction, cfg: GameConfig) -> list[HiderPure]:
    """Split strategies: one object at depth x, the other at 1-x elsewhere.

    Defined for two-object games and 0 < x < 1 (x = 1 would put the second
    object at depth 0, which valid strategies exclude). There are n(n-1)
    members, halved when x = 1/2 since the two objects become symmetric.
    """
    x = Fraction(x)
    if cfg.k != 2:
        raise ValueError("family_D is defined for k=2 games only")
    if not 0 < x < 1:
        raise ValueError("family_D requires 0 < x < 1")
    y = 1 - x
    members = set()
    for i in range(cfg.n):
        for j in range(cfg.n):
            if i == j:
                continue
            sets = [() for _ in range(cfg.n)]
            sets[i] = (x,)
            sets[j] = (y,)
            members.add(HiderPure(tuple(sets)))
    return sorted(members)


def family_E(x: Fraction, cfg: GameConfig) -> list[HiderPure]:
    """Stacked strategies: objects at depths x and 1 in a single location."""
    x = Fraction(x)
    if cfg.k != 2:
        raise ValueError("family_E is defined for k=2 games only")
    if not 0 < x <= 1:
        raise ValueError("family_E requires 0 < x <= 1")
    members = []
    for i in range(cfg.n):
        sets = [() for _ in range(cfg.n)]
        sets[i] = (x, Fraction(1))
        members.append(HiderPure(tuple(sets)))
    return sorted(members)


def dump_enumeration(entries: list[tuple[HiderPure, int]]) -> str:
    """Line-oriented dump: one `strategy<TAB>weight` row per entry."""
    return "\n".join(f"{format_hider(hp)}\t{weight}" for hp, weight in entries)
