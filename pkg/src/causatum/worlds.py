"""Possible worlds as rows of a binary matrix over the in-scope events."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import CapacityError, DomainError
from .kb import KnowledgeBase

__all__ = [
    "PossibleWorld",
    "WorldMatrix",
    "CombinatoricsReport",
    "enumerate_worlds",
    "combinatorics",
    "nearest_world",
    "hamming",
    "DEFAULT_LIMIT",
]

DEFAULT_LIMIT = 20
HISTOGRAM_MAX_WORLDS = 16
MEAN_MAX_WORLDS = 1024


@dataclass(frozen=True, order=True)
class PossibleWorld:
    """Truth assignment packed in an int: bit ``j`` is event ``j``."""

    bits: int
    width: int

    def __post_init__(self):
        if not 0 <= self.bits < (1 << self.width):
            raise DomainError(f"bits {self.bits} do not fit in width {self.width}")

    def truth(self, j: int) -> bool:
        return bool(self.bits >> j & 1)

    def __str__(self):
        return format(self.bits, f"0{self.width}b") if self.width else ""

    @classmethod
    def parse(cls, text: str) -> "PossibleWorld":
        """Inverse of ``str``: most significant (last) event first."""
        return cls(int(text, 2) if text else 0, len(text))


@dataclass(frozen=True)
class WorldMatrix:
    events: tuple[str, ...]
    rows: tuple[PossibleWorld, ...]

    @property
    def m(self) -> int:
        return len(self.events)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    @classmethod
    def from_rows(cls, events: Sequence[str], rows) -> "WorldMatrix":
        """Build a matrix from worlds or bit strings in any order."""
        events = tuple(events)
        worlds = {r if isinstance(r, PossibleWorld) else PossibleWorld.parse(r) for r in rows}
        for w in worlds:
            if w.width != len(events):
                raise DomainError(f"world {w} does not have width {len(events)}")
        return cls(events, tuple(sorted(worlds)))

    def world_dict(self, world: PossibleWorld) -> dict[str, bool]:
        return {e: world.truth(j) for j, e in enumerate(self.events)}


@dataclass(frozen=True)
class CombinatoricsReport:
    m: int
    n: int
    transition_relation_log2: int
    # number of relations holding exactly k worlds, k = 1..n; only for small n
    generality_histogram: tuple[int, ...] | None
    # (2**n - 1) / n, the mean level size; None when n is too large to bother
    mean_per_level: Fraction | None

    @property
    def transition_relations(self) -> int:
        """``2 ** n``; only materialize for small ``m``."""
        return 1 << self.n


def enumerate_worlds(kb: KnowledgeBase | Sequence[str], limit: int = DEFAULT_LIMIT) -> WorldMatrix:
    """All ``2 ** m`` worlds over the in-scope events, in ascending order."""
    events = kb.in_scope() if isinstance(kb, KnowledgeBase) else tuple(kb)
    m = len(events)
    if m > limit:
        raise CapacityError("too many events to enumerate", m, limit)
    return WorldMatrix(events, tuple(PossibleWorld(i, m) for i in range(1 << m)))


def combinatorics(m: int) -> CombinatoricsReport:
    if m < 0:
        raise DomainError("event count must be nonnegative")
    n = 1 << m
    hist = None
    if n <= HISTOGRAM_MAX_WORLDS:
        hist = tuple(math.comb(n, k) for k in range(1, n + 1))
    # nonempty relations spread over n generality levels
    mean = Fraction((1 << n) - 1, n) if n <= MEAN_MAX_WORLDS else None
    return CombinatoricsReport(m, n, n, hist, mean)


def hamming(world: PossibleWorld, events: Sequence[str], obs: Mapping[str, bool]) -> int:
    index = {e: j for j, e in enumerate(events)}
    return sum(world.truth(index[e]) != bool(v) for e, v in obs.items())


def nearest_world(matrix: WorldMatrix, obs: Mapping[str, bool]) -> PossibleWorld:
    """Row closest to ``obs`` in Hamming distance over the observed events.

    Unobserved events are ignored; ties go to the lowest row.
    """
    if not matrix.rows:
        raise DomainError("empty world matrix")
    for e in obs:
        if e not in matrix.events:
            raise DomainError(f"observation names {e!r}, which is not a column")
    best = None
    for w in sorted(matrix.rows):
        d = hamming(w, matrix.events, obs)
        if best is None or d < best[0]:
            best = (d, w)
    return best[1]
