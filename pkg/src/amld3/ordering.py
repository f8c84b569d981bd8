"""Decoder orderings for the 3-description multilevel diversity setup.

Seven decoders are indexed by the nonempty subsets of the three descriptions:

    G1, G2, G3, G12, G13, G23, G123

(G12 is the decoder that receives descriptions 1 and 2, and so on).  An
*ordering* assigns each decoder a distinct level 1..7 — the number of source
streams it must reproduce — subject to two axioms:

  (i)  level(G1) < level(G2) < level(G3): single descriptions are ranked
       by increasing reproduction quality;
  (ii) S strictly contained in T implies level(S) < level(T): receiving more
       descriptions can only help.

Exactly eight assignments satisfy both axioms; :func:`enumerate_orderings`
lists them in a fixed documented order, with the fully alternating ordering
L1 = (G1, G2, G3, G12, G13, G23, G123) first.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Mapping

SUBSETS: tuple[str, ...] = ("G1", "G2", "G3", "G12", "G13", "G23", "G123")
"""All decoder subsets in canonical order (by size, then description index)."""

SUBSET_MASKS: Mapping[str, int] = {
    "G1": 1, "G2": 2, "G3": 4, "G12": 3, "G13": 5, "G23": 6, "G123": 7,
}
"""Bitmask of each subset: description i contributes bit i-1."""

_MASK_TO_SUBSET = {m: s for s, m in SUBSET_MASKS.items()}
_CANON_INDEX = {s: i for i, s in enumerate(SUBSETS)}


class OrderingError(ValueError):
    """Base class for invalid ordering assignments."""


class NotBijective(OrderingError):
    """The assignment is not a bijection from the 7 subsets onto 1..7."""


class SinglesOutOfOrder(OrderingError):
    """The single-description levels do not satisfy L(G1) < L(G2) < L(G3)."""


class MonotonicityViolated(OrderingError):
    """Some subset pair S < T has level(S) >= level(T)."""

    def __init__(self, small: str, large: str, ls: int, lt: int):
        self.offending = (small, large)
        super().__init__(
            f"{small} is contained in {large} but has level {ls} >= {lt}"
        )


def subset_mask(subset: str) -> int:
    """Bitmask of a subset name (raises KeyError on unknown names)."""
    return SUBSET_MASKS[subset]


def subset_members(subset: str) -> tuple[int, ...]:
    """Description indices (1-based) contained in the subset."""
    mask = SUBSET_MASKS[subset]
    return tuple(i for i in (1, 2, 3) if mask & (1 << (i - 1)))


def union(a: str, b: str) -> str:
    """Name of the union of two subsets."""
    return _MASK_TO_SUBSET[SUBSET_MASKS[a] | SUBSET_MASKS[b]]


def _check_levels(levels: Mapping[str, int]) -> None:
    if set(levels.keys()) != set(SUBSETS) or sorted(levels.values()) != list(
        range(1, 8)
    ):
        raise NotBijective(
            "an ordering must assign each of the 7 decoder subsets a "
            f"distinct level in 1..7, got {dict(levels)!r}"
        )
    if not (levels["G1"] < levels["G2"] < levels["G3"]):
        raise SinglesOutOfOrder(
            "single-description levels must satisfy "
            f"L(G1) < L(G2) < L(G3), got {levels['G1']}, {levels['G2']}, "
            f"{levels['G3']}"
        )
    for small in SUBSETS:
        for large in SUBSETS:
            ms, ml = SUBSET_MASKS[small], SUBSET_MASKS[large]
            if small != large and ms & ml == ms:
                if levels[small] >= levels[large]:
                    raise MonotonicityViolated(
                        small, large, levels[small], levels[large]
                    )


@dataclass(frozen=True)
class Ordering:
    """An admissible level assignment, stored as the subset at each level.

    ``by_level[k-1]`` is the subset whose decoder reproduces streams
    1..k.  Instances are immutable, hashable, and validated on construction.
    """

    by_level: tuple[str, ...]

    def __post_init__(self) -> None:
        levels = {s: i + 1 for i, s in enumerate(self.by_level)}
        if len(self.by_level) != 7:
            raise NotBijective(
                f"expected 7 subsets, got {len(self.by_level)}"
            )
        _check_levels(levels)

    @property
    def levels(self) -> dict[str, int]:
        """Mapping subset name -> level."""
        return {s: i + 1 for i, s in enumerate(self.by_level)}

    @property
    def index(self) -> int:
        """Stable identifier 1..8 (position in :func:`enumerate_orderings`)."""
        return _ordering_index()[self.by_level]

    def level_of(self, subset: str) -> int:
        """Level assigned to a decoder subset."""
        if subset not in SUBSET_MASKS:
            raise KeyError(f"unknown decoder subset {subset!r}")
        return self.by_level.index(subset) + 1

    def inverse_level(self, level: int) -> str:
        """Decoder subset at a given level (1..7)."""
        if not 1 <= level <= 7:
            raise IndexError(f"level must be in 1..7, got {level}")
        return self.by_level[level - 1]

    def to_json_dict(self) -> dict:
        """JSON-ready form: {"levels": {"G1": 1, ...}} in canonical order."""
        lv = self.levels
        return {"levels": {s: lv[s] for s in SUBSETS}}

    def __str__(self) -> str:
        return "<" + ", ".join(self.by_level) + ">"


def validate_ordering(assignment: Mapping[str, int]) -> Ordering:
    """Build an :class:`Ordering` from a subset -> level mapping.

    Raises :class:`NotBijective`, :class:`SinglesOutOfOrder`, or
    :class:`MonotonicityViolated` on the first failed axiom.
    """
    _check_levels(assignment)
    by_level = tuple(
        s for s, _ in sorted(assignment.items(), key=lambda kv: kv[1])
    )
    return Ordering(by_level)


def enumerate_orderings() -> tuple[Ordering, ...]:
    """All admissible orderings in the documented order (L1 first).

    The order is lexicographic in the canonical subset indices of the level
    sequence, which is exactly what filtering ``itertools.permutations`` of
    the canonically sorted subsets produces.
    """
    return _all_orderings()


_cache: list = []


def _all_orderings() -> tuple[Ordering, ...]:
    if not _cache:
        found = []
        for seq in permutations(SUBSETS):
            try:
                _check_levels({s: i + 1 for i, s in enumerate(seq)})
            except OrderingError:
                continue
            found.append(Ordering(seq))
        found.sort(
            key=lambda o: tuple(_CANON_INDEX[s] for s in o.by_level)
        )
        _cache.append(tuple(found))
    return _cache[0]


def _ordering_index() -> dict[tuple[str, ...], int]:
    return {o.by_level: i + 1 for i, o in enumerate(_all_orderings())}


def level_of(ordering: Ordering, subset: str) -> int:
    """Functional form of :meth:`Ordering.level_of`."""
    return ordering.level_of(subset)


def inverse_level(ordering: Ordering, level: int) -> str:
    """Functional form of :meth:`Ordering.inverse_level`."""
    return ordering.inverse_level(level)


def ordering_from_json(obj: Mapping) -> Ordering:
    """Parse an ordering from its JSON forms.

    Accepts ``{"levels": {"G1": 1, ...}}`` or the shorthand
    ``{"ordering": n}`` with n in 1..8.
    """
    if "levels" in obj:
        levels = obj["levels"]
        if not isinstance(levels, Mapping):
            raise NotBijective("'levels' must be an object of subset: level")
        return validate_ordering({str(k): int(v) for k, v in levels.items()})
    if "ordering" in obj:
        n = int(obj["ordering"])
        rows = enumerate_orderings()
        if not 1 <= n <= len(rows):
            raise NotBijective(f"ordering index must be 1..{len(rows)}, got {n}")
        return rows[n - 1]
    raise NotBijective("expected a 'levels' mapping or an 'ordering' index")


L1: Ordering = Ordering(("G1", "G2", "G3", "G12", "G13", "G23", "G123"))
"""The fully alternating ordering (first row of :func:`enumerate_orderings`)."""
