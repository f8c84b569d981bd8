"""Exact admissible rate regions for 3-description multilevel diversity coding.

A source is split into seven independent streams with layer entropies
``h_1, ..., h_7`` (exact rationals) and cumulative sums ``H_k``.  Given an
admissible decoder ordering, the closure of achievable description-rate
triples ``(R1, R2, R3)`` is the polyhedron cut out by eleven linear
inequalities; :func:`build_mld_region` constructs them, and
:func:`enumerate_corners` lists every vertex of the region exactly.

For the fully alternating ordering L1 the shape of the corner set depends on
how the third layer compares with the fourth and fifth (three regimes), and
each corner is achieved by an explicit coding scheme; the pairing is exposed
by :func:`corner_scheme_catalog_L1`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd
from typing import Iterable, Mapping, Sequence

from .ordering import L1, Ordering, union


class NegativeEntropy(ValueError):
    """A layer entropy was negative."""


def as_fraction(x) -> Fraction:
    """Exact rational from int, str ('3', '27/2', '0.5'), Fraction, or float."""
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(x)


@dataclass(frozen=True)
class EntropyProfile:
    """Layer entropies h_1..h_7 as exact non-negative rationals."""

    h: tuple[Fraction, ...]

    def __init__(self, h: Iterable) -> None:
        vals = tuple(as_fraction(x) for x in h)
        if len(vals) != 7:
            raise ValueError(f"expected 7 layer entropies, got {len(vals)}")
        for i, v in enumerate(vals):
            if v < 0:
                raise NegativeEntropy(f"h_{i + 1} = {v} is negative")
        object.__setattr__(self, "h", vals)

    @property
    def H(self) -> tuple[Fraction, ...]:
        """Cumulative sums H_1..H_7."""
        out, acc = [], Fraction(0)
        for x in self.h:
            acc += x
            out.append(acc)
        return tuple(out)

    def cum(self, k: int) -> Fraction:
        """H_k with the convention H_0 = 0."""
        if k == 0:
            return Fraction(0)
        return self.H[k - 1]


@dataclass(frozen=True)
class LinearInequality:
    """One constraint a . (R1,R2,R3) >= b with a stable tag."""

    a: tuple
    b: object
    tag: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", tuple(self.a))
        if len(self.a) != 3:
            raise ValueError("normal must have 3 components")

    def evaluate(self, rates: Sequence) -> object:
        """Slack a . rates - b (same arithmetic as the stored fields)."""
        return sum(c * r for c, r in zip(self.a, rates)) - self.b


class Regime(enum.Enum):
    """Which corner catalog is active for the L1 ordering."""

    I = "I"
    II = "II"
    III = "III"


@dataclass(frozen=True)
class CornerPoint:
    """A vertex of the rate region.

    ``tight`` holds the tags of the constraints satisfied with equality,
    always recomputed from the coordinates (never trusted from a table).
    """

    rates: tuple[Fraction, Fraction, Fraction]
    tight: tuple[str, ...]
    label: str | None = None


@dataclass(frozen=True)
class RateRegion:
    """A polyhedral rate region {R >= 0 : a_t . R >= b_t for all t}."""

    constraints: tuple[LinearInequality, ...]
    ordering: Ordering | None = None
    profile: EntropyProfile | None = None
    _cache: dict = field(
        default_factory=dict, compare=False, repr=False, hash=False
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "constraints", tuple(self.constraints))

    def __hash__(self) -> int:
        return hash(self.constraints)


P_TAGS = (
    "P1.1", "P1.2", "P1.3",
    "P2.12", "P2.13", "P2.23",
    "P3.1", "P3.2", "P3.3",
    "P4", "P5",
)
Q_TAGS = tuple(f"Q{i}" for i in range(1, 12))


def build_mld_region(ordering: Ordering, profile: EntropyProfile) -> RateRegion:
    """The eleven-inequality description of the admissible rate region.

    All eleven constraints are always emitted, including any that are
    redundant for the given profile.  Tags are Q1..Q11 when ``ordering`` is
    L1 and P1.1..P5 otherwise, in the same fixed emission order.
    """
    lv = ordering.levels
    H = profile.cum
    singles = ("G1", "G2", "G3")
    tags = Q_TAGS if ordering == L1 else P_TAGS
    cons: list[LinearInequality] = []

    def unit(*idx: int) -> tuple[Fraction, ...]:
        a = [Fraction(0)] * 3
        for i in idx:
            a[i - 1] += 1
        return tuple(a)

    # single-description cuts
    for i in (1, 2, 3):
        cons.append(
            LinearInequality(unit(i), H(lv[singles[i - 1]]), tags[i - 1])
        )
    # pairwise cuts
    for t, (i, j) in zip(tags[3:6], ((1, 2), (1, 3), (2, 3))):
        gi, gj = singles[i - 1], singles[j - 1]
        b = H(min(lv[gi], lv[gj])) + H(lv[union(gi, gj)])
        cons.append(LinearInequality(unit(i, j), b, t))
    # weighted triple cuts (one description counted twice)
    for t, i in zip(tags[6:9], (1, 2, 3)):
        j, k = [x for x in (1, 2, 3) if x != i]
        gi, gj, gk = singles[i - 1], singles[j - 1], singles[k - 1]
        b = (
            H(min(lv[gi], lv[gj]))
            + H(min(lv[gi], lv[gk]))
            + H(min(lv[union(gi, gj)], lv[union(gi, gk)]))
            + H(7)
        )
        cons.append(LinearInequality(unit(i, i, j, k), b, t))
    # sum-rate cuts
    b4 = H(lv["G1"]) + H(min(lv["G12"], lv["G3"])) + H(7)
    cons.append(LinearInequality(unit(1, 2, 3), b4, tags[9]))
    b5 = (
        H(lv["G1"])
        + Fraction(1, 2) * H(lv["G2"])
        + Fraction(1, 2) * H(min(lv["G12"], lv["G13"], lv["G23"]))
        + H(7)
    )
    cons.append(LinearInequality(unit(1, 2, 3), b5, tags[10]))
    return RateRegion(tuple(cons), ordering, profile)


def classify_regime(profile: EntropyProfile) -> Regime:
    """Regime of the L1 corner catalog, by precedence I, II, III.

    Regime I when h_3 >= h_4 + h_5, else Regime II when h_3 >= h_4,
    else Regime III.
    """
    h = profile.h
    if h[2] >= h[3] + h[4]:
        return Regime.I
    if h[2] >= h[3]:
        return Regime.II
    return Regime.III


# ---------------------------------------------------------------------------
# Exact vertex enumeration and membership.
# ---------------------------------------------------------------------------

def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _int_rows(region: RateRegion):
    """Constraints plus axis planes as integer rows (a1,a2,a3,b,tag).

    Each row is scaled independently by the lcm of its denominators, which
    preserves the inequality (the scale is positive).
    """
    rows = region._cache.get("int_rows")
    if rows is None:
        rows = []
        for c in region.constraints:
            a = tuple(Fraction(x) for x in c.a)
            b = Fraction(c.b)
            k = reduce(
                _lcm, (x.denominator for x in a), b.denominator
            )
            rows.append(
                (
                    int(a[0] * k), int(a[1] * k), int(a[2] * k),
                    int(b * k), c.tag,
                )
            )
        for i in range(3):
            a = [0, 0, 0]
            a[i] = 1
            rows.append((a[0], a[1], a[2], 0, None))
        rows = tuple(rows)
        region._cache["int_rows"] = rows
    return rows


def _det3(r1, r2, r3) -> int:
    return (
        r1[0] * (r2[1] * r3[2] - r2[2] * r3[1])
        - r1[1] * (r2[0] * r3[2] - r2[2] * r3[0])
        + r1[2] * (r2[0] * r3[1] - r2[1] * r3[0])
    )


def enumerate_corners(region: RateRegion) -> tuple[CornerPoint, ...]:
    """All vertices of the region, exactly.

    Solves every 3-subset of the 14 planes (11 constraints plus the three
    coordinate planes) by integer Cramer elimination, keeps the feasible
    intersection points, and deduplicates by exact rate equality.  Corners
    are returned sorted lexicographically by rates; labels are not attached
    here (see :func:`label_corners`).
    """
    rows = _int_rows(region)
    seen: set[tuple[Fraction, Fraction, Fraction]] = set()
    for i, j, k in combinations(range(len(rows)), 3):
        ri, rj, rk = rows[i], rows[j], rows[k]
        det = _det3(ri[:3], rj[:3], rk[:3])
        if det == 0:
            continue
        bs = (ri[3], rj[3], rk[3])
        cols = (ri[:3], rj[:3], rk[:3])
        n = [
            _det3(
                *(cols[r][:c] + (bs[r],) + cols[r][c + 1:] for r in range(3))
            )
            for c in range(3)
        ]
        feasible = True
        for a1, a2, a3, b, _ in rows:
            lhs = a1 * n[0] + a2 * n[1] + a3 * n[2]
            if det > 0:
                if lhs < b * det:
                    feasible = False
                    break
            elif lhs > b * det:
                feasible = False
                break
        if feasible:
            seen.add(
                (Fraction(n[0], det), Fraction(n[1], det), Fraction(n[2], det))
            )
    corners = [
        CornerPoint(rates, tight_constraints(region, rates))
        for rates in sorted(seen)
    ]
    return tuple(corners)


def contains(region: RateRegion, rates: Sequence) -> bool:
    """Exact membership test (rates are parsed to rationals)."""
    r = tuple(as_fraction(x) for x in rates)
    if len(r) != 3:
        raise ValueError("expected 3 rates")
    q = reduce(_lcm, (x.denominator for x in r), 1)
    n = tuple(int(x * q) for x in r)
    for a1, a2, a3, b, _ in _int_rows(region):
        if a1 * n[0] + a2 * n[1] + a3 * n[2] < b * q:
            return False
    return True


def tight_constraints(region: RateRegion, rates: Sequence) -> tuple[str, ...]:
    """Tags of the constraints met with equality at the given point."""
    r = tuple(as_fraction(x) for x in rates)
    return tuple(
        c.tag for c in region.constraints if c.evaluate(r) == 0
    )


# ---------------------------------------------------------------------------
# Corner catalog for the L1 ordering.
# ---------------------------------------------------------------------------

CATALOG_LABELS: Mapping[str, tuple[str, ...]] = {
    "I": tuple(f"X{i}" for i in range(1, 11)),
    "II": tuple(f"Y{i}" for i in range(1, 13)),
    "III": tuple(f"Z{i}" for i in range(1, 11)),
}


def _catalog_rates(profile: EntropyProfile) -> dict[str, tuple]:
    """Closed-form corner coordinates of the active regime (label -> rates)."""
    h1, h2, h3, h4, h5, h6, h7 = profile.h
    H = profile.cum
    H1, H2, H3, H4, H5, H6, H7 = (H(k) for k in range(1, 8))
    common = {
        "1": (H1, H4, H7),
        "2": (H1, H7 - h5, H5),
        "3": (H1 + h3 + h4, H2, H7),
        "4": (H1 + h3 + h4 + h7, H2, H6),
    }
    lower = {
        "7": (H1 + h4, H3, H3 + h5 + h6 + h7),
        "8": (H1 + h3, H2 + h4, H3 + h5 + h6 + h7),
        "9": (H1 + h4, H3 + h6 + h7, H3 + h5),
        "10": (H1 + h3 + h7, H2 + h4, H3 + h5 + h6),
    }
    regime = classify_regime(profile)
    if regime is Regime.I:
        out = {f"X{n}": r for n, r in {**common, **lower}.items()}
        out["X5"] = (H1 + h4 + h5, H3 + h6 + h7, H3)
        out["X6"] = (H1 + h3 + h7, H2 + h4 + h5 + h6, H3)
    elif regime is Regime.II:
        out = {f"Y{n}": r for n, r in {**common, **lower}.items()}
        out["Y5"] = (H1 + h4 + h5, H2 + h4 + h5 + h6 + h7, H3)
        out["Y6"] = (H1 + h4 + h5 + h7, H2 + h4 + h5 + h6, H3)
        out["Y11"] = (H1 + h3, H3 + h6 + h7, H2 + h4 + h5)
        out["Y12"] = (H1 + h3 + h7, H3 + h6, H2 + h4 + h5)
    else:
        s = (h3 + h4) / 2
        out = {f"Z{n}": r for n, r in common.items()}
        out["Z5"] = (H1 + h4 + h5, H2 + h4 + h5 + h6 + h7, H3)
        out["Z6"] = (H1 + h4 + h5 + h7, H2 + h4 + h5 + h6, H3)
        out["Z7"] = (H1 + s, H2 + s, H2 + s + h5 + h6 + h7)
        out["Z8"] = (H1 + s, H2 + s + h6 + h7, H2 + s + h5)
        out["Z9"] = (H1 + s + h7, H2 + s, H2 + s + h5 + h6)
        out["Z10"] = (H1 + s + h7, H2 + s + h6, H2 + s + h5)
    labels = CATALOG_LABELS[regime.value]
    return {lbl: out[lbl] for lbl in labels}


def corner_scheme_catalog_L1(profile: EntropyProfile) -> list[tuple]:
    """Corner points of the L1 region paired with their coding schemes.

    Returns one ``(CornerPoint, SchemeTemplate)`` entry per catalog label of
    the active regime (10, 12, or 10 entries).  At boundary profiles two
    labels may share the same coordinates; each keeps its own entry (the
    schemes differ), and :func:`label_corners` is where coinciding corners
    get a merged label.  Tight sets are recomputed from the coordinates.
    """
    from . import codec

    region = build_mld_region(L1, profile)
    out = []
    for label, rates in _catalog_rates(profile).items():
        corner = CornerPoint(rates, tight_constraints(region, rates), label)
        template = codec.TEMPLATES[codec.template_name_for_label(label)]
        out.append((corner, template))
    return out


def label_corners(
    corners: Sequence[CornerPoint], profile: EntropyProfile
) -> tuple[CornerPoint, ...]:
    """Attach catalog labels to enumerated corners of an L1 region.

    Corners whose coordinates match several catalog entries (boundary
    profiles) get the merged label, e.g. ``"Y7+Y8"``.  Corners not in the
    catalog keep label None.
    """
    table: dict[tuple, list[str]] = {}
    for lbl, rates in _catalog_rates(profile).items():
        table.setdefault(tuple(rates), []).append(lbl)
    return tuple(
        replace(c, label="+".join(table[c.rates]))
        if c.rates in table else c
        for c in corners
    )


# ---------------------------------------------------------------------------
# JSON serialization.
# ---------------------------------------------------------------------------

def _rat_str(x) -> str:
    return str(as_fraction(x))


def corner_json_dict(corner: CornerPoint) -> dict:
    return {
        "rates": [_rat_str(r) for r in corner.rates],
        "tight": list(corner.tight),
        "label": corner.label,
    }


def region_json_dict(
    region: RateRegion, corners: Sequence[CornerPoint] | None = None
) -> dict:
    """JSON-ready form of a region (and optionally its corners)."""
    out: dict = {}
    if region.ordering is not None:
        out["ordering"] = region.ordering.index
        out["regime"] = (
            classify_regime(region.profile).value
            if region.ordering == L1 and region.profile is not None
            else None
        )
    out["constraints"] = [
        {
            "a": [
                int(x) if Fraction(x).denominator == 1 else _rat_str(x)
                for x in c.a
            ],
            "b": _rat_str(c.b),
            "tag": c.tag,
        }
        for c in region.constraints
    ]
    if corners is not None:
        out["corners"] = [corner_json_dict(c) for c in corners]
    return out
