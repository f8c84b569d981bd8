"""Distortion-driven rate bounds for the Gaussian 3-description problem.

A unit-variance Gaussian source is described by three encoders; decoder S
(a nonempty subset of descriptions) must meet a mean-squared-error target
``D_S`` in (0, 1].  Targets are first *normalized* — a decoder can always use
the reconstruction of any sub-subset, so effectively
``D~_S = min over T <= S of D_T`` — and the normalized targets induce an
admissible decoder ordering (larger distortion means earlier level).

With ``r(S) = (1/2) log2(1/D~_S)``, the successive-refinement layer rates of
the induced ordering turn the distortion problem into a multilevel diversity
problem; the inner bound below is exactly the image of the eleven
rate-region inequalities under that reduction, and the outer bound subtracts
a fixed per-inequality slack, so the two polyhedra sit within a constant gap
of each other independent of the targets.  A sharper parametric outer bound
with free noise parameters ``d_1 >= ... >= d_6 >= d_7 = 0`` is exposed as
well; choosing ``d_i = D~`` of the level-i decoder makes it at least as
tight as the fixed-slack bound everywhere.

All arithmetic here is float64 with logs base 2; membership tests use an
absolute tolerance of 1e-9.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .ordering import (
    L1,
    SUBSET_MASKS,
    SUBSETS,
    Ordering,
    union,
    validate_ordering,
)
from .rate_region import LinearInequality

DEFAULT_TOL = 1e-9


class DistortionRangeError(ValueError):
    """A distortion target lies outside (0, 1]."""


class NotNormalized(ValueError):
    """The operation requires normalized (monotone) distortion targets."""


class NonMonotoneNoise(ValueError):
    """Noise parameters must satisfy d_1 >= ... >= d_6 >= d_7 = 0."""


@dataclass(frozen=True)
class DistortionVector:
    """Distortion targets for the 7 decoders, in canonical subset order."""

    values: tuple[float, ...]

    def __init__(self, values) -> None:
        if isinstance(values, Mapping):
            missing = [s for s in SUBSETS if s not in values]
            if missing:
                raise KeyError(f"missing distortion targets for {missing}")
            vals = tuple(float(values[s]) for s in SUBSETS)
        else:
            vals = tuple(float(v) for v in values)
            if len(vals) != 7:
                raise ValueError(f"expected 7 targets, got {len(vals)}")
        for s, v in zip(SUBSETS, vals):
            if not 0.0 < v <= 1.0:
                raise DistortionRangeError(
                    f"D_{s} = {v} is outside (0, 1]"
                )
        object.__setattr__(self, "values", vals)

    def __getitem__(self, subset: str) -> float:
        return self.values[SUBSETS.index(subset)]

    def as_dict(self) -> dict[str, float]:
        return {s: v for s, v in zip(SUBSETS, self.values)}


def normalize_distortions(D: DistortionVector) -> DistortionVector:
    """Effective targets: D~_S = min over nonempty T <= S of D_T."""
    by_mask = {SUBSET_MASKS[s]: D[s] for s in SUBSETS}
    out = []
    for s in SUBSETS:
        m = SUBSET_MASKS[s]
        out.append(min(v for t, v in by_mask.items() if t & m == t))
    return DistortionVector(out)


def induced_ordering(Dn: DistortionVector) -> Ordering:
    """Decoder ordering induced by normalized targets.

    Levels follow decreasing D~ with ties broken by canonical subset order.
    Raises :class:`NotNormalized` if the input is not normalized and
    :class:`~.ordering.SinglesOutOfOrder` if the single-description targets
    are not sorted (D_G1 >= D_G2 >= D_G3 is required; relabeling
    descriptions is the caller's business).
    """
    if Dn.values != normalize_distortions(Dn).values:
        raise NotNormalized(
            "distortion targets must be normalized first "
            "(see normalize_distortions)"
        )
    ranked = sorted(
        SUBSETS, key=lambda s: (-Dn[s], SUBSETS.index(s))
    )
    return validate_ordering({s: i + 1 for i, s in enumerate(ranked)})


def sr_layer_rates(
    Dn: DistortionVector, ordering: Ordering
) -> tuple[float, ...]:
    """Layer rates of the refinement decomposition along the ordering.

    h'_k = (1/2) log2(D~ at level k-1 / D~ at level k), with the level-0
    distortion defined as 1.  All values are non-negative when the ordering
    is the one induced by ``Dn``.
    """
    out = []
    prev = 1.0
    for k in range(1, 8):
        cur = Dn[ordering.inverse_level(k)]
        if cur > prev:
            raise NotNormalized(
                f"distortion increases from level {k - 1} to {k}; "
                "the ordering does not match the targets"
            )
        out.append(0.5 * math.log2(prev / cur))
        prev = cur
    return tuple(out)


# ---------------------------------------------------------------------------
# Inner and outer bounds.
# ---------------------------------------------------------------------------

_SUFFIXES = (
    "1.1", "1.2", "1.3",
    "2.12", "2.13", "2.23",
    "3.1", "3.2", "3.3",
    "4", "5",
)
_SLACK = {
    "1.1": 0.0, "1.2": 0.0, "1.3": 0.0,
    "2.12": 1.0, "2.13": 1.0, "2.23": 1.0,
    "3.1": 3.0, "3.2": 3.0, "3.3": 3.0,
    "4": 2.0, "5": 4.5,
}


@dataclass(frozen=True)
class BoundSet:
    """A family of linear rate bounds a . R >= b at fixed distortions."""

    kind: str
    constraints: tuple[LinearInequality, ...]
    ordering: Ordering
    distortions: DistortionVector


def _unit(*idx: int) -> tuple[float, float, float]:
    a = [0.0, 0.0, 0.0]
    for i in idx:
        a[i - 1] += 1.0
    return tuple(a)


def _base_terms(Dn: DistortionVector) -> list[tuple[str, tuple, float]]:
    """The eleven (suffix, normal, b) rows shared by inner and outer bounds."""
    r = {s: 0.5 * math.log2(1.0 / Dn[s]) for s in SUBSETS}
    singles = ("G1", "G2", "G3")
    rows: list[tuple[str, tuple, float]] = []
    for i in (1, 2, 3):
        rows.append((f"1.{i}", _unit(i), r[singles[i - 1]]))
    for suffix, (i, j) in zip(
        ("2.12", "2.13", "2.23"), ((1, 2), (1, 3), (2, 3))
    ):
        gi, gj = singles[i - 1], singles[j - 1]
        rows.append(
            (suffix, _unit(i, j), min(r[gi], r[gj]) + r[union(gi, gj)])
        )
    for suffix, i in zip(("3.1", "3.2", "3.3"), (1, 2, 3)):
        j, k = [x for x in (1, 2, 3) if x != i]
        gi, gj, gk = singles[i - 1], singles[j - 1], singles[k - 1]
        b = (
            min(r[gi], r[gj])
            + min(r[gi], r[gk])
            + min(r[union(gi, gj)], r[union(gi, gk)])
            + r["G123"]
        )
        rows.append((suffix, _unit(i, i, j, k), b))
    rows.append(
        (
            "4",
            _unit(1, 2, 3),
            r["G1"] + min(r["G12"], r["G3"]) + r["G123"],
        )
    )
    rows.append(
        (
            "5",
            _unit(1, 2, 3),
            r["G1"]
            + 0.5 * r["G2"]
            + 0.5 * min(r["G12"], r["G13"], r["G23"])
            + r["G123"],
        )
    )
    return rows


def inner_bound(D: DistortionVector) -> BoundSet:
    """Achievable-side bounds (distortions are normalized internally)."""
    Dn = normalize_distortions(D)
    o = induced_ordering(Dn)
    cons = tuple(
        LinearInequality(a, b, f"I-{s}") for s, a, b in _base_terms(Dn)
    )
    return BoundSet("inner", cons, o, Dn)


def outer_bound(D: DistortionVector) -> BoundSet:
    """Converse-side bounds: the inner b's minus fixed per-row slacks."""
    Dn = normalize_distortions(D)
    o = induced_ordering(Dn)
    cons = tuple(
        LinearInequality(a, b - _SLACK[s], f"O-{s}")
        for s, a, b in _base_terms(Dn)
    )
    return BoundSet("outer", cons, o, Dn)


# ---------------------------------------------------------------------------
# Parametric outer bound.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NoiseParams:
    """Auxiliary noise levels d_1 >= ... >= d_6 >= d_7 = 0."""

    d: tuple[float, ...]

    def __init__(self, d: Sequence[float]) -> None:
        vals = tuple(float(x) for x in d)
        if len(vals) == 6:
            vals = vals + (0.0,)
        if len(vals) != 7:
            raise ValueError("expected 6 or 7 noise parameters")
        if vals[6] != 0.0:
            raise NonMonotoneNoise("d_7 must be exactly 0")
        if any(x < 0 for x in vals):
            raise NonMonotoneNoise("noise parameters must be non-negative")
        if any(vals[i] < vals[i + 1] for i in range(6)):
            raise NonMonotoneNoise(
                f"noise parameters must be non-increasing, got {vals}"
            )
        object.__setattr__(self, "d", vals)

    @classmethod
    def matched(
        cls, Dn: DistortionVector, ordering: Ordering
    ) -> "NoiseParams":
        """d_i = normalized distortion of the level-i decoder (d_7 = 0)."""
        return cls(
            [Dn[ordering.inverse_level(i)] for i in range(1, 7)]
        )

    def at_level(self, level: int) -> float:
        return self.d[level - 1]


def parametric_outer_bound(
    D: DistortionVector, noise: NoiseParams
) -> BoundSet:
    """Converse bounds with free noise parameters (tags PO-*).

    For every admissible noise choice each bound is valid; at
    ``NoiseParams.matched`` the family dominates :func:`outer_bound`
    row-by-row.
    """
    Dn = normalize_distortions(D)
    o = induced_ordering(Dn)
    lv = o.levels
    d = noise.at_level
    lg = math.log2
    singles = ("G1", "G2", "G3")

    def single_factor(g: str, level: int) -> float:
        return lg((1.0 + d(level)) / (Dn[g] + d(level)))

    def pair_step(pair: str, hi: int, lo: int) -> float:
        # Rate carried by decoder `pair` between noise levels lo and hi.
        return lg(
            (1.0 + d(hi)) * (Dn[pair] + d(lo))
            / ((1.0 + d(lo)) * (Dn[pair] + d(hi)))
        )

    def tail(level: int) -> float:
        return lg(
            (Dn["G123"] + d(level)) / ((1.0 + d(level)) * Dn["G123"])
        )

    rows: list[tuple[str, tuple, float]] = []
    for i in (1, 2, 3):
        rows.append(
            (f"1.{i}", _unit(i), 0.5 * lg(1.0 / Dn[singles[i - 1]]))
        )
    for suffix, (i, j) in zip(
        ("2.12", "2.13", "2.23"), ((1, 2), (1, 3), (2, 3))
    ):
        gi, gj = singles[i - 1], singles[j - 1]
        gij = union(gi, gj)
        m = max(lv[gi], lv[gj])
        b = 0.5 * (
            single_factor(gi, lv[gi])
            + single_factor(gj, lv[gj])
            + lg((Dn[gij] + d(m)) / ((1.0 + d(m)) * Dn[gij]))
        )
        rows.append((suffix, _unit(i, j), b))
    for suffix, i in zip(("3.1", "3.2", "3.3"), (1, 2, 3)):
        j, k = [x for x in (1, 2, 3) if x != i]
        gi, gj, gk = singles[i - 1], singles[j - 1], singles[k - 1]
        gij, gik = union(gi, gj), union(gi, gk)
        b = 0.5 * (
            2.0 * single_factor(gi, lv[gi])
            + single_factor(gj, lv[gj])
            + single_factor(gk, lv[gk])
            + pair_step(gij, lv[gij], max(lv[gi], lv[gj]))
            + pair_step(gik, lv[gik], max(lv[gi], lv[gk]))
            + tail(max(lv[gij], lv[gik]))
        )
        rows.append((suffix, _unit(i, i, j, k), b))
    m4 = min(lv["G12"], lv["G3"])
    b4 = 0.5 * (
        single_factor("G1", lv["G1"])
        + single_factor("G2", lv["G2"])
        + single_factor("G3", m4)
        + pair_step("G12", m4, lv["G2"])
        + tail(m4)
    )
    rows.append(("4", _unit(1, 2, 3), b4))
    if lv["G3"] > lv["G12"]:
        alpha = lv["G3"]
    else:
        alpha = min(lv["G12"], lv["G13"], lv["G23"])
    b5 = (
        0.5
        * (
            single_factor("G1", lv["G1"])
            + single_factor("G2", lv["G2"])
            + single_factor("G3", lv["G3"])
        )
        + 0.25 * pair_step("G12", alpha, lv["G2"])
        + 0.25 * pair_step("G13", alpha, lv["G3"])
        + 0.25 * pair_step("G23", alpha, lv["G3"])
        + 0.5 * tail(lv["G3"])
    )
    rows.append(("5", _unit(1, 2, 3), b5))
    cons = tuple(
        LinearInequality(a, b, f"PO-{s}") for s, a, b in rows
    )
    return BoundSet("parametric", cons, o, Dn)


# ---------------------------------------------------------------------------
# Gap report and membership.
# ---------------------------------------------------------------------------

SUM_RATE_GAP_BOUND = 9.0 / (4.0 * math.sqrt(3.0))
"""Reference bound (about 1.2990) on the combined sum-rate facet distance.

Reported for context only; :func:`facet_gap` returns the two raw sum-rate
plane distances rather than asserting this combined figure.
"""


@dataclass(frozen=True)
class GapReport:
    """Normalized plane-to-plane distances between inner and outer bounds.

    Distances are (b_inner - b_outer) / ||a||, constant by construction:
    0 for single-rate planes, 1/sqrt(2) for pair planes, 3/sqrt(6) for the
    doubled-rate planes, and the pair (2/sqrt(3), 4.5/sqrt(3)) for the two
    sum-rate plane families.
    """

    singles: float
    pairs: float
    weighted_triples: float
    sum_rate: tuple[float, float]
    sum_rate_reference: float = SUM_RATE_GAP_BOUND

    def as_dict(self) -> dict:
        return {
            "(1,0,0)": self.singles,
            "(1,1,0)": self.pairs,
            "(2,1,1)": self.weighted_triples,
            "(1,1,1)": list(self.sum_rate),
            "(1,1,1)_reference": self.sum_rate_reference,
        }


def facet_gap(D: DistortionVector) -> GapReport:
    """Distances between matching inner and outer planes (see GapReport)."""
    inner = inner_bound(D)
    outer = outer_bound(D)
    gap = {}
    for ci, co in zip(inner.constraints, outer.constraints):
        suffix = ci.tag.split("-", 1)[1]
        norm = math.sqrt(sum(x * x for x in ci.a))
        gap[suffix] = (ci.b - co.b) / norm
    return GapReport(
        singles=max(gap["1.1"], gap["1.2"], gap["1.3"]),
        pairs=max(gap["2.12"], gap["2.13"], gap["2.23"]),
        weighted_triples=max(gap["3.1"], gap["3.2"], gap["3.3"]),
        sum_rate=(gap["4"], gap["5"]),
    )


def md_contains(
    bound: BoundSet, rates: Sequence[float], tol: float = DEFAULT_TOL
) -> bool:
    """Whether a rate triple satisfies every bound, within tolerance."""
    r = tuple(float(x) for x in rates)
    if len(r) != 3:
        raise ValueError("expected 3 rates")
    return all(
        sum(a * x for a, x in zip(c.a, r)) >= c.b - tol
        for c in bound.constraints
    )


def bound_json_dict(bound: BoundSet) -> dict:
    return {
        "kind": bound.kind,
        "ordering": bound.ordering.index,
        "constraints": [
            {"a": [float(x) for x in c.a], "b": float(c.b), "tag": c.tag}
            for c in bound.constraints
        ],
    }


def distortions_from_json(obj: Mapping) -> DistortionVector:
    """Parse {"D": {"G1": 0.5, ...}} into a DistortionVector."""
    if "D" not in obj or not isinstance(obj["D"], Mapping):
        raise ValueError("expected an object with a 'D' mapping")
    return DistortionVector(obj["D"])
