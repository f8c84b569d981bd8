"""Unit tests for the exact rate-region machinery."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

import _oracles
from amld3 import (
    CATALOG_LABELS,
    CornerPoint,
    EntropyProfile,
    LinearInequality,
    NegativeEntropy,
    P_TAGS,
    Q_TAGS,
    RateRegion,
    Regime,
    build_mld_region,
    classify_regime,
    contains,
    corner_json_dict,
    corner_scheme_catalog_L1,
    enumerate_corners,
    enumerate_orderings,
    label_corners,
    region_json_dict,
    tight_constraints,
)
from amld3.ordering import L1

F = Fraction
ALL_ONES = EntropyProfile([1] * 7)


def _b_by_tag(region):
    return {c.tag: F(c.b) for c in region.constraints}


# ---------------------------------------------------------------------------
# Profiles and constraint construction.
# ---------------------------------------------------------------------------

def test_profile_parsing_and_cumsums():
    p = EntropyProfile(["1", "1/2", 0.25, F(3, 4), 2, 0, 1])
    assert p.h == (F(1), F(1, 2), F(1, 4), F(3, 4), F(2), F(0), F(1))
    assert p.cum(0) == 0
    assert p.cum(7) == F(11, 2)
    assert p.H[1] == F(3, 2)


def test_profile_rejects_negative_and_wrong_arity():
    with pytest.raises(NegativeEntropy):
        EntropyProfile([1, 1, -1, 1, 1, 1, 1])
    with pytest.raises(ValueError):
        EntropyProfile([1, 1, 1])


def test_eleven_constraints_fixed_tag_order():
    region = build_mld_region(L1, ALL_ONES)
    assert tuple(c.tag for c in region.constraints) == Q_TAGS
    for o in enumerate_orderings()[1:]:
        r = build_mld_region(o, ALL_ONES)
        assert tuple(c.tag for c in r.constraints) == P_TAGS


def test_all_ones_offsets_first_ordering():
    region = build_mld_region(L1, ALL_ONES)
    got = [F(c.b) for c in region.constraints]
    assert got == [1, 2, 3, 5, 6, 8, 13, 14, 15, 11, 11]


def test_coefficient_table_matches_frozen_oracle():
    # Unit profiles extract each h_k coefficient of every offset exactly.
    for k in range(7):
        e_k = [0] * 7
        e_k[k] = 1
        region = build_mld_region(L1, EntropyProfile(e_k))
        for c in region.constraints:
            a_exp, coeffs = _oracles.Q_TABLE[c.tag]
            assert tuple(c.a) == tuple(F(x) for x in a_exp)
            assert F(c.b) == F(coeffs[k]), (c.tag, k)


def test_offsets_are_linear_in_the_profile():
    rng = random.Random(20240817)
    for _ in range(25):
        h = [F(rng.randrange(0, 12), rng.choice((1, 2, 4))) for _ in range(7)]
        region = build_mld_region(L1, EntropyProfile(h))
        for c in region.constraints:
            _, coeffs = _oracles.Q_TABLE[c.tag]
            assert F(c.b) == sum(F(ck) * hk for ck, hk in zip(coeffs, h))


def test_non_first_ordering_hand_values():
    # Seventh row: G1,G2,G12,G3,G13,G23,G123 with all-ones layers.
    o = enumerate_orderings()[6]
    assert o.by_level == ("G1", "G2", "G12", "G3", "G13", "G23", "G123")
    b = _b_by_tag(build_mld_region(o, ALL_ONES))
    assert b["P1.1"] == 1 and b["P1.2"] == 2 and b["P1.3"] == 4
    assert b["P2.12"] == 4      # H_1 + H_3
    assert b["P2.13"] == 6      # H_1 + H_5
    assert b["P3.1"] == 12      # H_1 + H_1 + H_3 + H_7
    assert b["P4"] == 11        # H_1 + H_min(3,4) + H_7
    assert b["P5"] == F(21, 2)  # H_1 + H_2/2 + H_3/2 + H_7


def test_evaluate_slack():
    c = LinearInequality((1, 1, 0), F(5), "P2.12")
    assert c.evaluate((F(2), F(3), F(9))) == 0
    assert c.evaluate((2, 4, 0)) == 1


# ---------------------------------------------------------------------------
# Regime classification.
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "h,expected",
    [
        ((1, 1, 3, 1, 1, 1, 1), Regime.I),
        ((1, 1, 2, 1, 1, 1, 1), Regime.I),    # boundary h3 = h4 + h5
        ((1, 1, 1, 1, 1, 1, 1), Regime.II),
        ((1, 1, 3, 2, 2, 1, 1), Regime.II),
        ((1, 1, 2, 2, 1, 1, 1), Regime.II),   # boundary h3 = h4
        ((1, 1, 1, 3, 1, 1, 1), Regime.III),
        ((1, 1, 0, 1, 1, 1, 1), Regime.III),
    ],
)
def test_classify_regime(h, expected):
    assert classify_regime(EntropyProfile(h)) is expected
    assert _oracles.regime_of(h) == expected.value


# ---------------------------------------------------------------------------
# Corner enumeration against the frozen closed forms.
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("regime", ["I", "II", "III"])
def test_representative_corner_sets(regime):
    profile = EntropyProfile(_oracles.REP_PROFILES[regime])
    assert classify_regime(profile).value == regime
    corners = enumerate_corners(build_mld_region(L1, profile))
    got = {tuple(c.rates) for c in corners}
    expected = {
        tuple(F(x) for x in rates)
        for rates in _oracles.REP_CORNERS[regime].values()
    }
    assert got == expected
    assert len(corners) == len(expected)


@pytest.mark.parametrize("regime", ["I", "II", "III"])
def test_labeling_of_representative_corners(regime):
    profile = EntropyProfile(_oracles.REP_PROFILES[regime])
    corners = enumerate_corners(build_mld_region(L1, profile))
    labeled = label_corners(corners, profile)
    got = {c.label: tuple(c.rates) for c in labeled}
    assert got == {
        lbl: tuple(F(x) for x in rates)
        for lbl, rates in _oracles.REP_CORNERS[regime].items()
    }


def test_every_corner_has_at_least_three_tight_planes():
    for regime in ("I", "II", "III"):
        profile = EntropyProfile(_oracles.REP_PROFILES[regime])
        region = build_mld_region(L1, profile)
        for c in enumerate_corners(region):
            zeros = sum(1 for r in c.rates if r == 0)
            assert len(c.tight) + zeros >= 3, c


def test_all_ones_merges_coinciding_corners():
    region = build_mld_region(L1, ALL_ONES)
    corners = enumerate_corners(region)
    assert len(corners) == 10
    labeled = label_corners(corners, ALL_ONES)
    by_label = {c.label: c for c in labeled}
    assert set(by_label) == {
        "Y1", "Y2", "Y3", "Y4", "Y5", "Y6",
        "Y7+Y8", "Y9+Y11", "Y10", "Y12",
    }
    assert tuple(by_label["Y7+Y8"].rates) == (2, 3, 6)
    assert tuple(by_label["Y9+Y11"].rates) == (2, 5, 4)
    assert tuple(by_label["Y1"].rates) == (1, 4, 7)
    assert set(by_label["Y1"].tight) == {"Q1", "Q4", "Q7"}
    # Merged labels cover the full 12-label catalog.
    covered = {part for c in labeled for part in c.label.split("+")}
    assert covered == set(CATALOG_LABELS["II"])


def test_zero_profile_collapses_to_origin():
    profile = EntropyProfile([0] * 7)
    region = build_mld_region(L1, profile)
    corners = enumerate_corners(region)
    assert len(corners) == 1
    assert corners[0].rates == (0, 0, 0)
    assert set(corners[0].tight) == set(Q_TAGS)


def test_corner_scaling_is_homogeneous():
    lam = F(3, 2)
    base = EntropyProfile(_oracles.REP_PROFILES["I"])
    scaled = EntropyProfile([lam * x for x in base.h])
    c0 = enumerate_corners(build_mld_region(L1, base))
    c1 = enumerate_corners(build_mld_region(L1, scaled))
    assert {tuple(lam * r for r in c.rates) for c in c0} == {
        tuple(c.rates) for c in c1
    }


@pytest.mark.parametrize(
    "regime,drop",
    [("I", {"Q9", "Q11"}), ("II", {"Q11"}), ("III", {"Q10"})],
)
def test_inactive_constraints_are_redundant(regime, drop):
    # Strictly inside each regime, the dominated cuts can be removed without
    # changing the region: same corner set either way.
    profile = EntropyProfile(_oracles.REP_PROFILES[regime])
    full = build_mld_region(L1, profile)
    pruned = RateRegion(
        tuple(c for c in full.constraints if c.tag not in drop),
        L1,
        profile,
    )
    assert {tuple(c.rates) for c in enumerate_corners(full)} == {
        tuple(c.rates) for c in enumerate_corners(pruned)
    }


def test_corner_oracle_formulas_match_library_on_random_profiles():
    rng = random.Random(11)
    hits = {"I": 0, "II": 0, "III": 0}
    while min(hits.values()) < 5:
        h = [F(rng.randrange(0, 9), rng.choice((1, 2))) for _ in range(7)]
        profile = EntropyProfile(h)
        reg = classify_regime(profile).value
        if hits[reg] >= 12:
            continue
        hits[reg] += 1
        expected = {
            tuple(r) for r in _oracles.expected_corners(h).values()
        }
        got = {
            tuple(c.rates)
            for c in enumerate_corners(build_mld_region(L1, profile))
        }
        assert got == expected, h


# ---------------------------------------------------------------------------
# Membership.
# ---------------------------------------------------------------------------

def test_contains_at_corners_and_just_outside():
    eps = F(1, 1000)
    for regime in ("I", "II", "III"):
        profile = EntropyProfile(_oracles.REP_PROFILES[regime])
        region = build_mld_region(L1, profile)
        for c in enumerate_corners(region):
            assert contains(region, c.rates)
            shifted = tuple(r - eps for r in c.rates)
            assert not contains(region, shifted)
            bumped = tuple(r + 1 for r in c.rates)
            assert contains(region, bumped)


def test_contains_rejects_negative_rates():
    region = build_mld_region(L1, ALL_ONES)
    assert not contains(region, (-1, 100, 100))


def test_contains_parses_mixed_inputs():
    region = build_mld_region(L1, ALL_ONES)
    assert contains(region, ("1", F(4), 7.0))
    with pytest.raises(ValueError):
        contains(region, (1, 2))


def test_tight_constraints_recomputed():
    region = build_mld_region(L1, ALL_ONES)
    assert tight_constraints(region, (1, 4, 7)) == ("Q1", "Q4", "Q7")
    assert tight_constraints(region, (100, 100, 100)) == ()


# ---------------------------------------------------------------------------
# Catalog and serialization.
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("regime", ["I", "II", "III"])
def test_catalog_entries_are_true_corners(regime):
    profile = EntropyProfile(_oracles.REP_PROFILES[regime])
    region = build_mld_region(L1, profile)
    corner_rates = {tuple(c.rates) for c in enumerate_corners(region)}
    catalog = corner_scheme_catalog_L1(profile)
    assert [c.label for c, _ in catalog] == list(CATALOG_LABELS[regime])
    from amld3 import template_name_for_label

    for corner, template in catalog:
        assert tuple(corner.rates) in corner_rates
        assert corner.tight == tight_constraints(region, corner.rates)
        assert template.name == template_name_for_label(corner.label)


def test_catalog_at_boundary_keeps_one_entry_per_label():
    catalog = corner_scheme_catalog_L1(ALL_ONES)
    labels = [c.label for c, _ in catalog]
    assert labels == list(CATALOG_LABELS["II"])
    rates = [tuple(c.rates) for c, _ in catalog]
    assert rates.count((2, 3, 6)) == 2  # Y7 and Y8 coincide here


def test_region_json_shape():
    profile = EntropyProfile((1, 1, 1, 2, 1, 1, 1))
    region = build_mld_region(L1, profile)
    corners = label_corners(enumerate_corners(region), profile)
    doc = region_json_dict(region, corners)
    assert doc["ordering"] == 1
    assert doc["regime"] == "III"
    assert len(doc["constraints"]) == 11
    by_tag = {c["tag"]: c for c in doc["constraints"]}
    assert by_tag["Q7"]["a"] == [2, 1, 1]
    assert by_tag["Q7"]["b"] == "15"
    assert by_tag["Q11"]["b"] == "25/2"
    by_label = {c["label"]: c for c in doc["corners"]}
    assert by_label["Z7"]["rates"] == ["5/2", "7/2", "13/2"]
    assert by_label["Z1"]["rates"] == ["1", "5", "8"]


def test_region_json_for_other_orderings_has_null_regime():
    o = enumerate_orderings()[3]
    region = build_mld_region(o, ALL_ONES)
    doc = region_json_dict(region)
    assert doc["ordering"] == 4
    assert doc["regime"] is None
    assert "corners" not in doc


def test_corner_json_null_label():
    c = CornerPoint((F(1), F(2), F(3)), ("Q1",))
    doc = corner_json_dict(c)
    assert doc == {"rates": ["1", "2", "3"], "tight": ["Q1"], "label": None}


def test_regions_for_all_eight_orderings_have_corners():
    for o in enumerate_orderings():
        region = build_mld_region(o, ALL_ONES)
        corners = enumerate_corners(region)
        assert corners, o.index
        for c in corners:
            assert contains(region, c.rates)
