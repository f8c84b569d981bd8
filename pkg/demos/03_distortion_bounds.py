"""Distortion targets to rate bounds: normalization, sandwich, parametric."""

from __future__ import annotations

import random

from amld3 import (
    DistortionVector,
    NoiseParams,
    facet_gap,
    induced_ordering,
    inner_bound,
    md_contains,
    normalize_distortions,
    outer_bound,
    parametric_outer_bound,
    sr_layer_rates,
)
from amld3.ordering import SUBSETS

SEED = 6


def main():
    print("=" * 80)
    print("NORMALIZATION AND THE INDUCED ORDERING")
    print("=" * 80)
    raw = DistortionVector(
        {
            "G1": 0.50, "G2": 0.40, "G3": 0.30,
            "G12": 0.35, "G13": 0.90, "G23": 0.25,
            "G123": 0.60,
        }
    )
    norm = normalize_distortions(raw)
    print(f"{'decoder':<8} {'target':>7} {'effective':>10}")
    for s in SUBSETS:
        star = "  <- capped" if norm[s] != raw[s] else ""
        print(f"{s:<8} {raw[s]:>7.3f} {norm[s]:>10.3f}{star}")
    o = induced_ordering(norm)
    print(f"\ninduced ordering: #{o.index}  "
          f"({' < '.join(o.by_level)})")
    h = sr_layer_rates(norm, o)
    layers = ", ".join(f"{x:.3f}" for x in h)
    print(f"refinement layer rates per level: {layers}")
    print()

    print("=" * 80)
    print("INNER vs OUTER vs PARAMETRIC (dyadic targets)")
    print("=" * 80)
    dyadic = DistortionVector([2.0 ** -(k + 1) for k in range(7)])
    inner = inner_bound(dyadic)
    outer = outer_bound(dyadic)
    matched = NoiseParams.matched(inner.distortions, inner.ordering)
    po = parametric_outer_bound(dyadic, matched)
    print("D = (1/2, 1/4, ..., 1/128) in canonical subset order")
    print(f"{'row':<6} {'inner b':>9} {'outer b':>9} {'parametric b':>13}")
    for ci, co, cp in zip(inner.constraints, outer.constraints, po.constraints):
        suffix = ci.tag.split("-", 1)[1]
        print(f"{suffix:<6} {ci.b:>9.4f} {co.b:>9.4f} {cp.b:>13.4f}")
    print("\nthe parametric offsets sit between the fixed outer and the inner")
    print("offsets on every row (matched noise d_i = effective distortion at")
    print("level i), which is how the constant gap is established.")
    print()

    print("=" * 80)
    print("FACET GAPS ARE UNIVERSAL CONSTANTS")
    print("=" * 80)
    rng = random.Random(SEED)
    worst = {}
    for _ in range(300):
        vals, v = [], 1.0
        for _ in range(7):
            v *= rng.uniform(0.4, 0.95)
            vals.append(v)
        g = facet_gap(DistortionVector(vals))
        report = {
            "(1,0,0)": g.singles,
            "(1,1,0)": g.pairs,
            "(2,1,1)": g.weighted_triples,
            "(1,1,1) a": g.sum_rate[0],
            "(1,1,1) b": g.sum_rate[1],
        }
        for k, x in report.items():
            lo, hi = worst.get(k, (x, x))
            worst[k] = (min(lo, x), max(hi, x))
    print("plane-distance ranges over 300 random target vectors (bits):")
    for k, (lo, hi) in worst.items():
        print(f"  {k:<10} min {lo:.9f}   max {hi:.9f}")
    print("\nreference combined sum-rate figure 9/(4*sqrt(3)) ~ 1.29903811")
    print()

    print("=" * 80)
    print("MEMBERSHIP AGAINST THE BOUNDS")
    print("=" * 80)
    for probe in ((1.0, 2.4, 3.6), (1.0, 1.6, 2.0)):
        verdicts = ", ".join(
            f"{name} {md_contains(bound, probe)}"
            for name, bound in (
                ("inner", inner), ("outer", outer), ("parametric", po),
            )
        )
        print(f"rates {probe}: {verdicts}")
    print("\nthe second triple clears the fixed outer bound but not the")
    print("matched parametric one — the parametric family is strictly")
    print("sharper — and it misses the achievable (inner) set as well.")


if __name__ == "__main__":
    main()
