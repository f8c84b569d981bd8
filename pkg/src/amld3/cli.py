"""Command-line interface.

Subcommands::

    region     print a rate region (constraints + corners) as JSON or CSV
    corners    print just the corner points
    encode     encode a source bundle with a catalog scheme
    decode     recover streams from a subset of encoded descriptions
    md-bounds  inner/outer (and optional parametric) distortion bounds
    gap        normalized facet distances between inner and outer bounds
    check      membership of a rate triple (exact region or float bounds)

Exit codes: 0 ok, 2 invalid ordering, 3 negative entropy, 4 scheme/length
regime mismatch or odd split, 5 bit-length mismatch, 6 out-of-range
distortion or noise input, 1 other errors.

Outputs are deterministic byte-for-byte: dict keys are emitted in a fixed
order and floats are quantized to 12 significant digits.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import codec, gaussian_md, ordering, rate_region


def _quantize(obj):
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _quantize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_quantize(v) for v in obj]
    return obj


def _emit_json(obj) -> None:
    print(json.dumps(_quantize(obj), indent=2))


def _emit_csv(rows) -> None:
    for row in rows:
        print(",".join(str(x) for x in row))


def _read_text(spec: str) -> str:
    if spec == "-":
        return sys.stdin.read()
    return Path(spec).read_text()


def _parse_ordering(spec: str) -> ordering.Ordering:
    spec = spec.strip()
    if spec.isdigit():
        return ordering.ordering_from_json({"ordering": int(spec)})
    if spec.startswith("{"):
        return ordering.ordering_from_json(json.loads(spec))
    return ordering.ordering_from_json(json.loads(_read_text(spec)))


def _parse_profile(spec: str) -> rate_region.EntropyProfile:
    parts = [p.strip() for p in spec.split(",")]
    return rate_region.EntropyProfile([Fraction(p) for p in parts])


def _parse_rates_exact(spec: str) -> tuple[Fraction, ...]:
    vals = tuple(Fraction(p.strip()) for p in spec.split(","))
    if len(vals) != 3:
        raise ValueError(f"expected 3 rates, got {len(vals)}")
    return vals


def _parse_rates_float(spec: str) -> tuple[float, ...]:
    vals = tuple(float(p.strip()) for p in spec.split(","))
    if len(vals) != 3:
        raise ValueError(f"expected 3 rates, got {len(vals)}")
    return vals


def _parse_distortions(spec: str) -> gaussian_md.DistortionVector:
    spec = spec.strip()
    if spec == "-" or spec.startswith("{"):
        text = spec if spec.startswith("{") else _read_text(spec)
        return gaussian_md.distortions_from_json(json.loads(text))
    if "," in spec:
        vals = [float(p.strip()) for p in spec.split(",")]
        return gaussian_md.DistortionVector(vals)
    return gaussian_md.distortions_from_json(json.loads(_read_text(spec)))


def _parse_noise(spec: str) -> gaussian_md.NoiseParams:
    return gaussian_md.NoiseParams([float(p.strip()) for p in spec.split(",")])


def _labeled_corners(region, profile):
    corners = rate_region.enumerate_corners(region)
    if region.ordering == ordering.L1:
        corners = rate_region.label_corners(corners, profile)
    return corners


# ---------------------------------------------------------------------------
# Subcommands.
# ---------------------------------------------------------------------------

def cmd_region(args) -> None:
    o = _parse_ordering(args.ordering)
    e = _parse_profile(args.h)
    region = rate_region.build_mld_region(o, e)
    corners = _labeled_corners(region, e)
    if args.emit == "csv":
        rows = [("tag", "a1", "a2", "a3", "b")]
        for c in region.constraints:
            rows.append((c.tag, *(int(x) for x in c.a), c.b))
        _emit_csv(rows)
        return
    _emit_json(rate_region.region_json_dict(region, corners))


def cmd_corners(args) -> None:
    o = _parse_ordering(args.ordering)
    e = _parse_profile(args.h)
    region = rate_region.build_mld_region(o, e)
    corners = _labeled_corners(region, e)
    if args.emit == "csv":
        rows = [("label", "r1", "r2", "r3", "tight")]
        for c in corners:
            rows.append(
                (c.label or "", *c.rates, "|".join(c.tight))
            )
        _emit_csv(rows)
        return
    _emit_json(
        {"corners": [rate_region.corner_json_dict(c) for c in corners]}
    )


def _template_for(label: str) -> codec.SchemeTemplate:
    try:
        return codec.TEMPLATES[codec.template_name_for_label(label)]
    except KeyError:
        raise ValueError(
            f"unknown scheme label {label!r}; choose one of "
            f"{', '.join(codec.ALL_SCHEME_LABELS)}"
        ) from None


DESCRIPTION_FILES = ("G1.bits", "G2.bits", "G3.bits")


def cmd_encode(args) -> None:
    template = _template_for(args.scheme)
    manifest = json.loads(_read_text(args.manifest))
    lengths = [int(x) for x in manifest["lengths"]]
    base = Path(".") if args.manifest == "-" else Path(args.manifest).parent
    stream_path = Path(manifest["streams"])
    if not stream_path.is_absolute():
        stream_path = base / stream_path
    bundle = codec.SourceBundle.from_packed(
        stream_path.read_bytes(), lengths
    )
    scheme = codec.instantiate_scheme(template, lengths)
    enc = codec.encode(scheme, bundle)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, bits in zip(DESCRIPTION_FILES, enc.bits):
        (outdir / name).write_bytes(codec.pack_bits(bits))
    sidecar = {
        "scheme": args.scheme,
        "lengths": lengths,
        "bits": [int(b.size) for b in enc.bits],
        "files": list(DESCRIPTION_FILES),
    }
    text = json.dumps(_quantize(sidecar), indent=2)
    (outdir / "sidecar.json").write_text(text + "\n")
    print(text)


def cmd_decode(args) -> None:
    sidecar = json.loads(_read_text(args.sidecar))
    base = Path(".") if args.sidecar == "-" else Path(args.sidecar).parent
    label = sidecar["scheme"]
    lengths = [int(x) for x in sidecar["lengths"]]
    bits = [int(x) for x in sidecar["bits"]]
    scheme = codec.instantiate_scheme(_template_for(label), lengths)
    if list(scheme.description_lengths) != bits:
        raise codec.LengthMismatch(
            f"sidecar bit counts {bits} do not match scheme "
            f"{scheme.description_lengths}"
        )
    subset = args.subset
    if subset not in ordering.SUBSET_MASKS:
        raise ValueError(
            f"unknown decoder subset {subset!r}; expected one of "
            f"{', '.join(ordering.SUBSETS)}"
        )
    available = {}
    for i in ordering.subset_members(subset):
        path = Path(sidecar["files"][i - 1])
        if not path.is_absolute():
            path = base / path
        available[i] = codec.unpack_bits(path.read_bytes(), bits[i - 1])
    streams = codec.decode(scheme, subset, available)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    files = []
    for k, arr in enumerate(streams, start=1):
        name = f"V{k}.bits"
        (outdir / name).write_bytes(codec.pack_bits(arr))
        files.append(name)
    _emit_json(
        {
            "subset": subset,
            "level": ordering.L1.level_of(subset),
            "lengths": [int(a.size) for a in streams],
            "files": files,
        }
    )


def _bound_rows(tag, bound):
    return [
        (tag, c.tag, *(_quantize(float(x)) for x in c.a), _quantize(float(c.b)))
        for c in bound.constraints
    ]


def cmd_md_bounds(args) -> None:
    D = _parse_distortions(args.D)
    inner = gaussian_md.inner_bound(D)
    outer = gaussian_md.outer_bound(D)
    parametric = None
    if args.d is not None:
        parametric = gaussian_md.parametric_outer_bound(D, _parse_noise(args.d))
    if args.emit == "csv":
        rows = [("set", "tag", "a1", "a2", "a3", "b")]
        rows += _bound_rows("inner", inner)
        rows += _bound_rows("outer", outer)
        if parametric is not None:
            rows += _bound_rows("parametric", parametric)
        _emit_csv(rows)
        return
    out = {
        "normalized": {"D": inner.distortions.as_dict()},
        "ordering": inner.ordering.index,
        "inner": gaussian_md.bound_json_dict(inner),
        "outer": gaussian_md.bound_json_dict(outer),
        "parametric": (
            None if parametric is None
            else gaussian_md.bound_json_dict(parametric)
        ),
    }
    _emit_json(out)


def cmd_gap(args) -> None:
    report = gaussian_md.facet_gap(_parse_distortions(args.D))
    if args.emit == "csv":
        rows = [("family", "gap")]
        d = report.as_dict()
        for key in ("(1,0,0)", "(1,1,0)", "(2,1,1)"):
            rows.append((key, _quantize(d[key])))
        rows.append(("(1,1,1)", *(_quantize(x) for x in d["(1,1,1)"])))
        rows.append(("(1,1,1)_reference", _quantize(d["(1,1,1)_reference"])))
        _emit_csv(rows)
        return
    _emit_json(report.as_dict())


def cmd_check(args) -> None:
    if args.h is not None:
        o = _parse_ordering(args.ordering)
        e = _parse_profile(args.h)
        region = rate_region.build_mld_region(o, e)
        rates = _parse_rates_exact(args.rates)
        tight, violated = [], []
        for c in region.constraints:
            slack = c.evaluate(rates)
            if slack == 0:
                tight.append(c.tag)
            elif slack < 0:
                violated.append(c.tag)
        inside = rate_region.contains(region, rates)
        _emit_json(
            {"inside": inside, "tight": tight, "violated": violated}
        )
        return
    if args.D is None:
        raise ValueError("check needs either --h (exact region) or --D (bounds)")
    D = _parse_distortions(args.D)
    if args.which == "inner":
        bound = gaussian_md.inner_bound(D)
    elif args.which == "outer":
        bound = gaussian_md.outer_bound(D)
    else:
        if args.d is None:
            raise ValueError("--which parametric requires --d")
        bound = gaussian_md.parametric_outer_bound(D, _parse_noise(args.d))
    rates = _parse_rates_float(args.rates)
    tol = args.tol
    tight, violated = [], []
    for c in bound.constraints:
        slack = sum(a * x for a, x in zip(c.a, rates)) - c.b
        if abs(slack) <= tol:
            tight.append(c.tag)
        elif slack < 0:
            violated.append(c.tag)
    _emit_json(
        {
            "inside": not violated,
            "tight": tight,
            "violated": violated,
        }
    )


# ---------------------------------------------------------------------------
# Parser.
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amld3",
        description=(
            "Rate regions, corner-point codecs, and Gaussian distortion "
            "bounds for 3-description multilevel diversity coding."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_region_args(p):
        p.add_argument(
            "--ordering",
            default="1",
            help="ordering id 1..8, inline JSON, a JSON path, or '-' (stdin)",
        )
        p.add_argument(
            "--h",
            required=True,
            help="7 comma-separated layer entropies (exact rationals)",
        )
        p.add_argument("--emit", choices=("json", "csv"), default="json")

    p = sub.add_parser("region", help="constraints and corners of a region")
    add_region_args(p)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("corners", help="corner points of a region")
    add_region_args(p)
    p.set_defaults(func=cmd_corners)

    p = sub.add_parser("encode", help="encode a source bundle")
    p.add_argument("--scheme", required=True, help="catalog label, e.g. X5")
    p.add_argument(
        "--manifest",
        required=True,
        help="bundle manifest JSON path or '-' (stdin)",
    )
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode from a subset of descriptions")
    p.add_argument("--sidecar", required=True, help="sidecar JSON path")
    p.add_argument("--subset", required=True, help="decoder subset, e.g. G13")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("md-bounds", help="distortion rate bounds")
    p.add_argument(
        "--D",
        required=True,
        help="7 comma-separated targets (canonical subset order), JSON, or '-'",
    )
    p.add_argument(
        "--d", help="6 or 7 comma-separated non-increasing noise parameters"
    )
    p.add_argument("--emit", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_md_bounds)

    p = sub.add_parser("gap", help="inner/outer facet distances")
    p.add_argument("--D", required=True, help="distortion targets (as md-bounds)")
    p.add_argument("--emit", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("check", help="membership of a rate triple")
    p.add_argument("--rates", required=True, help="3 comma-separated rates")
    p.add_argument("--ordering", default="1")
    p.add_argument("--h", help="layer entropies: exact region check")
    p.add_argument("--D", help="distortion targets: bound check")
    p.add_argument(
        "--which",
        choices=("inner", "outer", "parametric"),
        default="outer",
        help="which bound set to check against (with --D)",
    )
    p.add_argument("--d", help="noise parameters for --which parametric")
    p.add_argument("--tol", type=float, default=gaussian_md.DEFAULT_TOL)
    p.set_defaults(func=cmd_check)
    return parser


def _fail(err: BaseException, code: int) -> int:
    print(f"error: {err}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
        return 0
    except ordering.OrderingError as e:
        return _fail(e, 2)
    except rate_region.NegativeEntropy as e:
        return _fail(e, 3)
    except (codec.RegimeMismatch, codec.OddSplit) as e:
        return _fail(e, 4)
    except codec.LengthMismatch as e:
        return _fail(e, 5)
    except (
        gaussian_md.DistortionRangeError,
        gaussian_md.NotNormalized,
        gaussian_md.NonMonotoneNoise,
    ) as e:
        return _fail(e, 6)
    except (ValueError, KeyError, OSError) as e:
        return _fail(e, 1)


if __name__ == "__main__":
    raise SystemExit(main())
