"""Rate regions, corner-point codecs, and Gaussian distortion bounds for
3-description multilevel diversity coding.

The package has three layers:

* :mod:`amld3.ordering` — the eight admissible decoder orderings;
* :mod:`amld3.rate_region` — exact polyhedral rate regions, corner
  enumeration, and the corner/scheme catalog of the L1 ordering;
* :mod:`amld3.codec` — bit-exact encoders/decoders for every catalog
  corner, including the XOR network-coding segments and time sharing;
* :mod:`amld3.gaussian_md` — inner/outer/parametric rate bounds for the
  Gaussian multiple-description problem with constant-gap reporting.

The ``amld3`` console script exposes all of it on the command line.
"""

from .ordering import (
    L1,
    SUBSET_MASKS,
    SUBSETS,
    MonotonicityViolated,
    NotBijective,
    Ordering,
    OrderingError,
    SinglesOutOfOrder,
    enumerate_orderings,
    inverse_level,
    level_of,
    ordering_from_json,
    validate_ordering,
)
from .rate_region import (
    CATALOG_LABELS,
    P_TAGS,
    Q_TAGS,
    CornerPoint,
    EntropyProfile,
    LinearInequality,
    NegativeEntropy,
    RateRegion,
    Regime,
    build_mld_region,
    classify_regime,
    contains,
    corner_json_dict,
    corner_scheme_catalog_L1,
    enumerate_corners,
    label_corners,
    region_json_dict,
    tight_constraints,
)
from .codec import (
    ALL_SCHEME_LABELS,
    TEMPLATES,
    Copy,
    DescriptionScheme,
    EncodedDescriptions,
    LengthMismatch,
    NonIntegralSplit,
    OddSplit,
    Piece,
    RegimeMismatch,
    SchemeTemplate,
    SourceBundle,
    Unresolvable,
    Xor,
    compose_time_share,
    decode,
    encode,
    instantiate_scheme,
    pack_bits,
    random_bundle,
    restrict,
    template_name_for_label,
    unpack_bits,
)
from .gaussian_md import (
    SUM_RATE_GAP_BOUND,
    BoundSet,
    DistortionRangeError,
    DistortionVector,
    GapReport,
    NoiseParams,
    NonMonotoneNoise,
    NotNormalized,
    bound_json_dict,
    distortions_from_json,
    facet_gap,
    induced_ordering,
    inner_bound,
    md_contains,
    normalize_distortions,
    outer_bound,
    parametric_outer_bound,
    sr_layer_rates,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_SCHEME_LABELS",
    "BoundSet",
    "CATALOG_LABELS",
    "Copy",
    "CornerPoint",
    "DescriptionScheme",
    "DistortionRangeError",
    "DistortionVector",
    "EncodedDescriptions",
    "EntropyProfile",
    "GapReport",
    "L1",
    "LengthMismatch",
    "LinearInequality",
    "MonotonicityViolated",
    "NegativeEntropy",
    "NoiseParams",
    "NonIntegralSplit",
    "NonMonotoneNoise",
    "NotBijective",
    "NotNormalized",
    "OddSplit",
    "Ordering",
    "OrderingError",
    "P_TAGS",
    "Piece",
    "Q_TAGS",
    "RateRegion",
    "Regime",
    "RegimeMismatch",
    "SchemeTemplate",
    "SinglesOutOfOrder",
    "SourceBundle",
    "SUBSETS",
    "SUBSET_MASKS",
    "SUM_RATE_GAP_BOUND",
    "TEMPLATES",
    "Unresolvable",
    "Xor",
    "bound_json_dict",
    "build_mld_region",
    "classify_regime",
    "compose_time_share",
    "contains",
    "corner_json_dict",
    "corner_scheme_catalog_L1",
    "decode",
    "distortions_from_json",
    "encode",
    "enumerate_corners",
    "enumerate_orderings",
    "facet_gap",
    "induced_ordering",
    "inner_bound",
    "instantiate_scheme",
    "inverse_level",
    "label_corners",
    "level_of",
    "md_contains",
    "normalize_distortions",
    "ordering_from_json",
    "outer_bound",
    "pack_bits",
    "parametric_outer_bound",
    "random_bundle",
    "region_json_dict",
    "restrict",
    "sr_layer_rates",
    "template_name_for_label",
    "tight_constraints",
    "unpack_bits",
    "validate_ordering",
]
