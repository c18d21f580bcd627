"""Diagonals of infinite-rank projections and finite-spectrum operators:
exact feasibility decisions, witness enumeration, and constructive finite
realizations."""

from .errors import (
    DomainError,
    SchemaError,
    TruncationTooSmallError,
    UnsupportedOperationError,
)
from .scalars import INF, Infinite, format_rational, parse_rational
from .sequences import (
    DiagonalSequence,
    DivergenceFlags,
    DivergentTail,
    GeometricTail,
    SpectrumSpec,
    ThresholdStats,
    count_range,
    divergence_flags,
    materialize_tails,
    normalize,
    reflect,
    scale,
    threshold_stats,
)
from .majorize import (
    DeltaProfile,
    StepSequence,
    Witness,
    canonical_shift,
    check_finite_majorization,
    check_finite_rank_tail,
    delta_range,
    equivalent_form_check,
    lambda_from_witness,
    lebesgue_check,
    riemann_check,
)
from .decide import (
    Decision,
    Verdict,
    decide,
    decide_finite,
    decide_projection,
    enumerate_witnesses,
    witness_bounds,
)
from .construct import (
    GivensRotation,
    RealizationReport,
    SymmetricMatrix,
    horn_construct,
    move_mass,
    realize_truncated,
    verify_realization,
)
from .explore import (
    AllOfInterval,
    RegionSample,
    candidate_multiplicity_bound,
    emit_region,
    four_point_region,
    three_point_spectra,
)
from .serialize import (
    dump_decision,
    dump_json,
    dump_matrix,
    dump_profile,
    dump_report,
    dump_sequence,
    dump_spectrum,
    dump_stats,
    dump_witness,
    load_json,
    parse_matrix,
    parse_sequence,
    parse_spectrum,
    parse_witness,
)

__version__ = "0.1.0"

__all__ = [
    "AllOfInterval",
    "Decision",
    "DeltaProfile",
    "DiagonalSequence",
    "DivergenceFlags",
    "DivergentTail",
    "DomainError",
    "GeometricTail",
    "GivensRotation",
    "INF",
    "Infinite",
    "RealizationReport",
    "RegionSample",
    "SchemaError",
    "SpectrumSpec",
    "StepSequence",
    "SymmetricMatrix",
    "ThresholdStats",
    "TruncationTooSmallError",
    "UnsupportedOperationError",
    "Verdict",
    "Witness",
    "canonical_shift",
    "candidate_multiplicity_bound",
    "check_finite_majorization",
    "check_finite_rank_tail",
    "count_range",
    "decide",
    "decide_finite",
    "decide_projection",
    "delta_range",
    "divergence_flags",
    "dump_decision",
    "dump_json",
    "dump_matrix",
    "dump_profile",
    "dump_report",
    "dump_sequence",
    "dump_spectrum",
    "dump_stats",
    "dump_witness",
    "emit_region",
    "enumerate_witnesses",
    "equivalent_form_check",
    "format_rational",
    "four_point_region",
    "horn_construct",
    "lambda_from_witness",
    "lebesgue_check",
    "load_json",
    "materialize_tails",
    "move_mass",
    "normalize",
    "parse_matrix",
    "parse_rational",
    "parse_sequence",
    "parse_spectrum",
    "parse_witness",
    "realize_truncated",
    "reflect",
    "riemann_check",
    "scale",
    "threshold_stats",
    "three_point_spectra",
    "verify_realization",
    "witness_bounds",
]
