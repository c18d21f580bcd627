"""JSON (de)serialization for every public object, with path-anchored schema
errors.  Rationals travel as exact "p/q" strings, infinite counts as "inf",
and dumps are key-sorted upstream so reruns are byte-identical."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .construct import RealizationReport, SymmetricMatrix
from .decide import Decision, Verdict
from .errors import DomainError, SchemaError
from .majorize import DeltaProfile, Witness
from .scalars import INF, format_rational, parse_rational
from .sequences import (
    DiagonalSequence,
    DivergentTail,
    GeometricTail,
    SpectrumSpec,
    ThresholdStats,
)


def load_json(text: str, path: str = "$"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}", path) from exc


def dump_json(obj) -> str:
    """Canonical rendering: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _parse_scalar(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise SchemaError(f"expected a rational, got {value!r}", path)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value, path)
    raise SchemaError(
        f"expected a rational as an integer or 'p/q' string, got {type(value).__name__}",
        path,
    )


def _parse_count(value, path: str):
    if value == "inf":
        return INF
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"expected a count (integer ≥ 0 or \"inf\"), got {value!r}", path)
    if value < 0:
        raise SchemaError(f"count must be ≥ 0, got {value}", path)
    return value


def _check_keys(obj: Dict, allowed: Sequence[str], required: Sequence[str], path: str):
    if not isinstance(obj, dict):
        raise SchemaError(f"expected an object, got {type(obj).__name__}", path)
    for key in obj:
        if key not in allowed:
            raise SchemaError(f"unknown key {key!r} (allowed: {', '.join(allowed)})", path)
    for key in required:
        if key not in obj:
            raise SchemaError(f"missing required key {key!r}", path)


def _parse_tail(value, path: str):
    if value is None:
        return None
    _check_keys(value, ("kind", "first", "ratio"), ("kind",), path)
    kind = value["kind"]
    if kind == "divergent":
        for key in ("first", "ratio"):
            if key in value:
                raise SchemaError(f"divergent tails carry no {key!r}", f"{path}.{key}")
        return DivergentTail()
    if kind == "geometric":
        for key in ("first", "ratio"):
            if key not in value:
                raise SchemaError(f"geometric tails need {key!r}", path)
        return GeometricTail(
            _parse_scalar(value["first"], f"{path}.first"),
            _parse_scalar(value["ratio"], f"{path}.ratio"),
        )
    raise SchemaError(f"unknown tail kind {kind!r} (geometric or divergent)", f"{path}.kind")


def _dump_tail(tail) -> Optional[Dict]:
    if tail is None:
        return None
    if isinstance(tail, DivergentTail):
        return {"kind": "divergent"}
    return {
        "kind": "geometric",
        "first": format_rational(tail.first),
        "ratio": format_rational(tail.ratio),
    }


def parse_sequence(obj, path: str = "$") -> DiagonalSequence:
    _check_keys(
        obj,
        ("B", "explicit", "zero_count", "b_count", "zero_tail", "b_tail"),
        ("B",),
        path,
    )
    explicit_raw = obj.get("explicit", [])
    if not isinstance(explicit_raw, list):
        raise SchemaError("explicit must be an array of rationals", f"{path}.explicit")
    try:
        return DiagonalSequence(
            B=_parse_scalar(obj["B"], f"{path}.B"),
            explicit=tuple(
                _parse_scalar(v, f"{path}.explicit[{i}]") for i, v in enumerate(explicit_raw)
            ),
            zero_count=_parse_count(obj.get("zero_count", 0), f"{path}.zero_count"),
            b_count=_parse_count(obj.get("b_count", 0), f"{path}.b_count"),
            zero_tail=_parse_tail(obj.get("zero_tail"), f"{path}.zero_tail"),
            b_tail=_parse_tail(obj.get("b_tail"), f"{path}.b_tail"),
        )
    except DomainError as exc:
        raise SchemaError(str(exc), path) from exc


def dump_sequence(seq: DiagonalSequence) -> Dict:
    return {
        "B": format_rational(seq.B),
        "explicit": [format_rational(v) for v in seq.explicit],
        "zero_count": "inf" if seq.zero_count is INF else seq.zero_count,
        "b_count": "inf" if seq.b_count is INF else seq.b_count,
        "zero_tail": _dump_tail(seq.zero_tail),
        "b_tail": _dump_tail(seq.b_tail),
    }


def parse_spectrum(obj, path: str = "$") -> SpectrumSpec:
    if not isinstance(obj, list):
        raise SchemaError("expected an array of spectrum points", path)
    points = tuple(_parse_scalar(v, f"{path}[{i}]") for i, v in enumerate(obj))
    try:
        return SpectrumSpec(points)
    except DomainError as exc:
        raise SchemaError(str(exc), path) from exc


def dump_spectrum(spectrum: SpectrumSpec) -> List[str]:
    return [format_rational(p) for p in spectrum.points]


def parse_witness(obj, path: str = "$") -> Witness:
    _check_keys(obj, ("N", "k"), ("N", "k"), path)
    raw_n = obj["N"]
    if not isinstance(raw_n, list):
        raise SchemaError("N must be an array of integers ≥ 1", f"{path}.N")
    for i, v in enumerate(raw_n):
        if isinstance(v, bool) or not isinstance(v, int):
            raise SchemaError(f"multiplicity must be an integer, got {v!r}", f"{path}.N[{i}]")
    k = obj["k"]
    if isinstance(k, bool) or not isinstance(k, int):
        raise SchemaError(f"k must be an integer, got {k!r}", f"{path}.k")
    try:
        return Witness(tuple(raw_n), k)
    except DomainError as exc:
        raise SchemaError(str(exc), path) from exc


def dump_witness(witness: Witness) -> Dict:
    return {"N": list(witness.N), "k": witness.k}


def _dump_extended(value) -> str:
    return "inf" if value is INF else format_rational(value)


def dump_stats(stats: ThresholdStats) -> Dict:
    return {
        "alpha": format_rational(stats.alpha),
        "C": _dump_extended(stats.C),
        "D": _dump_extended(stats.D),
    }


def dump_decision(decision: Decision) -> Dict:
    out = {
        "verdict": decision.verdict.value,
        "witnesses": [dump_witness(w) for w in decision.witnesses],
        "stats": [dump_stats(st) for st in decision.stats],
        "bounds": list(decision.bounds),
    }
    if decision.note:
        out["note"] = decision.note
    return out


def dump_profile(profile: DeltaProfile) -> Dict:
    return {
        "trace_residual": format_rational(profile.trace_residual),
        "deltas": [
            {"m": m, "delta": format_rational(d)} for m, d in profile.checked_indices
        ],
    }


def parse_matrix(obj, path: str = "$") -> SymmetricMatrix:
    _check_keys(obj, ("dim", "rows"), ("dim", "rows"), path)
    dim = obj["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 0:
        raise SchemaError(f"dim must be an integer ≥ 0, got {dim!r}", f"{path}.dim")
    rows = obj["rows"]
    if not isinstance(rows, list) or len(rows) != dim:
        raise SchemaError(f"rows must be an array of {dim} arrays", f"{path}.rows")
    data = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise SchemaError(f"row must hold {dim} numbers", f"{path}.rows[{i}]")
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise SchemaError(f"expected a number, got {v!r}", f"{path}.rows[{i}][{j}]")
        data.append([float(v) for v in row])
    arr = np.array(data, dtype=float).reshape((dim, dim))
    if not np.array_equal(arr, arr.T):
        raise SchemaError("matrix is not symmetric", f"{path}.rows")
    return SymmetricMatrix(arr)


def dump_matrix(matrix: SymmetricMatrix) -> Dict:
    return {"dim": matrix.dimension, "rows": matrix.rows()}


def dump_report(report: RealizationReport) -> Dict:
    return {
        "diagonal_exact_match": report.diagonal_exact_match,
        "eigenvalues": list(report.eigenvalues),
        "spectrum_distance": report.spectrum_distance,
        "multiplicities": list(report.multiplicities),
        "within_tolerance": report.within_tolerance,
        "witness_multiplicities_ok": report.witness_multiplicities_ok,
    }
