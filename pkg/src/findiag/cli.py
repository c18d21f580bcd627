"""Command-line interface.

Exit codes: 0 feasible / success, 1 infeasible / failed verification,
2 out of scope, 64 malformed input (schema, arguments, spectra), 65 witness
rejected by the feasibility check before realization, 70 other errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from . import __version__
from .construct import (
    SymmetricMatrix,
    realize_truncated,
    verify_realization,
)
from .decide import Verdict, decide, decide_projection, enumerate_witnesses, witness_bounds
from .errors import (
    DomainError,
    SchemaError,
    TruncationTooSmallError,
    UnsupportedOperationError,
)
from .explore import emit_region, four_point_region, three_point_spectra, AllOfInterval, RegionSample
from .majorize import Witness, canonical_shift, riemann_check
from .scalars import _RATIONAL_RE, format_rational, parse_rational
from .sequences import DiagonalSequence, SpectrumSpec, divergence_flags, threshold_stats
from .scalars import INF
from .serialize import (
    dump_decision,
    dump_json,
    dump_matrix,
    dump_profile,
    dump_report,
    dump_sequence,
    dump_witness,
    load_json,
    parse_matrix,
    parse_sequence,
    parse_witness,
    _parse_scalar,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are malformed input
        self.exit(64, f"{self.prog}: error: {message}\n")


def _read_text(path: str, label: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}", label) from exc


def _load_sequence(path: str) -> DiagonalSequence:
    return parse_sequence(load_json(_read_text(path, "--seq"), "--seq"), "--seq")


def _rational_list(value: str, label: str) -> List[Fraction]:
    tokens = [t.strip() for t in value.split(",")]
    if tokens and all(_RATIONAL_RE.match(t) for t in tokens):
        return [parse_rational(t, label) for t in tokens]
    data = load_json(_read_text(value, label), label)
    if not isinstance(data, list):
        raise SchemaError("expected an array of rationals", label)
    return [_parse_scalar(v, f"{label}[{i}]") for i, v in enumerate(data)]


def _load_spectrum(args) -> Tuple[SpectrumSpec, Fraction]:
    """Parse --spectrum; with --translate, shift so the least point is 0.
    Returns (spectrum, shift) with shift the amount subtracted."""
    raw = _rational_list(args.spectrum, "--spectrum")
    if not raw:
        raise SchemaError("spectrum cannot be empty", "--spectrum")
    shift = Fraction(0)
    if raw[0] != 0:
        if not getattr(args, "translate", False):
            raise SchemaError(
                f"spectrum must start at 0 (got {format_rational(raw[0])}); "
                "pass --translate to shift it",
                "--spectrum",
            )
        shift = raw[0]
        raw = [p - shift for p in raw]
    try:
        return SpectrumSpec(tuple(raw)), shift
    except DomainError as exc:
        raise SchemaError(str(exc), "--spectrum") from exc


def _shift_sequence(seq: DiagonalSequence, shift: Fraction) -> DiagonalSequence:
    """Translate entries and B by −shift; counts and tails are endpoint-relative
    and carry over unchanged."""
    if shift == 0:
        return seq
    try:
        return DiagonalSequence(
            B=seq.B - shift,
            explicit=tuple(v - shift for v in seq.explicit),
            zero_count=seq.zero_count,
            b_count=seq.b_count,
            zero_tail=seq.zero_tail,
            b_tail=seq.b_tail,
        )
    except DomainError as exc:
        raise SchemaError(f"sequence does not fit the translated interval: {exc}", "--seq") from exc


def _print(payload) -> None:
    sys.stdout.write(dump_json(payload))


def _verdict_exit(verdict: Verdict) -> int:
    if verdict is Verdict.INFEASIBLE:
        return 1
    if verdict is Verdict.OUT_OF_SCOPE:
        return 2
    return 0


def _interior_subsets(points):
    """Proper subsets of the interior (including empty), by size then order."""
    interior = list(points[1:-1])
    n = len(interior)
    subsets = []
    for mask in range(2**n - 1):
        chosen = [interior[i] for i in range(n) if mask >> i & 1]
        subsets.append(chosen)
    subsets.sort(key=lambda s: (len(s), s))
    return subsets


def _explain_payload(seq: DiagonalSequence, spectrum: SpectrumSpec, witnesses):
    """Per-witness canonical shifts and partial-sum profiles, when the sequence
    admits a ℤ-indexed arrangement."""
    try:
        profiles = []
        for w in witnesses:
            shift = canonical_shift(seq, spectrum, w.N)
            if shift is None:
                profiles.append({"witness": dump_witness(w), "shift": None})
                continue
            ok, profile = riemann_check(seq, spectrum, Witness(w.N, shift))
            profiles.append(
                {
                    "witness": dump_witness(w),
                    "shift": shift,
                    "holds": ok,
                    "profile": dump_profile(profile),
                }
            )
        return {"profiles": profiles}
    except DomainError as exc:
        return {"profiles": None, "note": str(exc)}


def _cmd_decide(args) -> int:
    spectrum, shift = _load_spectrum(args)
    seq = _shift_sequence(_load_sequence(args.seq), shift)
    decision = decide(seq, spectrum, workers=args.workers)
    payload = dump_decision(decision)
    if shift:
        payload["translation"] = format_rational(shift)
    if args.explain:
        payload["explain"] = _explain_payload(seq, spectrum, decision.witnesses)
    if args.subset_spectra:
        results = []
        for subset in _interior_subsets(spectrum.points):
            if subset:
                sub = SpectrumSpec((Fraction(0), *subset, spectrum.B))
                d = decide(seq, sub, workers=args.workers)
            else:
                d = decide_projection(seq)
            results.append(
                {
                    "interior": [format_rational(p) for p in subset],
                    "verdict": d.verdict.value,
                    "witnesses": [dump_witness(w) for w in d.witnesses],
                }
            )
        payload["subset_results"] = results
    _print(payload)
    return _verdict_exit(decision.verdict)


def _cmd_witnesses(args) -> int:
    spectrum, shift = _load_spectrum(args)
    seq = _shift_sequence(_load_sequence(args.seq), shift)
    decision = decide(seq, spectrum, workers=args.workers)
    if decision.verdict is Verdict.OUT_OF_SCOPE:
        _print(dump_decision(decision))
        return 2
    payload = {
        "witnesses": [dump_witness(w) for w in decision.witnesses],
        "bounds": list(decision.bounds),
        "verdict": decision.verdict.value,
    }
    if args.explain:
        payload["explain"] = _explain_payload(seq, spectrum, decision.witnesses)
    _print(payload)
    return 0 if decision.witnesses else 1


def _cmd_project(args) -> int:
    seq = _load_sequence(args.seq)
    decision = decide_projection(seq)
    _print(dump_decision(decision))
    return _verdict_exit(decision.verdict)


def _cmd_realize(args) -> int:
    spectrum, shift = _load_spectrum(args)
    seq = _shift_sequence(_load_sequence(args.seq), shift)
    witness = parse_witness(load_json(args.witness, "--witness"), "--witness")

    flags = divergence_flags(seq)
    if flags.sum_d_infinite and flags.sum_Bd_infinite and spectrum.n >= 1:
        half = threshold_stats(seq, seq.B / 2)
        if half.C is not INF and half.D is not INF:
            from .majorize import equivalent_form_check

            if not equivalent_form_check(seq, spectrum, witness):
                print(
                    "error: witness fails the feasibility check for this sequence",
                    file=sys.stderr,
                )
                return 65

    matrix = realize_truncated(seq, spectrum, witness, args.trunc)
    report = verify_realization(
        matrix, spectrum, matrix.exact_diagonal, witness=witness
    )

    out_matrix = matrix
    exact = list(matrix.exact_diagonal)
    if shift:
        arr = matrix.as_array() + float(shift) * np.eye(matrix.dimension)
        exact = [v + shift for v in exact]
        for i, v in enumerate(exact):
            arr[i, i] = float(v)
        out_matrix = SymmetricMatrix(arr, matrix.provenance, tuple(exact))

    if args.pretty:
        sys.stdout.write(out_matrix.text_grid() + "\n")
        return 0
    payload = {
        "matrix": dump_matrix(out_matrix),
        "diagonal_exact": [format_rational(v) for v in exact],
        "report": dump_report(report),
    }
    if shift:
        payload["translation"] = format_rational(shift)
        payload["report"]["eigenvalues"] = [
            e + float(shift) for e in payload["report"]["eigenvalues"]
        ]
    text = dump_json(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify(args) -> int:
    spectrum, shift = _load_spectrum(args)
    raw = load_json(_read_text(args.matrix, "--matrix"), "--matrix")
    exact_from_file = None
    if isinstance(raw, dict) and "matrix" in raw:
        if "diagonal_exact" in raw:
            exact_from_file = [
                _parse_scalar(v, f"--matrix.diagonal_exact[{i}]")
                for i, v in enumerate(raw["diagonal_exact"])
            ]
        raw = raw["matrix"]
    matrix = parse_matrix(raw, "--matrix")

    if args.diag is not None:
        expected = _rational_list(args.diag, "--diag")
    elif exact_from_file is not None:
        expected = exact_from_file
    else:
        expected = [Fraction(matrix.entry(i, i)) for i in range(matrix.dimension)]

    if shift:
        arr = matrix.as_array() - float(shift) * np.eye(matrix.dimension)
        shifted_expected = [v - shift for v in expected]
        for i, v in enumerate(shifted_expected):
            arr[i, i] = float(v)
        matrix = SymmetricMatrix(arr)
        expected = shifted_expected

    witness = None
    if args.witness is not None:
        witness = parse_witness(load_json(args.witness, "--witness"), "--witness")

    report = verify_realization(matrix, spectrum, expected, witness=witness, tol=args.tol)
    if args.pretty:
        sys.stdout.write(matrix.text_grid() + "\n")
    else:
        payload = dump_report(report)
        if shift:
            payload["translation"] = format_rational(shift)
            payload["eigenvalues"] = [e + float(shift) for e in payload["eigenvalues"]]
        _print(payload)
    ok = (
        report.diagonal_exact_match
        and report.within_tolerance
        and report.witness_multiplicities_ok in (None, True)
    )
    return 0 if ok else 1


def _cmd_explore3(args) -> int:
    seq = _load_sequence(args.seq)
    result = three_point_spectra(seq, n_max=args.n_max, workers=args.workers)
    if isinstance(result, AllOfInterval):
        _print({"all_of_interval": {"B": format_rational(result.B)}})
        return 0
    points = sorted(result)
    _print({"points": [format_rational(p) for p in points], "count": len(points)})
    if args.svg:
        rows = [RegionSample(p, None, True, 0) for p in points]
        with open(args.svg, "wb") as fh:
            fh.write(emit_region(rows, "svg", B=seq.B))
    return 0


def _cmd_explore4(args) -> int:
    seq = _load_sequence(args.seq)
    rows = four_point_region(seq, args.grid, workers=args.workers)
    csv = emit_region(rows, "csv")
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(csv)
    else:
        sys.stdout.buffer.write(csv)
        sys.stdout.flush()
    if args.svg:
        with open(args.svg, "wb") as fh:
            fh.write(emit_region(rows, "svg", B=seq.B))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="findiag", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spectrum=True, translate=True):
        p.add_argument("--seq", required=True, help="path to a sequence JSON file")
        if spectrum:
            p.add_argument(
                "--spectrum",
                required=True,
                help="comma-separated rationals or a path to a JSON array",
            )
        if translate:
            p.add_argument(
                "--translate",
                action="store_true",
                help="shift a spectrum not starting at 0 (and the sequence) to [0, B]",
            )
        p.add_argument("--workers", type=int, default=1, help="parallel worker processes")

    p = sub.add_parser("decide", help="full feasibility decision")
    common(p)
    p.add_argument("--explain", action="store_true", help="attach per-witness partial-sum profiles")
    p.add_argument(
        "--subset-spectra",
        action="store_true",
        help="also report verdicts for every proper interior subset",
    )
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("witnesses", help="enumerate all witnesses")
    common(p)
    p.add_argument("--explain", action="store_true", help="attach per-witness partial-sum profiles")
    p.set_defaults(func=_cmd_witnesses)

    p = sub.add_parser("project", help="two-point spectrum {0, B} feasibility")
    common(p, spectrum=False, translate=False)
    p.set_defaults(func=_cmd_project)

    p = sub.add_parser("realize", help="build a truncated realization matrix")
    common(p)
    p.add_argument("--witness", required=True, help='witness JSON, e.g. {"N": [1], "k": -1}')
    p.add_argument("--trunc", type=int, required=True, help="tail truncation level T ≥ 0")
    p.add_argument("--out", help="write the JSON payload to a file instead of stdout")
    p.add_argument("--pretty", action="store_true", help="print an aligned text grid instead of JSON")
    p.set_defaults(func=_cmd_realize)

    p = sub.add_parser("verify", help="verify a realization matrix")
    p.add_argument("--matrix", required=True, help="path to a matrix JSON file (bare or realize output)")
    p.add_argument(
        "--spectrum",
        required=True,
        help="comma-separated rationals or a path to a JSON array",
    )
    p.add_argument("--translate", action="store_true", help="shift a spectrum not starting at 0")
    p.add_argument("--diag", help="expected diagonal: comma-separated rationals or JSON array path")
    p.add_argument("--witness", help="witness JSON to check interior multiplicities against")
    p.add_argument("--tol", type=float, default=1e-8, help="eigenvalue distance tolerance")
    p.add_argument("--pretty", action="store_true", help="print an aligned text grid instead of JSON")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("explore3", help="exact feasible set of single interior points")
    common(p, spectrum=False, translate=False)
    p.add_argument("--n-max", type=int, help="override the scanned multiplicity cap")
    p.add_argument("--svg", help="also write an SVG scatter to this path")
    p.set_defaults(func=_cmd_explore3)

    p = sub.add_parser("explore4", help="feasible region over interior point pairs")
    common(p, spectrum=False, translate=False)
    p.add_argument("--grid", type=int, required=True, help="grid divisions q ≥ 3")
    p.add_argument("--svg", help="also write an SVG scatter to this path")
    p.add_argument("--out", help="write the CSV to a file instead of stdout")
    p.set_defaults(func=_cmd_explore4)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 64
    except TruncationTooSmallError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 70
    except (DomainError, UnsupportedOperationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 70
    except Exception as exc:  # keep exit codes meaningful even on surprises
        print(f"unexpected error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 70


if __name__ == "__main__":
    sys.exit(main())
