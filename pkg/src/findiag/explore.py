"""Spectrum exploration: sweep interior spectrum points (or pairs) against a
fixed diagonal sequence and map out the feasible region."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, List, Optional, Sequence, Union

from .decide import decide
from .errors import DomainError
from .scalars import INF, format_rational
from .sequences import (
    DiagonalSequence,
    GeometricTail,
    SpectrumSpec,
    divergence_flags,
    normalize,
    threshold_stats,
)


@dataclass(frozen=True)
class AllOfInterval:
    """Marker result: every interior point of (0, B) yields a feasible spectrum."""

    B: Fraction


@dataclass(frozen=True)
class RegionSample:
    """One decided grid point; A2 is None for single-interior-point sweeps."""

    A1: Fraction
    A2: Optional[Fraction]
    feasible: bool
    witness_count: int


def _halving_steps(ratio: Fraction) -> int:
    """Smallest u ≥ 1 with ratio^u ≤ 1/2 (tail elements per factor-2 band)."""
    u, x = 1, ratio
    while x > Fraction(1, 2):
        x *= ratio
        u += 1
    return u


def candidate_multiplicity_bound(seq: DiagonalSequence) -> int:
    """A sound cap on the multiplicity N of any feasible single interior point.

    For a witness at point A with multiplicity N, the trace equation forces
    N·A ≡ C(B/2) − D(B/2) (mod B), so A ≥ g/N and B − A ≥ g'/N with g, g'
    the positive residues of ±(C − D) mod B.  The r=1 mass bound gives
    N ≤ C(A)/A + D(A)/(B−A), where every entry weighs in at most 1; entries
    below g/N (a geometric-tail suffix) weigh < 1/(1−ρ0) in total, entries
    within g'/N of B weigh ≤ 1/(1−ρB), and what remains is counted by
    Ψ(N) = m_explicit + 1/(1−ρ0) + 1/(1−ρB) + T0(N) + SB(N)
    with T0/SB the per-tail counts of elements at least g/N (resp. above
    g'/N).  Since a tail has at most u (= halving steps) elements per
    factor-2 band, Ψ(2N) ≤ Ψ(N) + u0 + uB; scanning for the first N with
    N ≥ u0 + uB and Ψ(N) + u0 + uB ≤ N therefore bounds every feasible
    multiplicity (dyadic induction pushes Ψ(M) ≤ M to all larger M, and a
    present tail makes the weight bound strict).
    """
    seq = normalize(seq)
    half = threshold_stats(seq, seq.B / 2)
    if half.C is INF or half.D is INF:
        raise DomainError("multiplicity bound needs finite threshold statistics")
    B = seq.B
    cmd = half.C - half.D
    g = cmd % B
    if g == 0:
        g = B
    gp = (-cmd) % B
    if gp == 0:
        gp = B

    base = Fraction(len(seq.explicit))
    u0 = uB = 0
    zt = seq.zero_tail if isinstance(seq.zero_tail, GeometricTail) else None
    bt = seq.b_tail if isinstance(seq.b_tail, GeometricTail) else None
    if zt is not None:
        base += 1 / (1 - zt.ratio)
        u0 = _halving_steps(zt.ratio)
    if bt is not None:
        base += 1 / (1 - bt.ratio)
        uB = _halving_steps(bt.ratio)

    N = 1
    while True:
        psi = base
        if zt is not None:
            psi += zt.count_at_least(g / N)
        if bt is not None:
            psi += bt.count_greater(gp / N)
        if N >= u0 + uB and psi + u0 + uB <= N:
            return N
        N += 1


def _confirm_chunk(args) -> List[Fraction]:
    seq, candidates = args
    out = []
    for a in candidates:
        spectrum = SpectrumSpec((Fraction(0), a, seq.B))
        if decide(seq, spectrum).feasible:
            out.append(a)
    return out


def three_point_spectra(
    seq: DiagonalSequence, n_max: Optional[int] = None, workers: int = 1
) -> Union[AllOfInterval, FrozenSet[Fraction]]:
    """The exact set of interior points A making {0, A, B} feasible.

    Returns AllOfInterval when a statistic at B/2 diverges (then every A
    works).  Otherwise candidates A = (C − D − kB)/N for N up to the
    multiplicity cap are confirmed individually, so the returned set is
    exact — no tolerance, no sampling.  n_max overrides the scanned cap.
    """
    seq = normalize(seq)
    flags = divergence_flags(seq)
    if not (flags.sum_d_infinite and flags.sum_Bd_infinite):
        raise DomainError(
            "three-point exploration needs Σ d_i and Σ (B − d_i) both infinite"
        )
    half = threshold_stats(seq, seq.B / 2)
    if half.C is INF or half.D is INF:
        return AllOfInterval(seq.B)
    B = seq.B
    cmd = half.C - half.D
    cap = n_max if n_max is not None else candidate_multiplicity_bound(seq)
    if cap < 1:
        raise DomainError(f"multiplicity cap must be ≥ 1, got {cap}")

    candidates = set()
    ratio = cmd / B
    for N in range(1, cap + 1):
        k_lo = math.floor(ratio - N) + 1
        k_hi = math.ceil(ratio) - 1
        for k in range(k_lo, k_hi + 1):
            candidates.add((cmd - k * B) / N)

    ordered = sorted(candidates)
    workers = max(1, min(workers, len(ordered))) if ordered else 1
    if workers == 1:
        confirmed = _confirm_chunk((seq, ordered))
    else:
        step = -(-len(ordered) // workers)
        chunks = [(seq, ordered[i : i + step]) for i in range(0, len(ordered), step)]
        confirmed = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_confirm_chunk, chunks):
                confirmed.extend(part)
    return frozenset(confirmed)


def _region_chunk(args) -> List[RegionSample]:
    seq, grid, ps = args
    B = seq.B
    out = []
    for p in ps:
        a1 = Fraction(p, grid) * B
        for r in range(p + 1, grid):
            a2 = Fraction(r, grid) * B
            decision = decide(seq, SpectrumSpec((Fraction(0), a1, a2, B)))
            out.append(
                RegionSample(a1, a2, decision.feasible, len(decision.witnesses))
            )
    return out


def four_point_region(
    seq: DiagonalSequence, grid: int, workers: int = 1
) -> List[RegionSample]:
    """Decide every spectrum {0, p·B/q, r·B/q, B} with 0 < p < r < q on the
    q-division grid, in lexicographic (p, r) order."""
    if not isinstance(grid, int) or isinstance(grid, bool) or grid < 3:
        raise DomainError(f"grid must be an integer ≥ 3, got {grid!r}")
    seq = normalize(seq)
    ps = list(range(1, grid - 1))
    workers = max(1, min(workers, len(ps)))
    if workers == 1:
        return _region_chunk((seq, grid, ps))
    step = -(-len(ps) // workers)
    chunks = [(seq, grid, ps[i : i + step]) for i in range(0, len(ps), step)]
    rows: List[RegionSample] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_region_chunk, chunks):
            rows.extend(part)
    return rows


# --------------------------------------------------------------------------
# Emission
# --------------------------------------------------------------------------

def _svg_scatter(rows: Sequence[RegionSample], B: Optional[Fraction]) -> str:
    size, margin = 800, 60
    span = size - 2 * margin
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
    ]
    if rows:
        if B is None:
            B = max(
                [s.A1 for s in rows] + [s.A2 for s in rows if s.A2 is not None]
            )
        bf = float(B)

        def sx(a: Fraction) -> float:
            return margin + float(a) / bf * span

        def sy(a: Fraction) -> float:
            return size - margin - float(a) / bf * span

        parts.append(
            f'<rect x="{margin}" y="{margin}" width="{span}" height="{span}" '
            f'fill="none" stroke="#888" stroke-width="1"/>'
        )
        denom = 1
        for s in rows:
            denom = max(denom, s.A1.denominator if s.A1 != 0 else 1)
            if s.A2 is not None:
                denom = max(denom, s.A2.denominator)
        ticks = denom if denom <= 32 else 16
        for i in range(1, ticks):
            pos = margin + span * i / ticks
            parts.append(
                f'<line x1="{pos:.2f}" y1="{size - margin}" x2="{pos:.2f}" '
                f'y2="{size - margin + 6}" stroke="#555" stroke-width="1"/>'
            )
            parts.append(
                f'<line x1="{margin - 6}" y1="{pos:.2f}" x2="{margin}" '
                f'y2="{pos:.2f}" stroke="#555" stroke-width="1"/>'
            )
        one_dim = all(s.A2 is None for s in rows)
        for s in rows:
            x = sx(s.A1)
            y = size / 2 if one_dim else sy(s.A2)
            if s.feasible:
                parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="5" fill="#1a6"/>')
            else:
                parts.append(
                    f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="none" '
                    f'stroke="#bbb" stroke-width="1"/>'
                )
        if one_dim:
            parts.append(
                f'<line x1="{margin}" y1="{size / 2}" x2="{size - margin}" '
                f'y2="{size / 2}" stroke="#ddd" stroke-width="1"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_region(
    rows: Sequence[RegionSample], format: str = "csv", B: Optional[Fraction] = None
) -> bytes:
    """Serialize region samples: ``csv`` (columns A1,A2,feasible; A2 empty for
    single-point sweeps) or ``svg`` (scatter on the grid square, feasible
    points filled; single-point sweeps render on a midline).  Empty input
    gives a header-only CSV or an empty canvas."""
    if format == "csv":
        lines = ["A1,A2,feasible"]
        for s in rows:
            a2 = format_rational(s.A2) if s.A2 is not None else ""
            lines.append(
                f"{format_rational(s.A1)},{a2},{'true' if s.feasible else 'false'}"
            )
        return ("\n".join(lines) + "\n").encode("utf-8")
    if format == "svg":
        return _svg_scatter(rows, B).encode("utf-8")
    raise DomainError(f"unknown emission format {format!r} (expected csv or svg)")
