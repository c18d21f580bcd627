"""Feasibility decisions: which spectra admit the given diagonal.

The doubly infinite setting splits into a divergence case (feasible outright),
an exact lattice-plus-majorization case decided by witness enumeration, and
everything else (infeasible).  Compact/finite settings get their own entry
points (decide_projection for two-point spectra, decide_finite for finite
matrices).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Iterator, List, Optional, Sequence, Tuple

from .errors import DomainError
from .majorize import Witness, _equivalent_form, _weighted_sum, check_finite_majorization
from .scalars import INF
from .sequences import (
    DiagonalSequence,
    SpectrumSpec,
    ThresholdStats,
    divergence_flags,
    normalize,
    threshold_stats,
)


class Verdict(str, Enum):
    FEASIBLE_CASE_I = "FeasibleCaseI"
    FEASIBLE_CASE_II = "FeasibleCaseII"
    INFEASIBLE = "Infeasible"
    OUT_OF_SCOPE = "OutOfTheoremScope"


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    witnesses: Tuple[Witness, ...] = ()
    stats: Tuple[ThresholdStats, ...] = ()
    bounds: Tuple[int, ...] = ()
    note: str = ""

    @property
    def feasible(self) -> bool:
        return self.verdict in (Verdict.FEASIBLE_CASE_I, Verdict.FEASIBLE_CASE_II)


def _require_matching_b(seq: DiagonalSequence, spectrum: SpectrumSpec) -> None:
    if seq.B != spectrum.B:
        raise DomainError(
            f"sequence endpoint B={seq.B} differs from spectrum endpoint {spectrum.B}"
        )


def witness_bounds(stats: Sequence[ThresholdStats], spectrum: SpectrumSpec) -> Tuple[int, ...]:
    """Per-coordinate caps on candidate multiplicities.

    Dropping all but the j-th term from the r=j mass bound gives
    N_j ≤ ((B−A_j)·C(A_j) + A_j·D(A_j)) / ((B−A_j)·A_j); any witness violating
    this fails the mass bound at r=j.  Requires finite statistics.
    """
    B = spectrum.B
    by_alpha = {st.alpha: st for st in stats}
    bounds = []
    for a in spectrum.interior:
        st = by_alpha[a]
        if st.C is INF or st.D is INF:
            raise DomainError("witness bounds need finite threshold statistics")
        cap = ((B - a) * st.C + a * st.D) / ((B - a) * a)
        bounds.append(math.floor(cap))
    return tuple(bounds)


def _stats_for(seq: DiagonalSequence, spectrum: SpectrumSpec) -> Tuple[ThresholdStats, ...]:
    """Statistics at B/2 and at each interior point, in that order (deduped)."""
    alphas = [spectrum.B / 2]
    for a in spectrum.interior:
        if a not in alphas:
            alphas.append(a)
    return tuple(threshold_stats(seq, a) for a in alphas)


def _scan_chunk(args) -> List[Tuple[Tuple[int, ...], int]]:
    """Enumerate one slice of the multiplicity box (worker entry point)."""
    spectrum, bounds, half, stats_at, lo, hi = args
    B = spectrum.B
    cmd = half.C - half.D
    rest = [range(1, b + 1) for b in bounds[1:]]
    out = []
    for n1 in range(lo, hi + 1):
        for tail in product(*rest):
            N = (n1,) + tail
            k = (cmd - _weighted_sum(spectrum, N)) / B
            if k.denominator != 1:
                continue
            if _equivalent_form(half, stats_at, spectrum, N):
                out.append((N, int(k)))
    return out


def enumerate_witnesses(
    seq: DiagonalSequence, spectrum: SpectrumSpec, workers: int = 1
) -> List[Witness]:
    """All witnesses within the multiplicity bounds, in lexicographic N order.

    Each candidate N is kept iff the trace equation has an integer solution k
    and the mass bounds hold; both are decided exactly, so the returned list
    is deterministic (and worker-count independent).
    """
    _require_matching_b(seq, spectrum)
    seq = normalize(seq)
    if spectrum.n == 0:
        raise DomainError("witness enumeration needs at least one interior spectrum point")
    stats = _stats_for(seq, spectrum)
    half = stats[0]
    if half.C is INF or half.D is INF:
        raise DomainError(
            "witness enumeration needs finite threshold statistics; divergent "
            "inputs are feasible without a witness"
        )
    bounds = witness_bounds(stats, spectrum)
    if any(b < 1 for b in bounds):
        return []
    by_alpha = {st.alpha: st for st in stats}
    stats_at = {a: by_alpha[a] for a in spectrum.interior}

    b1 = bounds[0]
    workers = max(1, min(workers, b1))
    if workers == 1:
        found = _scan_chunk((spectrum, bounds, half, stats_at, 1, b1))
    else:
        step = -(-b1 // workers)
        chunks = [
            (spectrum, bounds, half, stats_at, lo, min(lo + step - 1, b1))
            for lo in range(1, b1 + 1, step)
        ]
        found = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_scan_chunk, chunks):
                found.extend(part)
    found.sort(key=lambda nk: nk[0])
    return [Witness(N, k) for N, k in found]


def decide(seq: DiagonalSequence, spectrum: SpectrumSpec, workers: int = 1) -> Decision:
    """Full feasibility decision for a diagonal against a finite spectrum set.

    Routing: two-point spectra go to the projection criterion; sequences with
    finite Σ d_i or finite Σ (B − d_i) are out of scope for the doubly
    infinite theorem; a divergent statistic at B/2 is feasible outright;
    otherwise feasibility is equivalent to a nonempty witness list.
    """
    _require_matching_b(seq, spectrum)
    seq = normalize(seq)
    if spectrum.n == 0:
        return decide_projection(seq)

    flags = divergence_flags(seq)
    stats = _stats_for(seq, spectrum)
    if not (flags.sum_d_infinite and flags.sum_Bd_infinite):
        return Decision(
            Verdict.OUT_OF_SCOPE,
            stats=stats,
            note=(
                "requires infinite mass on both sides: Σ d_i and Σ (B − d_i) "
                "must both diverge; for summable diagonals see decide_finite "
                "or check_finite_rank_tail"
            ),
        )
    half = stats[0]
    if half.C is INF or half.D is INF:
        which = "C(B/2)" if half.C is INF else "D(B/2)"
        return Decision(
            Verdict.FEASIBLE_CASE_I,
            stats=stats,
            note=f"{which} diverges; every interior multiplicity choice is realizable",
        )
    witnesses = enumerate_witnesses(seq, spectrum, workers=workers)
    bounds = witness_bounds(stats, spectrum)
    if witnesses:
        return Decision(Verdict.FEASIBLE_CASE_II, tuple(witnesses), stats, bounds)
    return Decision(
        Verdict.INFEASIBLE,
        stats=stats,
        bounds=bounds,
        note="no multiplicity vector satisfies the trace equation and mass bounds",
    )


def decide_projection(seq: DiagonalSequence, B=None) -> Decision:
    """Feasibility for the two-point spectrum {0, B} (diagonals of projections).

    Feasible iff a statistic at B/2 diverges or C(B/2) − D(B/2) is an exact
    integer multiple of B.  Applies regardless of which sums converge.
    """
    seq = normalize(seq)
    if B is not None and Fraction(B) != seq.B:
        raise DomainError(f"sequence endpoint B={seq.B} differs from requested {B}")
    half = threshold_stats(seq, seq.B / 2)
    stats = (half,)
    if half.C is INF or half.D is INF:
        which = "C(B/2)" if half.C is INF else "D(B/2)"
        return Decision(
            Verdict.FEASIBLE_CASE_I,
            stats=stats,
            note=f"{which} diverges",
        )
    k = (half.C - half.D) / seq.B
    if k.denominator == 1:
        return Decision(Verdict.FEASIBLE_CASE_II, (Witness((), int(k)),), stats)
    return Decision(
        Verdict.INFEASIBLE,
        stats=stats,
        note=f"C(B/2) − D(B/2) = {half.C - half.D} is not an integer multiple of B",
    )


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """All tuples of `parts` integers ≥ 1 summing to `total`, lexicographically."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def decide_finite(
    d: Sequence, spectrum: SpectrumSpec
) -> Tuple[bool, Optional[Tuple[int, ...]]]:
    """Finite Schur-Horn search: can a symmetric matrix with eigenvalues drawn
    from the spectrum (every point used at least once) have diagonal d?

    Returns (feasible, M) with M the lexicographically-first multiplicity
    vector (M_0, …, M_{n+1}), each ≥ 1, summing to len(d); (False, None) when
    no vector works or len(d) < n + 2.
    """
    values = [Fraction(x) for x in d]
    B = spectrum.B
    for v in values:
        if v < 0 or v > B:
            raise DomainError(f"diagonal entry {v} outside [0, {B}]")
    L = len(values)
    parts = len(spectrum.points)
    if L < parts:
        return False, None
    for M in _compositions(L, parts):
        lam = [p for p, m in zip(spectrum.points, M) for _ in range(m)]
        if check_finite_majorization(values, lam):
            return True, M
    return False, None
