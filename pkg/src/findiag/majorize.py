"""Majorization predicates: finite Schur-Horn, finite-rank tails, and the
two interior-majorization forms for doubly infinite diagonals.

The interior forms compare a nondecreasing ℤ-indexed arrangement of the
diagonal against a step sequence taking each spectrum value on a block of
indices.  Both are decided in exact rational arithmetic: the limit condition
reduces to a closed-form trace residual, and the partial-sum condition needs
checking only on a finite index window.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

from .errors import DomainError
from .scalars import INF
from .sequences import (
    DiagonalSequence,
    DivergentTail,
    GeometricTail,
    SpectrumSpec,
    count_range,
    threshold_stats,
)


@dataclass(frozen=True)
class Witness:
    """Multiplicities N_j ≥ 1 for the interior spectrum points, plus an integer shift k.

    In trace-equation contexts k is the integer balancing
    C − D = Σ A_j N_j + kB; in step-sequence contexts it is the index shift
    placing the first interior block at k+1.  The two are related through the
    canonical alignment (see canonical_shift).
    """

    N: Tuple[int, ...]
    k: int

    def __post_init__(self):
        N = tuple(self.N)
        for nj in N:
            if not isinstance(nj, int) or isinstance(nj, bool) or nj < 1:
                raise DomainError(f"witness multiplicities must be integers ≥ 1, got {nj!r}")
        if not isinstance(self.k, int) or isinstance(self.k, bool):
            raise DomainError(f"witness k must be an integer, got {self.k!r}")
        object.__setattr__(self, "N", N)

    def sigma(self, r: int) -> int:
        """σ_r = N_1 + … + N_r."""
        return sum(self.N[:r])

    @property
    def sigma_total(self) -> int:
        return sum(self.N)


@dataclass(frozen=True)
class StepSequence:
    """The nondecreasing step sequence λ over ℤ determined by (spectrum, witness).

    λ_i = 0 for i ≤ k, λ_i = A_r on the block k+σ_{r−1}+1 … k+σ_r, and
    λ_i = B for i ≥ k+σ_n+1; every spectrum value is attained.
    """

    spectrum: SpectrumSpec
    witness: Witness

    def __post_init__(self):
        if len(self.witness.N) != self.spectrum.n:
            raise DomainError(
                f"witness has {len(self.witness.N)} multiplicities for "
                f"{self.spectrum.n} interior spectrum points"
            )

    @property
    def first_b_index(self) -> int:
        return self.witness.k + self.witness.sigma_total + 1

    def value(self, i: int) -> Fraction:
        k = self.witness.k
        if i <= k:
            return Fraction(0)
        offset = i - k
        sigma = 0
        for r, nr in enumerate(self.witness.N, start=1):
            sigma += nr
            if offset <= sigma:
                return self.spectrum.points[r]
        return self.spectrum.B

    def prefix(self, m: int) -> Fraction:
        """Σ_{i≤m} λ_i (all terms below k+1 vanish)."""
        k = self.witness.k
        total = Fraction(0)
        if m <= k:
            return total
        sigma_prev = 0
        for r, nr in enumerate(self.witness.N, start=1):
            taken = max(0, min(m - k, sigma_prev + nr) - sigma_prev)
            total += self.spectrum.points[r] * taken
            sigma_prev += nr
        total += self.spectrum.B * max(0, m - k - sigma_prev)
        return total


@dataclass(frozen=True)
class DeltaProfile:
    """Exact partial-sum gaps δ_m on the checked window, plus the trace residual."""

    checked_indices: Tuple[Tuple[int, Fraction], ...]
    trace_residual: Fraction

    @property
    def min_delta(self) -> Fraction:
        return min(d for _, d in self.checked_indices)


def lambda_from_witness(spectrum: SpectrumSpec, witness: Witness) -> StepSequence:
    """Instantiate the step sequence; multiplicity of A_r is N_r by construction."""
    return StepSequence(spectrum, witness)


# --------------------------------------------------------------------------
# ℤ-indexed layout of a diagonal sequence
# --------------------------------------------------------------------------

class _ZLayout:
    """A diagonal sequence arranged nondecreasing over ℤ.

    Alignment convention: the explicit entries (as represented, after
    normalization) sit at indices 1..M ascending.  The zero side fills
    indices ≤ 0 — exact zeros, or the geometric tail with element t at index
    −t.  The b side fills indices > M — exact Bs, or tail element t at index
    M+1+t.  The representation is the alignment: materializing tail elements
    into the explicit part shifts the indexing, and witnesses are relative to
    the representation they were computed against.
    """

    def __init__(self, seq: DiagonalSequence):
        self.B = seq.B
        self.mid = seq.explicit
        M = len(self.mid)

        if isinstance(seq.zero_tail, GeometricTail):
            if seq.zero_count != 0:
                raise DomainError(
                    "a sequence with both exact zeros and a zero tail has no "
                    "nondecreasing ℤ-indexed arrangement"
                )
            self.left: Optional[GeometricTail] = seq.zero_tail
            if M and seq.zero_tail.first > self.mid[0]:
                raise DomainError(
                    f"zero-tail element {seq.zero_tail.first} exceeds the smallest "
                    f"explicit entry {self.mid[0]}; materialize the tail first"
                )
        elif seq.zero_tail is None and seq.zero_count is INF:
            self.left = None
        else:
            raise DomainError(
                "the zero side must be a geometric tail (with zero_count 0) or "
                "infinitely many exact zeros (with no tail) to index over ℤ"
            )

        if isinstance(seq.b_tail, GeometricTail):
            if seq.b_count != 0:
                raise DomainError(
                    "a sequence with both exact Bs and a b-tail has no "
                    "nondecreasing ℤ-indexed arrangement"
                )
            self.right: Optional[GeometricTail] = seq.b_tail
            if M and self.B - seq.b_tail.first < self.mid[-1]:
                raise DomainError(
                    f"b-tail element {self.B - seq.b_tail.first} is below the largest "
                    f"explicit entry {self.mid[-1]}; materialize the tail first"
                )
            if not M and self.left is not None and seq.zero_tail.first > self.B - seq.b_tail.first:
                raise DomainError("zero-tail elements exceed b-tail elements")
        elif seq.b_tail is None and seq.b_count is INF:
            self.right = None
        else:
            raise DomainError(
                "the b side must be a geometric tail (with b_count 0) or "
                "infinitely many exact Bs (with no tail) to index over ℤ"
            )

    @property
    def mid_len(self) -> int:
        return len(self.mid)

    def element(self, i: int) -> Fraction:
        if i <= 0:
            return self.left.element(-i) if self.left is not None else Fraction(0)
        M = len(self.mid)
        if i <= M:
            return self.mid[i - 1]
        if self.right is not None:
            return self.B - self.right.element(i - M - 1)
        return self.B

    def prefix(self, m: int) -> Fraction:
        """Σ_{i≤m} d_i, exact; the zero side contributes a closed-form remainder."""
        if m <= 0:
            return self.left.tail_sum_from(-m) if self.left is not None else Fraction(0)
        total = self.prefix(0)
        M = len(self.mid)
        total += sum(self.mid[: min(m, M)], Fraction(0))
        if m > M:
            count = m - M
            total += self.B * count
            if self.right is not None:
                total -= self.right.head_sum(count)
        return total

    def largest_index_below(self, alpha: Fraction) -> int:
        """The largest index m with d_m < alpha, for 0 < alpha < B."""
        if self.left is not None:
            c = self.left.count_at_least(alpha)
            if c > 0:
                # indices −(c−1)…0 hold elements ≥ alpha; index −c is the first below
                return -c
        if self.right is not None:
            c = self.right.count_greater(self.B - alpha)
            if c > 0:
                # c smallest b-side elements lie below alpha
                return len(self.mid) + c
        return sum(1 for v in self.mid if v < alpha)


def _split_alpha(spectrum: SpectrumSpec) -> Fraction:
    """The threshold anchoring the trace residual: A_n, or B/2 when there are
    no interior points (the residual limit is threshold-independent)."""
    return spectrum.points[-2] if spectrum.n >= 1 else spectrum.B / 2


def _finite_stats(seq: DiagonalSequence, alpha: Fraction):
    stats = threshold_stats(seq, alpha)
    if stats.C is INF or stats.D is INF:
        raise DomainError(
            f"threshold statistics at {alpha} are infinite; divergent inputs are "
            "feasible outright and are routed before majorization checks"
        )
    return stats


def _weighted_sum(spectrum: SpectrumSpec, N: Sequence[int]) -> Fraction:
    return sum(
        (a * nj for a, nj in zip(spectrum.interior, N)), Fraction(0)
    )


# --------------------------------------------------------------------------
# Interior majorization, partial-sum (Riemann) form
# --------------------------------------------------------------------------

def riemann_check(
    seq: DiagonalSequence, spectrum: SpectrumSpec, witness: Witness
) -> Tuple[bool, DeltaProfile]:
    """Decide δ_m = Σ_{i≤m}(d_i − λ_i) ≥ 0 for all m with lim δ_m = 0, exactly.

    witness.k is the step-sequence shift in the canonical alignment (explicit
    entries at indices 1..M).  The limit condition is the vanishing of the
    closed-form trace residual; the sign condition is checked on the window
    m ∈ {k, …, k+σ_n} only, which suffices:

      * left of the window λ_i = 0, so δ_m = Σ_{i≤m} d_i ≥ 0 holds for free;
      * right of the window λ_i = B, so δ_m = residual + Σ_{i>m}(B − d_i),
        which is ≥ 0 for every m exactly when the residual is ≥ 0 — and the
        residual must be 0 anyway for the limit condition.

    A randomized full-window cross-check of this reduction lives in the tests.
    """
    if seq.B != spectrum.B:
        raise DomainError(f"sequence B={seq.B} differs from spectrum B={spectrum.B}")
    layout = _ZLayout(seq)
    step = StepSequence(spectrum, witness)

    alpha = _split_alpha(spectrum)
    stats = _finite_stats(seq, alpha)
    sigma = witness.sigma_total
    m_split = layout.largest_index_below(alpha)
    residual = stats.C - stats.D - _weighted_sum(spectrum, witness.N) - seq.B * (
        m_split - sigma - witness.k
    )

    checked = []
    ok = residual == 0
    for m in range(witness.k, witness.k + sigma + 1):
        delta = layout.prefix(m) - step.prefix(m)
        checked.append((m, delta))
        if delta < 0:
            ok = False
    return ok, DeltaProfile(tuple(checked), residual)


def delta_range(
    seq: DiagonalSequence,
    spectrum: SpectrumSpec,
    witness: Witness,
    lo: int,
    hi: int,
) -> Tuple[Tuple[int, Fraction], ...]:
    """Exact δ_m over an arbitrary index range; diagnostic companion to riemann_check."""
    layout = _ZLayout(seq)
    step = StepSequence(spectrum, witness)
    return tuple((m, layout.prefix(m) - step.prefix(m)) for m in range(lo, hi + 1))


def canonical_shift(
    seq: DiagonalSequence, spectrum: SpectrumSpec, N: Sequence[int]
) -> Optional[int]:
    """The unique step-sequence shift making the trace residual vanish.

    Returns None when the trace equation has no integer solution for these
    multiplicities (then riemann_check fails at every shift: the residual is
    a nonzero multiple of B plus B times any shift change).
    """
    if seq.B != spectrum.B:
        raise DomainError(f"sequence B={seq.B} differs from spectrum B={spectrum.B}")
    alpha = _split_alpha(spectrum)
    stats = _finite_stats(seq, alpha)
    k0 = (stats.C - stats.D - _weighted_sum(spectrum, N)) / seq.B
    if k0.denominator != 1:
        return None
    m_split = _ZLayout(seq).largest_index_below(alpha)
    return m_split - sum(N) - int(k0)


# --------------------------------------------------------------------------
# Interior majorization, threshold-statistics (Lebesgue) form
# --------------------------------------------------------------------------

def lebesgue_check(seq: DiagonalSequence, spectrum: SpectrumSpec, witness: Witness) -> bool:
    """Decide interior majorization from threshold statistics alone.

    Needs an integer k_0 with C(A_n) − D(A_n) = Σ A_j N_j + k_0 B, and for
    each r the mass bound
      C(A_r) ≥ Σ_{j≤r} A_j N_j + A_r·(k_0 − |{i : A_r ≤ d_i < A_n}| + Σ_{j>r} N_j).
    witness.k is ignored: k_0 is determined by the trace equation.
    """
    if seq.B != spectrum.B:
        raise DomainError(f"sequence B={seq.B} differs from spectrum B={spectrum.B}")
    if len(witness.N) != spectrum.n:
        raise DomainError("witness length does not match the spectrum")
    alpha = _split_alpha(spectrum)
    stats = _finite_stats(seq, alpha)
    weighted = _weighted_sum(spectrum, witness.N)
    k0 = (stats.C - stats.D - weighted) / seq.B
    if k0.denominator != 1:
        return False
    n = spectrum.n
    a_top = spectrum.points[-2] if n >= 1 else None
    for r in range(1, n + 1):
        a_r = spectrum.points[r]
        c_r = _finite_stats(seq, a_r).C
        inner = count_range(seq, a_r, a_top)
        rhs = _weighted_sum(spectrum, witness.N[:r]) + a_r * (
            k0 - inner + sum(witness.N[r:])
        )
        if c_r < rhs:
            return False
    return True


def equivalent_form_check(
    seq: DiagonalSequence, spectrum: SpectrumSpec, witness: Witness
) -> bool:
    """The same predicate in its threshold-symmetric form; agrees with
    lebesgue_check on every input.

    Trace: C(B/2) − D(B/2) ≡ Σ A_j N_j (mod B) — equivalent at any threshold
    since C − D moves by exact multiples of B as the threshold crosses
    entries.  Mass bounds, for each r:
      (B−A_r)·C(A_r) + A_r·D(A_r) ≥ (B−A_r)·Σ_{j≤r} A_j N_j + A_r·Σ_{j>r} (B−A_j) N_j.
    """
    if seq.B != spectrum.B:
        raise DomainError(f"sequence B={seq.B} differs from spectrum B={spectrum.B}")
    if len(witness.N) != spectrum.n:
        raise DomainError("witness length does not match the spectrum")
    half = _finite_stats(seq, seq.B / 2)
    stats_at = {
        a: _finite_stats(seq, a) for a in spectrum.interior
    }
    return _equivalent_form(half, stats_at, spectrum, witness.N)


def _equivalent_form(half_stats, stats_at, spectrum: SpectrumSpec, N: Sequence[int]) -> bool:
    """Core of equivalent_form_check against precomputed statistics."""
    B = spectrum.B
    k = (half_stats.C - half_stats.D - _weighted_sum(spectrum, N)) / B
    if k.denominator != 1:
        return False
    points = spectrum.points
    for r in range(1, spectrum.n + 1):
        a_r = points[r]
        st = stats_at[a_r]
        lhs = (B - a_r) * st.C + a_r * st.D
        rhs = (B - a_r) * _weighted_sum(spectrum, N[:r]) + a_r * sum(
            ((B - points[j]) * N[j - 1] for j in range(r + 1, spectrum.n + 1)),
            Fraction(0),
        )
        if lhs < rhs:
            return False
    return True


# --------------------------------------------------------------------------
# Finite majorization
# --------------------------------------------------------------------------

def check_finite_majorization(d: Sequence, lam: Sequence) -> bool:
    """Classical majorization: equal totals and, after sorting both
    nonincreasing, every prefix sum of d bounded by the prefix sum of λ."""
    if len(d) != len(lam):
        raise DomainError(f"length mismatch: {len(d)} diagonal vs {len(lam)} eigenvalues")
    dd = sorted((Fraction(x) for x in d), reverse=True)
    ll = sorted((Fraction(x) for x in lam), reverse=True)
    run_d, run_l = Fraction(0), Fraction(0)
    for x, y in zip(dd, ll):
        run_d += x
        run_l += y
        if run_d > run_l:
            return False
    return run_d == run_l


def check_finite_rank_tail(
    seq: DiagonalSequence, lam: Sequence, nondecreasing: bool = False
) -> bool:
    """Majorization for a summable diagonal against finitely many positive
    eigenvalues.

    True iff the totals agree and, for every m < len(lam), the m largest
    diagonal entries sum to at most the m largest eigenvalues — the finite-
    rank analogue of the prefix condition, stated equivalently through tail
    sums.  ``nondecreasing`` declares λ given in nondecreasing order (the
    mirrored formulation); both orientations reduce to the same multiset
    test, so the flag only documents the caller's convention.
    """
    if seq.b_count != 0 or seq.b_tail is not None:
        raise DomainError("finite-rank test needs a sequence with no mass at B")
    if isinstance(seq.zero_tail, DivergentTail):
        raise DomainError("finite-rank test needs a summable diagonal")
    lam = list(lam)
    if nondecreasing:
        lam = lam[::-1]
    ll = sorted((Fraction(x) for x in lam), reverse=True)
    if any(x <= 0 for x in ll):
        raise DomainError("eigenvalues must be positive")
    n_eigs = len(ll)

    total_d = sum(seq.explicit, Fraction(0))
    if isinstance(seq.zero_tail, GeometricTail):
        total_d += seq.zero_tail.total()
    if total_d != sum(ll, Fraction(0)):
        return False

    # Only the n_eigs largest diagonal entries matter; a geometric tail's
    # largest elements are its first ones.
    head = list(seq.explicit)
    if isinstance(seq.zero_tail, GeometricTail):
        head.extend(seq.zero_tail.element(t) for t in range(n_eigs))
    head.sort(reverse=True)
    run_d, run_l = Fraction(0), Fraction(0)
    for m in range(n_eigs - 1):
        run_d += head[m] if m < len(head) else Fraction(0)
        run_l += ll[m]
        if run_d > run_l:
            return False
    return True
