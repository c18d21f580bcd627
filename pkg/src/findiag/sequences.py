"""Diagonal sequences with symbolic accumulation tails, and their threshold statistics.

A sequence here is a multiset of values in [0, B]: finitely many explicit
entries, optional counts of exact 0s and exact Bs (possibly infinite), and
optional tails accumulating at each endpoint.  Geometric tails keep every
statistic exactly rational via closed-form remainders; divergent tails carry
no element data, only the fact that the corresponding endpoint statistic is
infinite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Union

from .errors import DomainError, UnsupportedOperationError
from .scalars import INF, Infinite

Count = Union[int, Infinite]


@dataclass(frozen=True)
class GeometricTail:
    """Infinitely many entries at distances first·ratio^t (t = 0, 1, …) from an endpoint.

    On the zero side the entries are the distances themselves; on the B side
    they are B minus the distances.  Total distance mass is first/(1−ratio).
    """

    first: Fraction
    ratio: Fraction

    def __post_init__(self):
        if not (self.first > 0):
            raise DomainError(f"tail first element must be positive, got {self.first}")
        if not (0 < self.ratio < 1):
            raise DomainError(f"tail ratio must be in (0,1), got {self.ratio}")

    def total(self) -> Fraction:
        return self.first / (1 - self.ratio)

    def element(self, t: int) -> Fraction:
        return self.first * self.ratio**t

    def head_sum(self, count: int) -> Fraction:
        # first·(1−ratio^count)/(1−ratio)
        return self.first * (1 - self.ratio**count) / (1 - self.ratio)

    def tail_sum_from(self, t: int) -> Fraction:
        return self.element(t) / (1 - self.ratio)

    def count_at_least(self, cut: Fraction) -> int:
        """|{t ≥ 0 : first·ratio^t ≥ cut}| — finite for cut > 0."""
        if cut <= 0:
            raise DomainError("count_at_least needs a positive cut")
        n, x = 0, self.first
        while x >= cut:
            n += 1
            x *= self.ratio
        return n

    def count_greater(self, cut: Fraction) -> int:
        """|{t ≥ 0 : first·ratio^t > cut}| — finite for cut > 0."""
        if cut <= 0:
            raise DomainError("count_greater needs a positive cut")
        n, x = 0, self.first
        while x > cut:
            n += 1
            x *= self.ratio
        return n

    def drop(self, count: int) -> "GeometricTail":
        return GeometricTail(self.element(count), self.ratio)


@dataclass(frozen=True)
class DivergentTail:
    """Entries accumulating at an endpoint with infinite distance mass.

    Carries no element values: only the divergence fact is ever used.  By
    convention its entries lie beyond every interior threshold, so it
    contributes Infinite to its own endpoint's statistic and nothing to the
    opposite one; interior range counts against it are unsupported.
    """


Tail = Union[GeometricTail, DivergentTail]


@dataclass(frozen=True)
class SpectrumSpec:
    """Prescribed finite spectrum 0 = A_0 < A_1 < … < A_{n+1} = B."""

    points: tuple

    def __init__(self, points):
        pts = tuple(Fraction(p) for p in points)
        if len(pts) < 2:
            raise DomainError("spectrum needs at least the two endpoints 0 and B")
        if pts[0] != 0:
            raise DomainError(f"spectrum must start at 0, got {pts[0]}")
        if any(a >= b for a, b in zip(pts, pts[1:])):
            raise DomainError("spectrum points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @property
    def B(self) -> Fraction:
        return self.points[-1]

    @property
    def n(self) -> int:
        return len(self.points) - 2

    @property
    def interior(self) -> tuple:
        return self.points[1:-1]


class ThresholdStats(NamedTuple):
    """C(α) = Σ_{d_i<α} d_i and D(α) = Σ_{d_i≥α} (B−d_i), exactly."""

    alpha: Fraction
    C: Union[Fraction, Infinite]
    D: Union[Fraction, Infinite]


class DivergenceFlags(NamedTuple):
    sum_d_infinite: bool
    sum_Bd_infinite: bool
    C_half_infinite: bool
    D_half_infinite: bool


def _as_count(value, name: str) -> Count:
    if value is INF:
        return INF
    if isinstance(value, int) and not isinstance(value, bool) and value >= 0:
        return value
    raise DomainError(f"{name} must be a nonnegative integer or INF, got {value!r}")


@dataclass(frozen=True)
class DiagonalSequence:
    """A prescribed diagonal: explicit entries plus endpoint counts and tails.

    Construction normalizes: explicit values equal to 0 or B are folded into
    zero_count/b_count, the rest are sorted nondecreasing.  The value multiset
    is unchanged by normalization.
    """

    B: Fraction
    explicit: tuple = ()
    zero_count: Count = 0
    b_count: Count = 0
    zero_tail: Optional[Tail] = None
    b_tail: Optional[Tail] = None

    def __post_init__(self):
        B = Fraction(self.B)
        if B <= 0:
            raise DomainError(f"B must be positive, got {B}")
        zero_count = _as_count(self.zero_count, "zero_count")
        b_count = _as_count(self.b_count, "b_count")
        interior = []
        for raw in self.explicit:
            v = Fraction(raw)
            if not (0 <= v <= B):
                raise DomainError(f"explicit value {v} outside [0, {B}]")
            if v == 0:
                zero_count = zero_count + 1
            elif v == B:
                b_count = b_count + 1
            else:
                interior.append(v)
        for tail, side in ((self.zero_tail, "zero_tail"), (self.b_tail, "b_tail")):
            if tail is None or isinstance(tail, DivergentTail):
                continue
            if not isinstance(tail, GeometricTail):
                raise DomainError(f"{side} must be GeometricTail, DivergentTail, or None")
            if tail.first >= B:
                raise DomainError(f"{side} first element {tail.first} must be < B={B}")
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "explicit", tuple(sorted(interior)))
        object.__setattr__(self, "zero_count", zero_count)
        object.__setattr__(self, "b_count", b_count)


def normalize(seq: DiagonalSequence) -> DiagonalSequence:
    """Fold 0/B explicit values into counts and sort; a no-op on constructed values."""
    return DiagonalSequence(
        seq.B, seq.explicit, seq.zero_count, seq.b_count, seq.zero_tail, seq.b_tail
    )


def materialize_tails(seq: DiagonalSequence, low: Fraction, high: Fraction) -> DiagonalSequence:
    """Move every zero-tail element ≥ low and every b-tail element ≤ high into explicit.

    Finitely many elements qualify (ratio < 1).  The remaining tails stay
    geometric with first advanced past the moved elements, so the value
    multiset is preserved and no tail element straddles [low, high].
    """
    low, high = Fraction(low), Fraction(high)
    if not (0 < low <= high < seq.B):
        raise DomainError(f"materialization bounds must satisfy 0 < low ≤ high < B")
    if isinstance(seq.zero_tail, DivergentTail) or isinstance(seq.b_tail, DivergentTail):
        raise UnsupportedOperationError("divergent tails have no elements to materialize")
    explicit = list(seq.explicit)
    zero_tail, b_tail = seq.zero_tail, seq.b_tail
    if isinstance(zero_tail, GeometricTail):
        c = zero_tail.count_at_least(low)
        explicit.extend(zero_tail.element(t) for t in range(c))
        zero_tail = zero_tail.drop(c)
    if isinstance(b_tail, GeometricTail):
        c = b_tail.count_at_least(seq.B - high)
        explicit.extend(seq.B - b_tail.element(t) for t in range(c))
        b_tail = b_tail.drop(c)
    return DiagonalSequence(seq.B, tuple(explicit), seq.zero_count, seq.b_count, zero_tail, b_tail)


def threshold_stats(seq: DiagonalSequence, alpha: Fraction) -> ThresholdStats:
    """Exact C(α) and D(α); geometric tails contribute closed-form partial sums."""
    alpha = Fraction(alpha)
    B = seq.B
    if not (0 < alpha < B):
        raise DomainError(f"alpha must lie in (0, B), got {alpha}")

    if isinstance(seq.zero_tail, DivergentTail):
        C: Union[Fraction, Infinite] = INF
    else:
        C = sum((v for v in seq.explicit if v < alpha), Fraction(0))
        if isinstance(seq.zero_tail, GeometricTail):
            # elements first·ratio^t < alpha are exactly t ≥ count_at_least(alpha)
            C += seq.zero_tail.tail_sum_from(seq.zero_tail.count_at_least(alpha))
        if isinstance(seq.b_tail, GeometricTail):
            # elements B − first·ratio^t < alpha ⟺ first·ratio^t > B − alpha
            c = seq.b_tail.count_greater(B - alpha)
            C += c * B - seq.b_tail.head_sum(c)

    if isinstance(seq.b_tail, DivergentTail):
        D: Union[Fraction, Infinite] = INF
    else:
        D = sum((B - v for v in seq.explicit if v >= alpha), Fraction(0))
        if isinstance(seq.b_tail, GeometricTail):
            c = seq.b_tail.count_greater(B - alpha)
            D += seq.b_tail.tail_sum_from(c)
        if isinstance(seq.zero_tail, GeometricTail):
            c = seq.zero_tail.count_at_least(alpha)
            D += c * B - seq.zero_tail.head_sum(c)

    return ThresholdStats(alpha, C, D)


def count_range(seq: DiagonalSequence, a: Fraction, b: Fraction):
    """Exact |{i : a ≤ d_i < b}|, possibly Infinite.

    Half-open on the right, so entries equal to B are never counted and
    entries equal to 0 are counted exactly when a = 0.
    """
    a, b = Fraction(a), Fraction(b)
    B = seq.B
    if not (0 <= a <= b <= B):
        raise DomainError(f"range bounds must satisfy 0 ≤ a ≤ b ≤ B")
    if a == b:
        return 0

    count: Count = sum(1 for v in seq.explicit if a <= v < b)
    if a == 0:
        if seq.zero_count is INF:
            return INF
        count += seq.zero_count

    zt = seq.zero_tail
    if isinstance(zt, DivergentTail):
        if a == 0:
            return INF  # infinitely many entries below any positive b
        raise UnsupportedOperationError("cannot count a divergent zero tail above a positive bound")
    if isinstance(zt, GeometricTail):
        if a == 0:
            return INF
        count += zt.count_at_least(a) - zt.count_at_least(b)

    bt = seq.b_tail
    if isinstance(bt, DivergentTail):
        if b == B:
            return INF  # infinitely many entries above any a < B
        raise UnsupportedOperationError("cannot count a divergent b-tail below an interior bound")
    if isinstance(bt, GeometricTail):
        if b == B:
            return INF
        # B − first·ratio^t ∈ [a, b) ⟺ B−b < first·ratio^t ≤ B−a
        count += bt.count_greater(B - b) - bt.count_greater(B - a)

    return count


def divergence_flags(seq: DiagonalSequence) -> DivergenceFlags:
    """Which of Σd, Σ(B−d), C(B/2), D(B/2) are infinite."""
    zero_div = isinstance(seq.zero_tail, DivergentTail)
    b_div = isinstance(seq.b_tail, DivergentTail)
    sum_d = seq.b_count is INF or seq.b_tail is not None or zero_div
    sum_Bd = seq.zero_count is INF or seq.zero_tail is not None or b_div
    return DivergenceFlags(sum_d, sum_Bd, zero_div, b_div)


def reflect(obj):
    """Reflect values v ↦ B − v; an involution.

    For sequences this swaps the endpoint counts and tails; for spectra it
    reverses the interior points about B/2.
    """
    if isinstance(obj, DiagonalSequence):
        return DiagonalSequence(
            obj.B,
            tuple(obj.B - v for v in obj.explicit),
            zero_count=obj.b_count,
            b_count=obj.zero_count,
            zero_tail=obj.b_tail,
            b_tail=obj.zero_tail,
        )
    if isinstance(obj, SpectrumSpec):
        return SpectrumSpec([0] + [obj.B - p for p in reversed(obj.interior)] + [obj.B])
    raise DomainError(f"cannot reflect {type(obj).__name__}")


def _scale_tail(tail: Optional[Tail], c: Fraction) -> Optional[Tail]:
    if isinstance(tail, GeometricTail):
        return GeometricTail(tail.first * c, tail.ratio)
    return tail


def scale(obj, c: Fraction):
    """Multiply every value (and B) by c > 0."""
    c = Fraction(c)
    if c <= 0:
        raise DomainError(f"scale factor must be positive, got {c}")
    if isinstance(obj, DiagonalSequence):
        return DiagonalSequence(
            obj.B * c,
            tuple(v * c for v in obj.explicit),
            zero_count=obj.zero_count,
            b_count=obj.b_count,
            zero_tail=_scale_tail(obj.zero_tail, c),
            b_tail=_scale_tail(obj.b_tail, c),
        )
    if isinstance(obj, SpectrumSpec):
        return SpectrumSpec([p * c for p in obj.points])
    raise DomainError(f"cannot scale {type(obj).__name__}")
