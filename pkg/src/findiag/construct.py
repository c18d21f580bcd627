"""Constructive realizations: symmetric matrices with prescribed spectrum and
diagonal.

The finite engine is the classical Givens-rotation construction (Chan-Li):
repeatedly rotate a 2x2 block so one coordinate lands exactly on its target
diagonal value.  All diagonal bookkeeping is exact rational; floats enter
only through rotation cosines, and every finished diagonal entry is assigned
from its exact value, so diagonals of constructed matrices match their
targets bit for bit.

Truncated realizations of doubly infinite diagonals materialize tail
prefixes, pack the remaining tail mass into interior-safe entries, balance
with exact 0/B entries, and split the finite problem along a minimizing
partial-sum index; a water-fill mass move makes the split exact and is then
undone by explicit 2x2 rotations mixing the finished blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, TruncationTooSmallError
from .majorize import Witness, _weighted_sum, check_finite_majorization
from .scalars import INF
from .sequences import (
    DiagonalSequence,
    DivergentTail,
    GeometricTail,
    SpectrumSpec,
    normalize,
)


@dataclass(frozen=True)
class GivensRotation:
    """Record of one applied rotation: coordinates (p, q) and cosine/sine."""

    p: int
    q: int
    c: float
    s: float


class SymmetricMatrix:
    """A real symmetric matrix with provenance and an exact diagonal record.

    entries is float64 and bitwise symmetric; exact_diagonal, when present,
    holds the rational values the float diagonal was assigned from.
    """

    def __init__(
        self,
        entries,
        provenance: Tuple[GivensRotation, ...] = (),
        exact_diagonal: Optional[Tuple[Fraction, ...]] = None,
    ):
        arr = np.array(entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DomainError(f"matrix must be square, got shape {arr.shape}")
        if not np.array_equal(arr, arr.T):
            raise DomainError("matrix entries are not symmetric")
        if exact_diagonal is not None and len(exact_diagonal) != arr.shape[0]:
            raise DomainError("exact diagonal length differs from matrix dimension")
        self._entries = arr
        self.provenance = tuple(provenance)
        self.exact_diagonal = (
            tuple(Fraction(x) for x in exact_diagonal) if exact_diagonal is not None else None
        )

    @property
    def dimension(self) -> int:
        return self._entries.shape[0]

    def entry(self, i: int, j: int) -> float:
        return float(self._entries[i, j])

    def as_array(self) -> np.ndarray:
        return self._entries.copy()

    def rows(self) -> List[List[float]]:
        return [[float(v) for v in row] for row in self._entries]

    def text_grid(self) -> str:
        """Aligned fixed-point grid for human inspection."""
        cells = [[f"{v: .8f}" for v in row] for row in self._entries]
        width = max((len(c) for row in cells for c in row), default=1)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


@dataclass(frozen=True)
class RealizationReport:
    diagonal_exact_match: bool
    eigenvalues: Tuple[float, ...]
    spectrum_distance: float
    multiplicities: Tuple[int, ...]
    within_tolerance: bool
    witness_multiplicities_ok: Optional[bool] = None


def _apply_rotation(arr: np.ndarray, p: int, q: int, c: float, s: float) -> None:
    """Conjugate by the rotation acting as [[c, -s], [s, c]] on coordinates (p, q).

    Rows then columns; the (q, p) entry is mirrored from (p, q) afterwards so
    symmetry stays bitwise (all other mirrored pairs already agree bitwise
    because rows and columns see identical arithmetic on a symmetric input).
    """
    rp = c * arr[p] - s * arr[q]
    rq = s * arr[p] + c * arr[q]
    arr[p] = rp
    arr[q] = rq
    cp = c * arr[:, p] - s * arr[:, q]
    cq = s * arr[:, p] + c * arr[:, q]
    arr[:, p] = cp
    arr[:, q] = cq
    arr[q, p] = arr[p, q]


def _insort_desc(active: List[Tuple[Fraction, int]], item: Tuple[Fraction, int]) -> None:
    key = (-item[0], item[1])
    idx = 0
    while idx < len(active) and (-active[idx][0], active[idx][1]) < key:
        idx += 1
    active.insert(idx, item)


def horn_construct(lam: Sequence, d: Sequence) -> SymmetricMatrix:
    """A symmetric matrix with eigenvalues lam and diagonal exactly d.

    Requires lam to majorize d (checked).  At most len(d) - 1 rotations; each
    step fixes the largest outstanding target either by removing an exactly
    matching working value or by rotating the tightest bracketing pair, whose
    fresh off-diagonal coupling has the exact square c^2 s^2 (alpha - beta)^2
    and is written as a single square root.  Couplings between still-active
    coordinates stay exactly zero throughout.  The result is permuted so the
    diagonal follows d in the caller's order.
    """
    lam = [Fraction(x) for x in lam]
    d = [Fraction(x) for x in d]
    if not check_finite_majorization(d, lam):
        raise DomainError("eigenvalues do not majorize the requested diagonal")
    size = len(d)
    work = sorted(lam, reverse=True)
    entries = np.zeros((size, size))
    for coord, v in enumerate(work):
        entries[coord, coord] = float(v)
    active: List[Tuple[Fraction, int]] = [(v, coord) for coord, v in enumerate(work)]
    order = sorted(range(size), key=lambda i: d[i], reverse=True)
    rotations: List[GivensRotation] = []
    coord_of_position = [0] * size

    for pos in order:
        target = d[pos]
        hit = next((idx for idx, (v, _) in enumerate(active) if v == target), None)
        if hit is not None:
            _, coord = active.pop(hit)
            coord_of_position[pos] = coord
            continue
        below = next((idx for idx, (v, _) in enumerate(active) if v < target), None)
        # the remaining working values majorize the remaining targets, so a
        # bracketing pair exists whenever there is no exact hit
        assert below is not None and below >= 1, "majorization invariant violated"
        alpha, pa = active[below - 1]
        beta, pb = active[below]
        c2 = (target - beta) / (alpha - beta)
        c = math.sqrt(float(c2))
        s = math.sqrt(float(1 - c2))
        _apply_rotation(entries, pa, pb, c, s)
        merged = alpha + beta - target
        entries[pa, pa] = float(target)
        entries[pb, pb] = float(merged)
        off = math.sqrt(float(c2 * (1 - c2) * (alpha - beta) * (alpha - beta)))
        entries[pa, pb] = off
        entries[pb, pa] = off
        rotations.append(GivensRotation(pa, pb, c, s))
        active.pop(below)
        active.pop(below - 1)
        _insort_desc(active, (merged, pb))
        coord_of_position[pos] = pa
    assert not active, "working multiset should be exhausted"

    perm = np.array(coord_of_position, dtype=int)
    out = entries[np.ix_(perm, perm)]
    out_index = {int(coord): i for i, coord in enumerate(perm)}
    remapped = tuple(
        GivensRotation(out_index[r.p], out_index[r.q], r.c, r.s) for r in rotations
    )
    return SymmetricMatrix(out, remapped, tuple(d))


# --------------------------------------------------------------------------
# Water-fill mass moves
# --------------------------------------------------------------------------

def _water_fill(
    values: Sequence[Fraction],
    B: Fraction,
    donors: Sequence[int],
    recipients: Sequence[int],
    eta: Fraction,
) -> Tuple[List[Fraction], List[Tuple[int, int, Fraction]]]:
    """Move total mass eta out of donor positions (taken in the given order,
    each emptied to 0 before the next) into recipient positions (each filled
    to B before the next).  Returns the new values and the transfer list
    [(donor, recipient, amount)] in event order."""
    new = list(values)
    transfers: List[Tuple[int, int, Fraction]] = []
    if eta < 0:
        raise DomainError("mass to move must be nonnegative")
    if eta == 0:
        return new, transfers
    if eta > sum((new[i] for i in donors), Fraction(0)):
        raise DomainError("donor entries cannot supply the requested mass")
    if eta > sum((B - new[j] for j in recipients), Fraction(0)):
        raise DomainError("recipient entries cannot absorb the requested mass")
    remaining = eta
    di, ri = 0, 0
    while remaining > 0:
        while new[donors[di]] == 0:
            di += 1
        while new[recipients[ri]] == B:
            ri += 1
        i, j = donors[di], recipients[ri]
        amt = min(new[i], B - new[j], remaining)
        new[i] -= amt
        new[j] += amt
        transfers.append((i, j, amt))
        remaining -= amt
    return new, transfers


def move_mass(seq: DiagonalSequence, I0, I1, eta0) -> DiagonalSequence:
    """Shift total mass eta0 from the explicit entries indexed by I0 onto the
    explicit entries indexed by I1 (indices into the normalized explicit
    tuple).  Donors empty smallest-value first; recipients fill largest-value
    first.  Requires disjoint index sets, every donor value ≤ every recipient
    value, and eta0 within both the donor mass and the recipient headroom."""
    eta = Fraction(eta0)
    values = list(seq.explicit)
    I0 = sorted(set(int(i) for i in I0))
    I1 = sorted(set(int(i) for i in I1))
    for idx in I0 + I1:
        if not 0 <= idx < len(values):
            raise DomainError(f"index {idx} outside the explicit entries")
    if set(I0) & set(I1):
        raise DomainError("donor and recipient index sets must be disjoint")
    if eta > 0 and I0 and I1:
        if max(values[i] for i in I0) > min(values[j] for j in I1):
            raise DomainError("donor entries must not exceed recipient entries")
    donors = sorted(I0, key=lambda i: (values[i], i))
    recipients = sorted(I1, key=lambda j: (-values[j], j))
    new, _ = _water_fill(values, seq.B, donors, recipients, eta)
    return DiagonalSequence(
        B=seq.B,
        explicit=tuple(new),
        zero_count=seq.zero_count,
        b_count=seq.b_count,
        zero_tail=seq.zero_tail,
        b_tail=seq.b_tail,
    )


# --------------------------------------------------------------------------
# Steering rotations (exact diagonal targets in the presence of couplings)
# --------------------------------------------------------------------------

def _steer(
    arr: np.ndarray,
    p: int,
    q: int,
    x: Fraction,
    y: Fraction,
    target: Fraction,
) -> GivensRotation:
    """Rotate coordinates (p, q) so the (p, p) entry becomes target and the
    (q, q) entry becomes x + y − target, with x, y the current exact diagonal
    values.  Unlike the fresh-pair case, the (p, q) coupling beta may be
    nonzero; the rotation parameter solves t²(y−τ) − 2βt + (x−τ) = 0, whose
    discriminant β² − (y−τ)(x−τ) is nonnegative whenever x ≤ τ ≤ y (clipped
    at 0 against float dust).  Both new diagonal entries are assigned exactly.
    """
    beta = Fraction(float(arr[p, q]))
    a = y - target
    b = x - target
    if a == 0:
        if beta == 0:
            if b == 0:
                c, s = 1.0, 0.0
            else:
                c, s = 0.0, 1.0  # plain swap of the two coordinates
        else:
            t = float(b / (2 * beta))
            c = 1.0 / math.sqrt(1.0 + t * t)
            s = t * c
    else:
        disc = beta * beta - a * b
        if disc < 0:
            disc = Fraction(0)
        root = math.sqrt(float(disc))
        af, bf = float(a), float(beta)
        t1 = (bf + root) / af
        t2 = (bf - root) / af
        t = t1 if abs(t1) <= abs(t2) else t2
        c = 1.0 / math.sqrt(1.0 + t * t)
        s = t * c
    _apply_rotation(arr, p, q, c, s)
    arr[p, p] = float(target)
    arr[q, q] = float(x + y - target)
    return GivensRotation(p, q, c, s)


# --------------------------------------------------------------------------
# Truncated realization of doubly infinite diagonals
# --------------------------------------------------------------------------

@dataclass
class _FiniteProblem:
    B: Fraction
    G: List[Fraction]          # target diagonal, ascending, exact
    Lam: List[Fraction]        # eigenvalue list, ascending, exact
    M0: int                    # zero-block length in Lam
    sigma: int                 # total interior multiplicity
    deltas: List[Fraction]     # deltas[m] = sum_{i<=m} (G_i - Lam_i), m = 0..L


def _build_problem(
    seq: DiagonalSequence,
    spectrum: SpectrumSpec,
    witness: Witness,
    T: int,
    lowcut: Fraction,
    highcut: Fraction,
):
    """Assemble the exact finite majorization problem at truncation level T.

    Returns a _FiniteProblem, or "retry" when a larger T is needed (tail
    element at or above the packing cutoff, or a negative partial-sum gap),
    or "imbalance" when the trace equation has no integer solution at any T.
    """
    B = seq.B
    sigma = witness.sigma_total
    mid: List[Fraction] = list(seq.explicit)
    packed: List[Fraction] = []

    if isinstance(seq.zero_tail, GeometricTail):
        tail = seq.zero_tail
        if tail.element(T) >= lowcut:
            return "retry"
        mid.extend(tail.element(t) for t in range(T))
        rem = tail.tail_sum_from(T)
        cap = lowcut / 2
        count = -(-rem // cap)  # ceil; each packed entry lands in (0, lowcut/2]
        packed.extend([rem / count] * int(count))
    if isinstance(seq.b_tail, GeometricTail):
        tail = seq.b_tail
        if tail.element(T) >= B - highcut:
            return "retry"
        mid.extend(B - tail.element(t) for t in range(T))
        rem = tail.tail_sum_from(T)
        cap = (B - highcut) / 2
        count = -(-rem // cap)
        packed.extend([B - rem / count] * int(count))

    Y = sorted(mid + packed)
    total = sum(Y, Fraction(0))
    kappa = (total - _weighted_sum(spectrum, witness.N)) / B
    if kappa.denominator != 1:
        return "imbalance"
    kappa = int(kappa)

    zmin = seq.zero_count if seq.zero_count is not INF else 0
    wmin = seq.b_count if seq.b_count is not INF else 0
    z = max(zmin, 1 - (len(Y) - sigma - kappa), 0)
    w = max(wmin, 1 - kappa, 0)
    M0 = z + len(Y) - sigma - kappa
    M_top = w + kappa
    assert M0 >= 1 and M_top >= 1

    G = [Fraction(0)] * z + Y + [B] * w
    Lam = (
        [Fraction(0)] * M0
        + [spectrum.points[r] for r in range(1, spectrum.n + 1) for _ in range(witness.N[r - 1])]
        + [B] * M_top
    )
    L = len(G)
    assert len(Lam) == L

    deltas = [Fraction(0)]
    run = Fraction(0)
    for g, l in zip(G, Lam):
        run += g - l
        deltas.append(run)
    assert deltas[L] == 0, "totals must balance by construction"
    if any(dm < 0 for dm in deltas):
        return "retry"
    return _FiniteProblem(B, G, Lam, M0, sigma, deltas)


def _assemble_case2(prob: _FiniteProblem) -> SymmetricMatrix:
    """Window minimum at the right end: fill the top block to exact Bs, build
    the lower block by the finite construction, adjoin B·I, undo the fill."""
    L = len(prob.G)
    split = prob.M0 + prob.sigma
    eta = prob.deltas[split]
    donors = list(range(prob.M0))
    recipients = list(range(L - 1, split - 1, -1))
    newG, transfers = _water_fill(prob.G, prob.B, donors, recipients, eta)
    assert all(v == prob.B for v in newG[split:]), "top block must fill exactly"

    blockA = horn_construct(prob.Lam[:split], newG[:split])
    entries = np.zeros((L, L))
    entries[:split, :split] = blockA.as_array()
    for i in range(split, L):
        entries[i, i] = float(prob.B)
    rotations = list(blockA.provenance)
    exact = list(newG)
    for i, j, amt in reversed(transfers):
        x, y = exact[i], exact[j]
        rotations.append(_steer(entries, i, j, x, y, x + amt))
        exact[i] = x + amt
        exact[j] = y - amt
    assert exact == prob.G
    return SymmetricMatrix(entries, tuple(rotations), tuple(prob.G))


def _assemble_case1(prob: _FiniteProblem, m0: int) -> SymmetricMatrix:
    """Strict interior window minimum at m0: drain delta_{m0} from the bottom
    into the top, split into two finite constructions at m0, undo the move."""
    L = len(prob.G)
    eta = prob.deltas[m0]
    donors = list(range(prob.M0))
    recipients = list(range(L - 1, prob.M0 + prob.sigma - 1, -1))
    newG, transfers = _water_fill(prob.G, prob.B, donors, recipients, eta)

    blockA = horn_construct(prob.Lam[:m0], newG[:m0])
    blockB = horn_construct(prob.Lam[m0:], newG[m0:])
    entries = np.zeros((L, L))
    entries[:m0, :m0] = blockA.as_array()
    entries[m0:, m0:] = blockB.as_array()
    rotations = list(blockA.provenance) + [
        GivensRotation(r.p + m0, r.q + m0, r.c, r.s) for r in blockB.provenance
    ]
    exact = list(newG)
    for i, j, amt in reversed(transfers):
        x, y = exact[i], exact[j]
        rotations.append(_steer(entries, i, j, x, y, x + amt))
        exact[i] = x + amt
        exact[j] = y - amt
    assert exact == prob.G
    return SymmetricMatrix(entries, tuple(rotations), tuple(prob.G))


def _assemble(prob: _FiniteProblem) -> SymmetricMatrix:
    window = prob.deltas[prob.M0 : prob.M0 + prob.sigma + 1]
    m0_off = min(range(len(window)), key=lambda i: (window[i], i))
    m0 = prob.M0 + m0_off
    if prob.deltas[m0] == prob.deltas[prob.M0 + prob.sigma]:
        return _assemble_case2(prob)
    if m0 == prob.M0:
        # minimum at the left end only: reflect d_i -> B - d_{-i}, which sends
        # delta_m to delta_{L-m} and the left end to the right end, solve by
        # the case above, and pull back through M -> B·I − M.
        L = len(prob.G)
        refl = _FiniteProblem(
            B=prob.B,
            G=[prob.B - g for g in reversed(prob.G)],
            Lam=[prob.B - l for l in reversed(prob.Lam)],
            M0=L - prob.M0 - prob.sigma,
            sigma=prob.sigma,
            deltas=[prob.deltas[L - m] for m in range(L + 1)],
        )
        rwindow = refl.deltas[refl.M0 : refl.M0 + refl.sigma + 1]
        assert refl.deltas[refl.M0 + refl.sigma] == min(rwindow)
        mirrored = _assemble_case2(refl)
        rev = np.arange(L - 1, -1, -1)
        entries = (float(prob.B) * np.eye(L) - mirrored.as_array())[np.ix_(rev, rev)]
        for i, g in enumerate(prob.G):
            entries[i, i] = float(g)
        rotations = tuple(
            GivensRotation(L - 1 - r.p, L - 1 - r.q, r.c, r.s) for r in mirrored.provenance
        )
        return SymmetricMatrix(entries, rotations, tuple(prob.G))
    return _assemble_case1(prob, m0)


def realize_truncated(
    seq: DiagonalSequence, spectrum: SpectrumSpec, witness: Witness, T: int
) -> SymmetricMatrix:
    """A finite symmetric matrix whose eigenvalues all lie in the spectrum set
    (interior points with exactly the witness multiplicities) and whose
    diagonal consists of the explicit entries, the first T elements of each
    geometric tail, the remaining tail mass packed into interior-safe
    entries, and balancing exact 0/B entries.

    Raises TruncationTooSmallError when level T does not suffice; its
    ``minimal`` attribute carries the smallest workable level within T+256,
    or None when no level can work (trace imbalance, which is T-independent).
    """
    seq = normalize(seq)
    if seq.B != spectrum.B:
        raise DomainError(
            f"sequence endpoint B={seq.B} differs from spectrum endpoint {spectrum.B}"
        )
    if len(witness.N) != spectrum.n:
        raise DomainError("witness length does not match the spectrum")
    if not isinstance(T, int) or isinstance(T, bool) or T < 0:
        raise DomainError(f"truncation level must be an integer ≥ 0, got {T!r}")
    if isinstance(seq.zero_tail, DivergentTail) or isinstance(seq.b_tail, DivergentTail):
        raise DomainError("divergent tails admit no finite truncation")

    lowcut = spectrum.points[1] if spectrum.n >= 1 else spectrum.B / 2
    highcut = spectrum.points[-2] if spectrum.n >= 1 else spectrum.B / 2

    prob = _build_problem(seq, spectrum, witness, T, lowcut, highcut)
    if prob == "imbalance":
        raise TruncationTooSmallError(
            "the trace equation has no integer solution for this sequence and "
            "witness; no truncation level can balance it",
            minimal=None,
        )
    if prob == "retry":
        minimal = None
        for T2 in range(T + 1, T + 257):
            p2 = _build_problem(seq, spectrum, witness, T2, lowcut, highcut)
            if p2 == "imbalance":  # T-independent: no level can work
                break
            if not isinstance(p2, str):
                minimal = T2
                break
        raise TruncationTooSmallError(
            f"truncation level T={T} is too small for an exact realization"
            + (f"; the smallest sufficient level is T={minimal}" if minimal is not None else ""),
            minimal=minimal,
        )
    return _assemble(prob)


def verify_realization(
    matrix: SymmetricMatrix,
    spectrum: SpectrumSpec,
    expected_diagonal: Sequence,
    witness: Optional[Witness] = None,
    tol: float = 1e-8,
) -> RealizationReport:
    """Check a realization numerically: diagonal match (exact when the matrix
    carries an exact diagonal record, bitwise on floats otherwise), eigenvalue
    distance to the spectrum set, and per-point multiplicities by nearest
    spectrum point.  With a witness, interior multiplicities must equal its N
    and both endpoint multiplicities must be positive."""
    arr = matrix.as_array()
    expected = [Fraction(x) for x in expected_diagonal]
    if len(expected) != matrix.dimension:
        raise DomainError("expected diagonal length differs from matrix dimension")
    if matrix.exact_diagonal is not None:
        diag_ok = tuple(expected) == matrix.exact_diagonal
    else:
        diag_ok = all(float(e) == arr[i, i] for i, e in enumerate(expected))

    eigs = np.linalg.eigvalsh(arr) if matrix.dimension else np.zeros(0)
    pts = [float(p) for p in spectrum.points]
    mult = [0] * len(pts)
    dist = 0.0
    for e in eigs:
        gaps = [abs(float(e) - p) for p in pts]
        j = min(range(len(pts)), key=lambda idx: (gaps[idx], idx))
        mult[j] += 1
        dist = max(dist, gaps[j])

    witness_ok = None
    if witness is not None:
        witness_ok = (
            tuple(mult[1:-1]) == witness.N and mult[0] >= 1 and mult[-1] >= 1
        )
    return RealizationReport(
        diagonal_exact_match=diag_ok,
        eigenvalues=tuple(float(e) for e in eigs),
        spectrum_distance=float(dist),
        multiplicities=tuple(mult),
        within_tolerance=float(dist) <= tol,
        witness_multiplicities_ok=witness_ok,
    )
