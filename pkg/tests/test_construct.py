"""Matrix constructions: Schur-Horn assembly, mass moves, truncations."""

from fractions import Fraction
from random import Random

import numpy as np
import pytest

from findiag import (
    INF,
    DiagonalSequence,
    DomainError,
    GeometricTail,
    SpectrumSpec,
    SymmetricMatrix,
    TruncationTooSmallError,
    Witness,
    horn_construct,
    move_mass,
    realize_truncated,
    verify_realization,
)

from conftest import robin_hood_pair

F = Fraction


def test_symmetric_matrix_validation():
    with pytest.raises(DomainError):
        SymmetricMatrix(np.zeros((2, 3)))
    with pytest.raises(DomainError):
        SymmetricMatrix(np.array([[0.0, 1.0], [0.5, 0.0]]))
    with pytest.raises(DomainError):
        SymmetricMatrix(np.eye(2), exact_diagonal=(F(1),))


def test_symmetric_matrix_text_grid():
    m = SymmetricMatrix(np.array([[1.0, 0.5], [0.5, 0.25]]))
    grid = m.text_grid()
    assert "1.00000000" in grid and "0.25000000" in grid
    assert len(grid.splitlines()) == 2


def test_horn_two_by_two_exact():
    m = horn_construct([F(0), F(2)], [F(1), F(1)])
    assert m.as_array().tolist() == [[1.0, 1.0], [1.0, 1.0]]
    assert m.exact_diagonal == (F(1), F(1))


def test_horn_three_equal_targets():
    m = horn_construct([F(0), F(1), F(1)], [F(2, 3)] * 3)
    assert m.exact_diagonal == (F(2, 3),) * 3
    assert np.allclose(np.diag(m.as_array()), 2 / 3, atol=0)
    eigs = np.linalg.eigvalsh(m.as_array())
    assert np.allclose(sorted(eigs), [0.0, 1.0, 1.0], atol=1e-10)


def test_horn_identity_when_targets_equal_spectrum():
    lam = [F(1, 4), F(1, 2), F(3, 4)]
    m = horn_construct(lam, lam)
    assert m.provenance == ()
    assert np.array_equal(m.as_array(), np.diag([0.25, 0.5, 0.75]))


def test_horn_requires_majorization():
    with pytest.raises(DomainError):
        horn_construct([F(1), F(1)], [F(0), F(2)])
    with pytest.raises(DomainError):
        horn_construct([F(0), F(2)], [F(1)])  # length mismatch


def test_horn_randomized_against_eigensolver():
    rng = Random(1234)
    for _ in range(120):
        n = rng.randint(2, 8)
        lam, d = robin_hood_pair(rng, n)
        m = horn_construct(lam, d)
        assert m.exact_diagonal == tuple(d)
        assert sum(m.exact_diagonal) == sum(lam)  # trace is exact
        arr = m.as_array()
        assert np.array_equal(arr, arr.T)
        np.testing.assert_allclose(np.diag(arr), [float(x) for x in d], atol=1e-12)
        eigs = np.sort(np.linalg.eigvalsh(arr))
        np.testing.assert_allclose(
            eigs, np.sort([float(x) for x in lam]), atol=1e-8
        )


def test_horn_order_of_targets_is_respected():
    # caller's diagonal order is preserved, not sorted
    d = [F(3, 4), F(1, 4), F(1, 2)]
    m = horn_construct([F(0), F(1, 2), F(1)], d)
    assert m.exact_diagonal == tuple(d)


def test_move_mass_noop_at_zero(dyadic):
    seq = DiagonalSequence(B=F(1), explicit=(F(1, 4), F(3, 4)))
    assert move_mass(seq, [0], [1], F(0)) == seq


def test_move_mass_single_pair():
    seq = DiagonalSequence(B=F(1), explicit=(F(3, 10), F(4, 5)))
    out = move_mass(seq, [0], [1], F(1, 5))
    # 3/10 − 1/5 = 1/10 stays explicit; 4/5 + 1/5 = 1 folds into the B count
    assert out.explicit == (F(1, 10),)
    assert out.b_count == 1


def test_move_mass_greedy_donor_order():
    seq = DiagonalSequence(B=F(1), explicit=(F(1, 10), F(3, 10), F(4, 5)))
    out = move_mass(seq, [0, 1], [2], F(1, 5))
    # smallest donor empties first: (1/10, 3/10) → (0, 1/5)
    assert out.explicit == (F(1, 5),)
    assert out.zero_count == 1
    assert out.b_count == 1


def test_move_mass_conserves_total():
    rng = Random(9)
    for _ in range(60):
        vals = sorted(F(rng.randint(1, 31), 32) for _ in range(6))
        seq = DiagonalSequence(B=F(1), explicit=tuple(vals))
        k = rng.randint(1, 3)
        I0, I1 = list(range(k)), list(range(k, 6))
        cap = min(sum(vals[:k]), sum(1 - v for v in vals[k:]))
        eta = cap * F(rng.randint(0, 4), 4)
        out = move_mass(seq, I0, I1, eta)
        before = sum(vals)
        after = sum(out.explicit) + out.b_count * F(1)
        assert after == before


def test_move_mass_precondition_errors():
    seq = DiagonalSequence(B=F(1), explicit=(F(1, 4), F(3, 4)))
    with pytest.raises(DomainError):
        move_mass(seq, [0], [0], F(1, 8))  # not disjoint
    with pytest.raises(DomainError):
        move_mass(seq, [1], [0], F(1, 8))  # donors sit above recipients
    with pytest.raises(DomainError):
        move_mass(seq, [0], [1], F(1))  # exceeds donor capacity


def test_realize_dyadic_small_truncations(dyadic):
    spec = SpectrumSpec((F(0), F(1, 2), F(1)))
    w = Witness((1,), -1)
    for T in (0, 1, 2, 4):
        m = realize_truncated(dyadic, spec, w, T)
        rep = verify_realization(m, spec, m.exact_diagonal, w)
        assert rep.diagonal_exact_match
        assert rep.within_tolerance
        assert rep.witness_multiplicities_ok
        assert rep.spectrum_distance <= 1e-8


def test_realize_diagonal_multiset_contains_tail_heads(dyadic):
    spec = SpectrumSpec((F(0), F(1, 2), F(1)))
    m = realize_truncated(dyadic, spec, Witness((1,), -1), 3)
    diag = sorted(m.exact_diagonal)
    for v in (F(1, 4), F(1, 8), F(1, 16), F(1, 2), F(3, 4), F(7, 8), F(15, 16)):
        assert v in diag


def test_realize_interior_minimum_case():
    spec = SpectrumSpec((F(0), F(1, 2), F(1)))
    seq = DiagonalSequence(
        B=F(1), explicit=(F(1, 4), F(3, 8), F(5, 8), F(3, 4)), zero_count=INF, b_count=INF
    )
    w = Witness((2,), -1)
    m = realize_truncated(seq, spec, w, 0)
    rep = verify_realization(m, spec, m.exact_diagonal, w)
    assert m.dimension == 4
    assert rep.diagonal_exact_match and rep.within_tolerance
    assert rep.multiplicities == (1, 2, 1)


def test_realize_left_end_minimum_case():
    spec = SpectrumSpec((F(0), F(1, 2), F(1)))
    seq = DiagonalSequence(
        B=F(1), explicit=(F(1, 8), F(9, 16), F(5, 8), F(11, 16)), zero_count=INF, b_count=INF
    )
    w = Witness((2,), -2)
    m = realize_truncated(seq, spec, w, 0)
    rep = verify_realization(m, spec, m.exact_diagonal, w)
    assert m.dimension == 4
    assert rep.diagonal_exact_match and rep.within_tolerance
    assert rep.multiplicities == (1, 2, 1)


def test_realize_pure_diagonal_path():
    spec = SpectrumSpec((F(0), F(1, 2), F(1)))
    seq = DiagonalSequence(B=F(1), explicit=(F(1, 2), F(1, 2)))
    m = realize_truncated(seq, spec, Witness((2,), -2), 0)
    assert m.exact_diagonal == (F(0), F(1, 2), F(1, 2), F(1))
    arr = m.as_array()
    assert not np.any(arr - np.diag(np.diag(arr)))


def test_realize_truncation_too_small_with_minimal():
    spec = SpectrumSpec((F(0), F(1, 2), F(1)))
    seq = DiagonalSequence(
        B=F(1),
        zero_tail=GeometricTail(F(1, 2), F(1, 2)),  # leading element sits at A_1
        b_tail=GeometricTail(F(1, 4), F(1, 2)),
    )
    with pytest.raises(TruncationTooSmallError) as exc:
        realize_truncated(seq, spec, Witness((1,), -1), 0)
    assert exc.value.minimal == 1
    # and the reported minimal truncation indeed works
    m = realize_truncated(seq, spec, Witness((1,), -1), 1)
    rep = verify_realization(m, spec, m.exact_diagonal, Witness((1,), -1))
    assert rep.within_tolerance and rep.diagonal_exact_match


def test_realize_trace_imbalance_has_no_minimal(dyadic):
    spec = SpectrumSpec((F(0), F(1, 2), F(1)))
    with pytest.raises(TruncationTooSmallError) as exc:
        realize_truncated(dyadic, spec, Witness((2,), -1), 4)
    assert exc.value.minimal is None


def test_verify_trivial_diagonal():
    spec = SpectrumSpec((F(0), F(1, 2), F(1)))
    m = SymmetricMatrix(np.diag([0.0, 0.5, 1.0]), exact_diagonal=(F(0), F(1, 2), F(1)))
    rep = verify_realization(m, spec, [F(0), F(1, 2), F(1)], Witness((1,), 0))
    assert rep.diagonal_exact_match
    assert rep.spectrum_distance == 0
    assert rep.multiplicities == (1, 1, 1)
    assert rep.witness_multiplicities_ok


def test_verify_ones_matrix():
    spec = SpectrumSpec((F(0), F(2)))
    m = SymmetricMatrix(np.ones((2, 2)), exact_diagonal=(F(1), F(1)))
    rep = verify_realization(m, spec, [F(1), F(1)])
    assert rep.spectrum_distance <= 1e-12
    assert rep.multiplicities == (1, 1)
    assert rep.witness_multiplicities_ok is None


def test_verify_flags_off_spectrum():
    spec = SpectrumSpec((F(0), F(1, 2), F(1)))
    bad = np.diag([0.0, 0.47, 1.0])
    rep = verify_realization(SymmetricMatrix(bad), spec, [F(0), F(47, 100), F(1)])
    assert not rep.within_tolerance
    assert rep.spectrum_distance >= 0.02


def test_verify_flags_wrong_diagonal():
    spec = SpectrumSpec((F(0), F(1)))
    m = SymmetricMatrix(np.diag([0.0, 1.0]), exact_diagonal=(F(0), F(1)))
    rep = verify_realization(m, spec, [F(0), F(1, 2)])
    assert not rep.diagonal_exact_match


def test_realize_wrong_witness_still_raises_cleanly(dyadic):
    # a witness whose trace congruence holds but whose mass bound fails:
    # N=(5) balances the trace yet is infeasible; realization cannot succeed
    spec = SpectrumSpec((F(0), F(1, 2), F(1)))
    with pytest.raises((TruncationTooSmallError, DomainError)):
        realize_truncated(dyadic, spec, Witness((5,), -3), 2)
