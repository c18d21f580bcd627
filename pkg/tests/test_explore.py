"""Spectrum exploration: 3-point enumeration, 4-point grids, region output."""

from fractions import Fraction

import pytest

from findiag import (
    INF,
    AllOfInterval,
    DiagonalSequence,
    DivergentTail,
    DomainError,
    GeometricTail,
    RegionSample,
    SpectrumSpec,
    Witness,
    candidate_multiplicity_bound,
    decide,
    emit_region,
    enumerate_witnesses,
    four_point_region,
    reflect,
    three_point_spectra,
)

F = Fraction


def test_multiplicity_bound_dyadic(dyadic):
    assert candidate_multiplicity_bound(dyadic) == 13


def test_three_point_dyadic_frozen(dyadic):
    pts = three_point_spectra(dyadic)
    assert pts == frozenset(
        {F(1, 8), F(1, 6), F(1, 4), F(1, 2), F(3, 4), F(5, 6), F(7, 8)}
    )


def test_three_point_results_are_certified(dyadic):
    for a in three_point_spectra(dyadic):
        out = decide(dyadic, SpectrumSpec((F(0), a, F(1))))
        assert out.feasible


def test_three_point_worker_invariance(dyadic):
    assert three_point_spectra(dyadic, workers=2) == three_point_spectra(dyadic)


def test_three_point_cap_override(dyadic):
    pts = three_point_spectra(dyadic, n_max=3)
    assert pts == frozenset({F(1, 6), F(1, 4), F(1, 2), F(3, 4), F(5, 6)})
    assert pts < three_point_spectra(dyadic)


def test_three_point_two_atoms():
    seq = DiagonalSequence(
        B=F(1), explicit=(F(1, 2), F(1, 2)), zero_count=INF, b_count=INF
    )
    assert three_point_spectra(seq) == frozenset({F(1, 2)})
    ws = enumerate_witnesses(seq, SpectrumSpec((F(0), F(1, 2), F(1))))
    assert ws == [Witness((2,), -2)]


def test_three_point_divergent_everything():
    seq = DiagonalSequence(B=F(1), zero_tail=DivergentTail(), b_tail=DivergentTail())
    out = three_point_spectra(seq)
    assert isinstance(out, AllOfInterval)
    assert out.B == F(1)


def test_three_point_rejects_finite_mass():
    seq = DiagonalSequence(B=F(1), explicit=(F(1, 2),))
    with pytest.raises(DomainError):
        three_point_spectra(seq)


def test_four_point_region_frozen_counts(dyadic):
    rows = four_point_region(dyadic, 8)
    assert len(rows) == 21  # pairs 0 < p < r < 8
    assert sum(1 for r in rows if r.feasible) == 13
    for r in rows:
        assert 0 < r.A1 < r.A2 < F(1)
        assert r.feasible == (r.witness_count > 0)


def test_four_point_region_matches_decide(dyadic):
    for row in four_point_region(dyadic, 4):
        out = decide(dyadic, SpectrumSpec((F(0), row.A1, row.A2, F(1))))
        assert out.feasible == row.feasible
        assert len(out.witnesses) == row.witness_count


def test_four_point_region_reflection_symmetry(dyadic):
    # the dyadic sequence is symmetric under v ↦ 1−v, so its region is too
    assert reflect(dyadic) == dyadic
    rows = four_point_region(dyadic, 8)
    table = {(r.A1, r.A2): r.feasible for r in rows}
    for (a1, a2), feas in table.items():
        assert table[(1 - a2, 1 - a1)] == feas


def test_four_point_region_worker_invariance(dyadic):
    assert four_point_region(dyadic, 6, workers=2) == four_point_region(dyadic, 6)


def test_four_point_region_grid_validation(dyadic):
    with pytest.raises(DomainError):
        four_point_region(dyadic, 2)


def test_emit_csv_format(dyadic):
    rows = four_point_region(dyadic, 8)
    data = emit_region(rows).decode()
    lines = data.splitlines()
    assert lines[0] == "A1,A2,feasible"
    assert lines[1] == "1/8,1/4,true"
    assert len(lines) == 22
    assert data.endswith("\n")


def test_emit_csv_three_point_rows():
    rows = [RegionSample(F(1, 2), None, True, 2)]
    data = emit_region(rows).decode()
    assert data == "A1,A2,feasible\n1/2,,true\n"


def test_emit_csv_empty():
    assert emit_region([]).decode() == "A1,A2,feasible\n"


def test_emit_svg(dyadic):
    rows = four_point_region(dyadic, 8)
    svg = emit_region(rows, "svg", B=F(1)).decode()
    assert svg.startswith("<svg")
    assert svg.count("<circle") == 21
    assert "800" in svg


def test_emit_svg_empty():
    svg = emit_region([], "svg", B=F(1)).decode()
    assert svg.startswith("<svg")
    assert "<circle" not in svg


def test_emit_unknown_format(dyadic):
    with pytest.raises(DomainError):
        emit_region([], "png")
