"""JSON serialization: round-trips, strict schemas, error paths."""

import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from findiag import (
    format_rational,
    parse_rational,
    INF,
    DiagonalSequence,
    DivergentTail,
    GeometricTail,
    SchemaError,
    SpectrumSpec,
    SymmetricMatrix,
    Verdict,
    Witness,
    decide,
    dump_decision,
    dump_json,
    dump_matrix,
    dump_sequence,
    dump_spectrum,
    dump_witness,
    load_json,
    parse_matrix,
    parse_sequence,
    parse_spectrum,
    parse_witness,
)

from conftest import random_sequence
from random import Random

F = Fraction


def test_sequence_round_trip(dyadic):
    assert parse_sequence(dump_sequence(dyadic)) == dyadic


def test_sequence_round_trip_randomized():
    rng = Random(55)
    for _ in range(100):
        seq = random_sequence(rng)
        assert parse_sequence(dump_sequence(seq)) == seq


def test_sequence_round_trip_edge_shapes():
    shapes = [
        DiagonalSequence(B=F(1)),
        DiagonalSequence(B=F(5, 3), explicit=(F(1, 3),), zero_count=INF),
        DiagonalSequence(B=F(2), zero_tail=DivergentTail(), b_count=4),
        DiagonalSequence(B=F(1), b_tail=GeometricTail(F(1, 7), F(2, 5))),
    ]
    for seq in shapes:
        assert parse_sequence(dump_sequence(seq)) == seq


def test_dump_json_is_deterministic(dyadic):
    a = dump_json(dump_sequence(dyadic))
    b = dump_json(dump_sequence(parse_sequence(dump_sequence(dyadic))))
    assert a == b
    assert a.endswith("\n")
    assert json.loads(a)  # well-formed


def test_parse_accepts_bare_integers():
    seq = parse_sequence({"B": 2, "explicit": [1, "1/2"]})
    assert seq.B == F(2)
    assert seq.explicit == (F(1, 2), F(1))


def test_parse_rejects_unknown_keys():
    with pytest.raises(SchemaError) as exc:
        parse_sequence({"B": "1", "bogus": 1})
    assert "bogus" in str(exc.value)


def test_parse_rejects_floats():
    with pytest.raises(SchemaError) as exc:
        parse_sequence({"B": 0.5})
    assert exc.value.path == "$.B"


def test_parse_rejects_bools():
    with pytest.raises(SchemaError) as exc:
        parse_sequence({"B": "1", "explicit": [True]})
    assert exc.value.path == "$.explicit[0]"


def test_parse_rejects_zero_denominator():
    with pytest.raises(SchemaError) as exc:
        parse_sequence({"B": "1", "explicit": ["1/0"]})
    assert "denominator" in str(exc.value)


def test_parse_rejects_negative_count():
    with pytest.raises(SchemaError) as exc:
        parse_sequence({"B": "1", "zero_count": -2})
    assert exc.value.path == "$.zero_count"


def test_parse_count_inf():
    seq = parse_sequence({"B": "1", "zero_count": "inf"})
    assert seq.zero_count is INF
    assert dump_sequence(seq)["zero_count"] == "inf"


def test_parse_tail_errors():
    with pytest.raises(SchemaError):
        parse_sequence({"B": "1", "zero_tail": {"kind": "geometric", "first": "1/4"}})
    with pytest.raises(SchemaError) as exc:
        parse_sequence(
            {"B": "1", "zero_tail": {"kind": "arithmetic", "first": "1/4", "ratio": "1/2"}}
        )
    assert exc.value.path == "$.zero_tail.kind"


def test_parse_domain_violation_becomes_schema_error():
    # entries outside [0, B] are structurally valid JSON but domain-invalid
    with pytest.raises(SchemaError):
        parse_sequence({"B": "1", "explicit": ["3/2"]})
    with pytest.raises(SchemaError):
        parse_sequence({"B": "1", "zero_tail": {"kind": "geometric", "first": "1/4", "ratio": "2"}})


def test_missing_required_key():
    with pytest.raises(SchemaError) as exc:
        parse_sequence({"explicit": []})
    assert "'B'" in str(exc.value)


def test_spectrum_round_trip():
    spec = SpectrumSpec((F(0), F(1, 4), F(1, 2), F(1)))
    assert parse_spectrum(dump_spectrum(spec)) == spec


def test_spectrum_rejects_unsorted():
    with pytest.raises(SchemaError):
        parse_spectrum(["0", "1/2", "1/4", "1"])
    with pytest.raises(SchemaError):
        parse_spectrum(["1/4", "1/2"])  # must start at 0


def test_witness_round_trip():
    w = Witness((2, 1), -3)
    assert parse_witness(dump_witness(w)) == w
    assert dump_witness(w) == {"N": [2, 1], "k": -3}


def test_witness_rejects_bad_multiplicities():
    with pytest.raises(SchemaError):
        parse_witness({"N": [0], "k": 0})
    with pytest.raises(SchemaError):
        parse_witness({"N": [1], "k": "1/2"})
    with pytest.raises(SchemaError):
        parse_witness({"N": [1]})


def test_matrix_round_trip():
    arr = np.array([[1.0, 0.25], [0.25, 0.5]])
    m = SymmetricMatrix(arr, exact_diagonal=(F(1), F(1, 2)))
    out = parse_matrix(dump_matrix(m))
    assert np.array_equal(out.as_array(), arr)


def test_matrix_parse_rejects_asymmetry():
    with pytest.raises(SchemaError) as exc:
        parse_matrix({"dim": 2, "rows": [[0.0, 1.0], [0.5, 0.0]]})
    assert "symmetric" in str(exc.value)


def test_matrix_parse_rejects_bad_shape():
    with pytest.raises(SchemaError):
        parse_matrix({"dim": 3, "rows": [[0.0]]})
    with pytest.raises(SchemaError):
        parse_matrix({"dim": 2, "rows": [[0.0, "x"], ["x", 0.0]]})


def test_dump_decision_shape(dyadic):
    out = decide(dyadic, SpectrumSpec((F(0), F(1, 2), F(1))))
    payload = dump_decision(out)
    assert payload["verdict"] == "FeasibleCaseII"
    assert payload["witnesses"] == [{"N": [1], "k": -1}, {"N": [3], "k": -2}]
    assert payload["bounds"] == [3]
    assert "note" not in payload  # empty notes are omitted
    text = dump_json(payload)
    assert text == dump_json(json.loads(text))  # stable under re-serialization


def test_load_json_reports_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(SchemaError):
        load_json(p.read_text())


@given(st.fractions())
def test_rational_text_round_trip(x):
    assert parse_rational(format_rational(x)) == x
