"""Sequence generators: values, JSON round trips, tail analysis."""

import pytest

from bratteli.sequences import (
    Arithmetic,
    Constant,
    Geometric,
    Polynomial,
    SequenceError,
    Table,
    seq_from_json,
    seq_from_text,
)


def test_values():
    assert [Constant(2).value(n) for n in range(4)] == [2, 2, 2, 2]
    assert [Arithmetic(2, 1).value(n) for n in range(4)] == [2, 3, 4, 5]
    assert [Geometric(2, 2).value(n) for n in range(4)] == [2, 4, 8, 16]
    assert [Polynomial((4, 4, 1)).value(n) for n in range(4)] == [4, 9, 16, 25]
    assert [Table((5, 3), Constant(2)).value(n) for n in range(5)] == [5, 3, 2, 2, 2]


def test_table_without_tail_is_limited():
    t = Table((5, 3))
    assert t.value(1) == 3
    with pytest.raises(SequenceError):
        t.value(2)
    assert t.reciprocal_sum_finite() is None


@pytest.mark.parametrize(
    "seq",
    [
        Constant(7),
        Arithmetic(3, 2),
        Geometric(2, 3),
        Polynomial((4, 4, 1)),
        Table((5, 3), Constant(2)),
        Table((9,), Geometric(2, 2)),
    ],
)
def test_json_round_trip(seq):
    assert seq_from_json(seq.to_json()) == seq


def test_text_grammar():
    assert seq_from_text("constant:2") == Constant(2)
    assert seq_from_text("arithmetic:2,1") == Arithmetic(2, 1)
    assert seq_from_text("geometric:2,2") == Geometric(2, 2)
    assert seq_from_text("poly:4,4,1") == Polynomial((4, 4, 1))
    assert seq_from_text("table:5,3:constant:2") == Table((5, 3), Constant(2))


def test_constant_from():
    assert Constant(2).constant_from() == (0, 2)
    assert Table((5, 3), Constant(2)).constant_from() == (2, 2)
    # trailing table entries equal to the tail constant are absorbed
    assert Table((5, 2, 2), Constant(2)).constant_from() == (1, 2)
    assert Arithmetic(2, 1).constant_from() is None


def test_max_from():
    assert Table((5, 3), Constant(2)).max_from(0) == 5
    assert Table((5, 3), Constant(2)).max_from(1) == 3
    assert Table((5, 3), Constant(2)).max_from(2) == 2
    assert Arithmetic(2, 1).max_from(0) is None


def test_reciprocal_sum_verdicts():
    assert Constant(2).reciprocal_sum_finite() is False
    assert Arithmetic(2, 1).reciprocal_sum_finite() is False
    assert Geometric(2, 2).reciprocal_sum_finite() is True
    assert Polynomial((4, 4, 1)).reciprocal_sum_finite() is True
    assert Polynomial((2, 1)).reciprocal_sum_finite() is False
    assert Table((9, 9), Geometric(2, 2)).reciprocal_sum_finite() is True


def test_invalid_sequences():
    with pytest.raises(SequenceError):
        Geometric(0, 2)
    with pytest.raises(SequenceError):
        Polynomial((3, -1))  # negative leading coefficient
    with pytest.raises(SequenceError):
        Table(())
