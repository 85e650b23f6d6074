import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import decimal_string_round
from usedev.core import (
    INF,
    BracketTable,
    PartitionError,
    Pathway,
    PriceBracket,
    Quantity,
    UnitMismatchError,
    ValidationError,
    partition_from_cuts,
    round_half_up,
    validate_partition,
)


@pytest.mark.parametrize(
    "x, places, expected",
    [
        (27_166_143.6, 0, 27_166_144),
        (0.0, 2, 0.0),
        (367.274, 2, 367.27),
        (2.675, 2, 2.68),
        (-2.5, 0, -3.0),
        (0.125, 2, 0.13),
    ],
)
def test_round_half_up_examples(x, places, expected):
    assert round_half_up(x, places) == expected


def test_round_half_up_matches_decimal_string_oracle():
    assert round_half_up(367.274, 2) == decimal_string_round(367.274, 2) == 367.27


def test_round_half_up_fraction_is_exact():
    assert round_half_up(Fraction(5, 2), 0) == 3.0
    assert round_half_up(Fraction(-5, 2), 0) == -3.0
    assert round_half_up(Fraction(1, 3), 4) == 0.3333


def test_round_half_up_rejects_negative_places():
    with pytest.raises(ValueError):
        round_half_up(1.0, -1)


finite = st.floats(min_value=-1e9, max_value=1e9, allow_nan=False)


@given(finite, st.integers(0, 6))
def test_round_half_up_idempotent(x, p):
    once = round_half_up(x, p)
    assert round_half_up(once, p) == once


@given(finite, st.integers(0, 6))
def test_round_half_up_agrees_with_string_oracle(x, p):
    assert round_half_up(x, p) == decimal_string_round(x, p)


def test_partition_from_cuts_is_gapless():
    part = partition_from_cuts([0, 500, 1000])
    assert part == (PriceBracket(0, 500), PriceBracket(500, 1000), PriceBracket(1000, INF))


@pytest.mark.parametrize(
    "brackets, match",
    [
        ([PriceBracket(100, INF)], "starts at 100"),
        ([PriceBracket(0, 500), PriceBracket(600, INF)], "gap"),
        ([PriceBracket(0, 500), PriceBracket(400, INF)], "overlap"),
        ([PriceBracket(0, 500)], "not unbounded"),
        ([], "empty"),
    ],
)
def test_validate_partition_rejects(brackets, match):
    with pytest.raises(PartitionError, match=match):
        validate_partition(brackets)


def test_bracket_labels_and_membership():
    assert PriceBracket(500, 1000).label == "$500 to $999"
    assert PriceBracket(0, 6000).label == "Less than $6,000"
    assert PriceBracket(10000, INF).label == "$10,000 or more"
    assert 999 in PriceBracket(500, 1000)
    assert 1000 not in PriceBracket(500, 1000)


def test_bracket_table_rejects_negative_and_fractional_counts():
    part = partition_from_cuts([0])
    ok = {p: [1] for p in Pathway}
    BracketTable.uniform(part, ok)
    with pytest.raises(ValidationError, match="negative"):
        BracketTable.uniform(part, {**ok, Pathway.USED_DEALER: [-1]})
    with pytest.raises(ValidationError, match="integer"):
        BracketTable.uniform(part, {**ok, Pathway.USED_DEALER: [1.5]})


def test_bracket_table_is_immutable(survey):
    with pytest.raises(TypeError):
        survey.counts[Pathway.USED_DEALER] = (0,)


def test_quantity_unit_checks():
    a = Quantity(1.0, "tCO2e")
    assert (a + a).value == 2.0
    assert (3 * a).unit == "tCO2e"
    with pytest.raises(UnitMismatchError):
        a + Quantity(1.0, "gCO2e/mi")
    with pytest.raises(UnitMismatchError):
        a < Quantity(1.0, "MtCO2e")
    with pytest.raises(UnitMismatchError):
        a * a
    with pytest.raises(UnitMismatchError):
        a.expect("gCO2e/mi")
    assert math.isclose(float(a.rounded(0)), 1.0)
