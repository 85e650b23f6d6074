import math
import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_force_intersection, per_respondent_rebin, random_small_table, shifted_cut_set
from usedev.brackets import (
    ShiftSpec,
    adjacent_deltas,
    bracket_shares,
    common_boundaries,
    pathway_aggregates,
    real_shares,
    rebin,
    rebin_table,
    shift_brackets,
)
from usedev.core import (
    INF,
    PATHWAYS,
    BracketTable,
    EmptyTableError,
    IncompatiblePartitionsError,
    Pathway,
    PriceBracket,
    StraddleError,
    ValidationError,
    boundaries,
    partition_from_cuts,
)

ND, UP, UD = Pathway.NEW_DEALER, Pathway.USED_PRIVATE, Pathway.USED_DEALER


def _table(cuts, counts):
    return BracketTable.uniform(partition_from_cuts(cuts), {Pathway(k): v for k, v in counts.items()})


# -- shifting ---------------------------------------------------------------

def test_shift_moves_only_eligible_pathway(survey):
    shifted = shift_brackets(survey, ShiftSpec(4000))
    assert shifted.partitions[ND] == survey.partitions[ND]
    ud = shifted.partitions[UD]
    assert ud[0] == PriceBracket(0, 4500)
    assert ud[1] == PriceBracket(4500, 5000)
    assert ud[-1] == PriceBracket(24000, INF)
    assert shifted.counts == survey.counts


def test_shift_with_percentage_cap():
    spec = ShiftSpec(4000, respect_percentage_cap=True, percentage_cap=0.30)
    assert spec.shift_endpoint(10000) == 13000
    assert spec.shift_endpoint(20000) == 24000
    assert spec.shift_endpoint(1001) == 1001 + 300
    assert spec.shift_endpoint(INF) == INF


@pytest.mark.parametrize("kwargs", [{"amount": -1}, {"amount": 1.5}, {"eligible_pathways": frozenset()},
                                    {"percentage_cap": 1.5}])
def test_shift_spec_validation(kwargs):
    with pytest.raises(ValidationError):
        ShiftSpec(**kwargs)


# -- common boundaries ------------------------------------------------------

def test_common_boundaries_default_survey(survey):
    shifted = shift_brackets(survey, ShiftSpec(4000))
    assert common_boundaries(survey.partition, shifted.partitions[UD]) == (0, 6000, 8000, 10000, INF)


def test_common_boundaries_small_example():
    a = partition_from_cuts([0, 100])
    b = partition_from_cuts([0, 100, 200])
    assert common_boundaries(a, b) == (0, 100, INF)


def test_common_boundaries_minimum_cuts():
    a = partition_from_cuts([0, 100])
    b = partition_from_cuts([0, 200])
    assert common_boundaries(a, b) == (0, INF)
    with pytest.raises(IncompatiblePartitionsError):
        common_boundaries(a, b, min_finite_cuts=2)


@given(st.lists(st.integers(1, 50), max_size=8), st.lists(st.integers(1, 50), max_size=8))
def test_common_boundaries_matches_brute_force(xs, ys):
    a, b = {0, INF, *(x * 100 for x in xs)}, {0, INF, *(y * 100 for y in ys)}
    assert list(common_boundaries(sorted(a), sorted(b))) == brute_force_intersection(a, b)


# -- rebinning --------------------------------------------------------------

def test_rebin_default_tables(survey):
    r = rebin(survey, ShiftSpec(4000))
    assert boundaries(r.merged_partition) == (0, 6000, 8000, 10000, INF)
    assert [r.before.column(p) for p in PATHWAYS] == [(4, 1, 0, 158), (177, 12, 8, 19), (81, 27, 28, 223)]
    assert [r.after.column(p) for p in PATHWAYS] == [(4, 1, 0, 158), (177, 12, 8, 19), (15, 33, 33, 278)]


def test_rebin_identity_at_zero_credit(survey):
    r = rebin(survey, ShiftSpec(0))
    assert r.after == r.before
    assert r.merged_partition == survey.partition


def test_rebin_straddle_is_reported():
    t = _table([0, 1000], {"new_dealer": [1, 1], "used_private": [0, 0], "used_dealer": [0, 0]})
    with pytest.raises(StraddleError, match="straddles"):
        rebin_table(t, partition_from_cuts([0, 500]))


def test_rebin_explicit_merged_partition(survey):
    r = rebin(survey, ShiftSpec(4000), merged=[0, 10000])
    assert r.after.column(UD) == (81, 278)


def _check_conservation(table, spec):
    r = rebin(table, spec)
    assert r.before.total == r.after.total == table.total
    for p in PATHWAYS:
        assert r.before.pathway_total(p) == r.after.pathway_total(p) == table.pathway_total(p)
    return r


spec_strategy = st.builds(
    ShiftSpec,
    amount=st.integers(0, 30000),
    eligible_pathways=st.sets(st.sampled_from(PATHWAYS), min_size=1).map(frozenset),
    respect_percentage_cap=st.booleans(),
    percentage_cap=st.sampled_from([0.0, 0.1, 0.3, 1.0]),
)


@settings(max_examples=200)
@given(spec_strategy)
def test_conservation_under_random_specs(survey, spec):
    _check_conservation(survey, spec)


def test_monotone_mass_moves_up(survey):
    # eligible mass at or above any shared cut never decreases
    r = rebin(survey, ShiftSpec(4000))
    before, after = r.before.column(UD), r.after.column(UD)
    for k in range(len(before)):
        assert sum(after[k:]) >= sum(before[k:])
    for p in (ND, UP):
        assert r.before.column(p) == r.after.column(p)


def test_shift_keeps_count_multiset(survey):
    shifted = shift_brackets(survey, ShiftSpec(2500))
    for p in PATHWAYS:
        assert Counter(shifted.counts[p]) == Counter(survey.counts[p])


def test_merged_cuts_lie_in_both_partitions(survey):
    spec = ShiftSpec(4000)
    r = rebin(survey, spec)
    shifted = set(boundaries(shift_brackets(survey, spec).partitions[UD]))
    assert set(boundaries(r.merged_partition)) <= set(boundaries(survey.partition)) & shifted


def test_rebin_matches_per_respondent_oracle():
    rng = random.Random(20240501)
    for _ in range(500):
        cuts, counts, credit = random_small_table(rng)
        merged, before, after = per_respondent_rebin(cuts, counts, {"used_dealer"}, credit, rng)
        r = rebin(_table(cuts, counts), ShiftSpec(credit))
        assert list(boundaries(r.merged_partition)) == merged
        for name in counts:
            p = Pathway(name)
            assert list(r.before.column(p)) == [before[name][i] for i in range(len(merged) - 1)]
            assert list(r.after.column(p)) == [after[name][i] for i in range(len(merged) - 1)]


def test_oracle_shift_set_matches_library():
    cuts = [0, 500, 1000, 2000]
    part = partition_from_cuts(cuts)
    shifted = shift_brackets(BracketTable.uniform(part, {p: [0] * 4 for p in PATHWAYS}), ShiftSpec(700))
    assert set(boundaries(shifted.partitions[UD])) == shifted_cut_set(cuts, 700)


# -- shares -----------------------------------------------------------------

def test_bracket_shares_default_values(survey):
    r = rebin(survey, ShiftSpec(4000))
    before = bracket_shares(r.before)
    after = bracket_shares(r.after)
    assert [round(100 * before.shares[p][1], 2) for p in PATHWAYS] == [2.50, 30.00, 67.50]
    assert [round(100 * after.shares[p][3], 2) for p in PATHWAYS] == [34.73, 4.18, 61.10]


def test_real_share_example(survey):
    r = rebin(survey, ShiftSpec(4000))
    assert round(100 * real_shares(r.before)[UD][2], 2) == 3.79


@settings(max_examples=100)
@given(st.lists(st.tuples(st.integers(0, 30), st.integers(0, 30), st.integers(0, 30)), min_size=1, max_size=6))
def test_share_normalisation(rows):
    cuts = [500 * i for i in range(len(rows))]
    t = BracketTable.uniform(partition_from_cuts(cuts), {p: [r[i] for r in rows] for i, p in enumerate(PATHWAYS)})
    bs = bracket_shares(t)
    for k, empty in enumerate(bs.empty):
        s = sum(bs.shares[p][k] for p in PATHWAYS)
        assert s == 0 if empty else math.isclose(s, 1, abs_tol=1e-12)
    if t.total:
        assert math.isclose(sum(sum(v) for v in real_shares(t).values()), 1, abs_tol=1e-12)
    else:
        with pytest.raises(EmptyTableError):
            real_shares(t)


def test_pathway_aggregates(survey):
    a = pathway_aggregates(survey)
    assert [round(100 * x, 2) for x in (a.new_share, a.preowned_share, a.dealer_share_of_preowned,
                                        a.private_share_of_preowned)] == [22.09, 77.91, 62.43, 37.57]


def test_adjacent_deltas(survey):
    r = rebin(survey, ShiftSpec(4000))
    nd = adjacent_deltas(r, ND)
    assert nd.pairs[-1] == (PriceBracket(8000, 10000), PriceBracket(10000, INF))
    assert round(100 * nd.before[-1], 2) == 21.41
    assert round(100 * adjacent_deltas(r, UD).before[1], 2) == 0.14
