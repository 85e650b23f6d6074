import math
from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from usedev.core import TONNES, Quantity, RoundingPolicy, UnitMismatchError, ValidationError, round_half_up
from usedev.eligibility import PopulationParams, scale_households
from usedev.emissions import (
    DEFAULT_EV,
    DEFAULT_GRIDS,
    DEFAULT_ICE,
    ENERGY_DENSITY_MJ_PER_GAL,
    GridScenario,
    UtilizationProfile,
    VehicleEmissionParams,
    assess_grids,
    cumulative_lost_benefit,
    lifecycle,
    per_mile_emissions,
    per_vehicle_benefit,
    segment_emissions,
)

UTIL = UtilizationProfile()
PC, FP = RoundingPolicy.PAPER_COMPAT, RoundingPolicy.FULL_PRECISION
EV50 = replace(DEFAULT_EV, fuel_production=82.61)
EV90 = replace(DEFAULT_EV, fuel_production=23.81)


def test_per_mile_examples():
    assert per_mile_emissions(DEFAULT_ICE, UTIL).value == pytest.approx(367.2, abs=0.1)
    assert per_mile_emissions(DEFAULT_ICE, UTIL).value == pytest.approx(367.23, abs=0.01)
    assert per_mile_emissions(EV50, UTIL).value == pytest.approx(165.3, abs=0.1)
    assert per_mile_emissions(EV90, UTIL).value == pytest.approx(97.8, abs=0.1)


def test_zero_vehicle_has_zero_emissions():
    zero = VehicleEmissionParams(0, 0, 0, 30)
    assert per_mile_emissions(zero, UTIL).value == 0


def test_manufacturing_only():
    v = VehicleEmissionParams(8, 0, 0, 30)
    assert per_mile_emissions(v, UTIL).value == pytest.approx(8e6 / 179_200)
    assert round_half_up(per_mile_emissions(v, UTIL).value, 2) == 44.64


def test_segment_examples():
    assert segment_emissions(Quantity(367.2, "gCO2e/mi"), 50_200).value == pytest.approx(18.43344)
    assert segment_emissions(100.0, 0).value == 0
    with pytest.raises(UnitMismatchError):
        segment_emissions(Quantity(1.0, TONNES), 10)
    with pytest.raises(ValidationError):
        segment_emissions(1.0, -1)


def test_zero_lifetime_rejected():
    with pytest.raises(ValidationError):
        per_mile_emissions(DEFAULT_ICE, UtilizationProfile(0, 0, 0, 0, 0))


def test_utilization_must_add_up():
    with pytest.raises(ValidationError):
        UtilizationProfile(miles_first_segment=129_000, miles_remaining=50_000)


def test_table3_table_compatible_rounding():
    rows = {
        "ice": (DEFAULT_ICE, 367.2, 65.80, 47.37, 18.43),
        "ev50": (EV50, 165.3, 29.62, 21.32, 8.30),
        "ev90": (EV90, 97.8, 17.53, 12.62, 4.91),
    }
    for params, pm, life, first, rem in rows.values():
        lc = lifecycle(params, UTIL, PC)
        assert lc.per_mile.total.value == pm
        assert (lc.lifetime.value, lc.first_segment.value, lc.remaining.value) == (life, first, rem)
    assert per_vehicle_benefit(DEFAULT_ICE, EV50, UTIL, PC).value == 10.13
    assert per_vehicle_benefit(DEFAULT_ICE, EV90, UTIL, PC).value == 13.52


def test_energy_density_interval_oracle():
    # every displayed per-mile figure pins the energy density to an interval;
    # the default must lie in all of them
    lo, hi = -math.inf, math.inf
    for params, shown in ((DEFAULT_ICE, 367.2), (EV50, 165.3), (EV90, 97.8)):
        mfg = params.manufacturing * 1e6 / UTIL.lifetime_miles
        slope = (params.fuel_production + params.fuel_usage) / params.fuel_economy
        lo = max(lo, (shown - 0.05 - mfg) / slope)
        hi = min(hi, (shown + 0.05 - mfg) / slope)
    assert lo <= ENERGY_DENSITY_MJ_PER_GAL < hi
    assert not lo <= 121.33 < hi


def test_full_precision_benefit_close_to_paper_compat():
    for ev in (EV50, EV90):
        fp = per_vehicle_benefit(DEFAULT_ICE, ev, UTIL, FP).value
        pc = per_vehicle_benefit(DEFAULT_ICE, ev, UTIL, PC).value
        assert abs(fp - pc) <= 0.02


def test_cumulative_default_values():
    h = scale_households(PopulationParams(), PC)
    a = assess_grids(DEFAULT_ICE, DEFAULT_EV, DEFAULT_GRIDS, UTIL, h, PC)
    got = [(g.benefit.cumulative_lo.value, g.benefit.cumulative_hi.value) for g in a.grids]
    expected = [(80.55, 85.35), (107.51, 113.92)]
    for (glo, ghi), (elo, ehi) in zip(got, expected):
        assert glo == pytest.approx(elo, abs=0.1)
        assert ghi == pytest.approx(ehi, abs=0.1)
    assert round_half_up(got[1][1], 2) == 113.92


def test_negative_benefit_rejected():
    h = scale_households(PopulationParams(), PC)
    with pytest.raises(ValidationError):
        cumulative_lost_benefit(-1.0, h)


def test_grid_label_and_domain():
    with pytest.raises(ValidationError):
        GridScenario("bad", -1)


@given(st.floats(0, 500), st.floats(0, 500), st.floats(0, 50), st.floats(5, 150))
def test_segment_additivity(fp, fu, mfg, mpg):
    v = VehicleEmissionParams(mfg, fp, fu, mpg)
    lc = lifecycle(v, UTIL, FP)
    assert lc.lifetime.value == pytest.approx(lc.first_segment.value + lc.remaining.value, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("field", ["manufacturing", "fuel_production", "fuel_usage"])
def test_per_mile_increases_with_emission_inputs(field):
    h = 1e-3
    base = per_mile_emissions(DEFAULT_ICE, UTIL).value
    bumped = per_mile_emissions(replace(DEFAULT_ICE, **{field: getattr(DEFAULT_ICE, field) + h}), UTIL).value
    assert (bumped - base) / h > 0


def test_per_mile_decreases_with_fuel_economy():
    h = 1e-3
    base = per_mile_emissions(DEFAULT_ICE, UTIL).value
    bumped = per_mile_emissions(replace(DEFAULT_ICE, fuel_economy=DEFAULT_ICE.fuel_economy + h), UTIL).value
    assert (bumped - base) / h < 0


@given(st.integers(0, 179_200))
def test_benefit_linear_in_remaining_miles(m):
    # lifetime held fixed, so the per-mile intensities do not change
    util = replace(UTIL, miles_first_segment=179_200 - m, miles_remaining=m)
    per_mile_gap = per_mile_emissions(DEFAULT_ICE, UTIL).value - per_mile_emissions(EV50, UTIL).value
    got = per_vehicle_benefit(DEFAULT_ICE, EV50, util, FP).value
    assert got == pytest.approx(per_mile_gap * m / 1e6, rel=1e-9, abs=1e-12)


@given(st.floats(0, 1e3), st.floats(0, 1e6), st.floats(0, 1e6))
def test_segment_emissions_additive(pm, m1, m2):
    total = segment_emissions(pm, m1 + m2).value
    assert segment_emissions(pm, m1).value + segment_emissions(pm, m2).value == pytest.approx(total, rel=1e-9, abs=1e-12)


def test_rounded_segments_add_up():
    lc = lifecycle(DEFAULT_ICE, UTIL, PC)
    assert abs(lc.first_segment.value + lc.remaining.value - lc.lifetime.value) <= 0.02


@given(st.floats(0, 82.61))
def test_ice_exceeds_ev_across_grid_range(ev_fp):
    ev = replace(DEFAULT_EV, fuel_production=ev_fp)
    assert per_mile_emissions(DEFAULT_ICE, UTIL).value > per_mile_emissions(ev, UTIL).value


def test_dimensional_invariance():
    rho = ENERGY_DENSITY_MJ_PER_GAL
    unit = replace(DEFAULT_ICE, energy_density=1.0, fuel_production=19 * rho, fuel_usage=73 * rho)
    assert per_mile_emissions(unit, UTIL).value == pytest.approx(per_mile_emissions(DEFAULT_ICE, UTIL).value)
