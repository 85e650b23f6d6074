"""Lifecycle emissions of preowned ICE vehicles and EVs, and the benefit lost
when a household cannot switch.

Per-mile intensity is amortized manufacturing plus fuel-cycle emissions;
segment emissions scale it by the miles driven in that part of the life.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence, Union

from .core import (
    G_PER_MILE,
    MEGATONNES,
    TONNES,
    Quantity,
    RoundingPolicy,
    ValidationError,
)
from .eligibility import HouseholdEstimate

# MJ per gallon of gasoline-equivalent. See README ("Energy density").
ENERGY_DENSITY_MJ_PER_GAL = 121.32

# PAPER_COMPAT display precision
PER_MILE_PLACES = 1
TONNE_PLACES = 2


@dataclass(frozen=True)
class VehicleEmissionParams:
    manufacturing: float  # t CO2e per vehicle
    fuel_production: float  # gCO2e/MJ
    fuel_usage: float  # gCO2e/MJ
    fuel_economy: float  # miles per gallon-equivalent
    energy_density: float = ENERGY_DENSITY_MJ_PER_GAL  # MJ per gallon-equivalent

    def __post_init__(self) -> None:
        if self.manufacturing < 0 or self.fuel_production < 0 or self.fuel_usage < 0:
            raise ValidationError("emission factors must be >= 0")
        if not self.fuel_economy > 0:
            raise ValidationError(f"fuel_economy must be > 0, got {self.fuel_economy}")
        if not self.energy_density > 0:
            raise ValidationError(f"energy_density must be > 0, got {self.energy_density}")


@dataclass(frozen=True)
class UtilizationProfile:
    lifetime_miles: float = 179_200
    lifetime_years: int = 15
    owned_years: int = 10
    miles_first_segment: float = 129_000
    miles_remaining: float = 50_200

    def __post_init__(self) -> None:
        if min(self.lifetime_miles, self.miles_first_segment, self.miles_remaining) < 0:
            raise ValidationError("mileages must be >= 0")
        if abs(self.miles_first_segment + self.miles_remaining - self.lifetime_miles) > 1e-9 * max(1.0, self.lifetime_miles):
            raise ValidationError(
                f"segments {self.miles_first_segment} + {self.miles_remaining} "
                f"do not add up to lifetime {self.lifetime_miles}"
            )
        if not 0 <= self.owned_years <= self.lifetime_years:
            raise ValidationError("owned_years must lie in [0, lifetime_years]")

    def with_remaining(self, miles_remaining: float) -> "UtilizationProfile":
        return replace(self, miles_remaining=miles_remaining, lifetime_miles=self.miles_first_segment + miles_remaining)


@dataclass(frozen=True)
class GridScenario:
    label: str
    ev_fuel_production: float  # gCO2e/MJ

    def __post_init__(self) -> None:
        if self.ev_fuel_production < 0:
            raise ValidationError(f"ev_fuel_production must be >= 0, got {self.ev_fuel_production}")


DEFAULT_ICE = VehicleEmissionParams(manufacturing=8, fuel_production=19, fuel_usage=73, fuel_economy=34.6)
DEFAULT_EV = VehicleEmissionParams(manufacturing=12.64, fuel_production=82.61, fuel_usage=0, fuel_economy=105.8)
DEFAULT_GRIDS = (
    GridScenario("50% cleaner grid", 82.61),
    GridScenario("90% cleaner grid", 23.81),
)


@dataclass(frozen=True)
class PerMileBreakdown:
    fuel_production: Quantity
    fuel_usage: Quantity
    manufacturing: Quantity
    total: Quantity


@dataclass(frozen=True)
class VehicleLifecycle:
    per_mile: PerMileBreakdown
    lifetime: Quantity
    first_segment: Quantity
    remaining: Quantity


@dataclass(frozen=True)
class BenefitEstimate:
    per_vehicle: Quantity  # t CO2e
    cumulative_lo: Quantity  # Mt CO2e, lower household bound
    cumulative_hi: Quantity  # Mt CO2e, upper household bound


@dataclass(frozen=True)
class GridAssessment:
    grid: GridScenario
    ev: VehicleLifecycle
    benefit: BenefitEstimate


@dataclass(frozen=True)
class EmissionsAssessment:
    ice: VehicleLifecycle
    grids: tuple[GridAssessment, ...]


def per_mile_breakdown(params: VehicleEmissionParams, util: UtilizationProfile) -> PerMileBreakdown:
    if util.lifetime_miles == 0:
        raise ValidationError("lifetime miles must be > 0 to amortize manufacturing")
    mj_per_mile = params.energy_density / params.fuel_economy
    production = mj_per_mile * params.fuel_production
    usage = mj_per_mile * params.fuel_usage
    manufacturing = params.manufacturing * 1e6 / util.lifetime_miles
    return PerMileBreakdown(
        fuel_production=Quantity(production, G_PER_MILE),
        fuel_usage=Quantity(usage, G_PER_MILE),
        manufacturing=Quantity(manufacturing, G_PER_MILE),
        total=Quantity(manufacturing + production + usage, G_PER_MILE),
    )


def per_mile_emissions(params: VehicleEmissionParams, util: UtilizationProfile) -> Quantity:
    """Total gCO2e per mile: amortized manufacturing plus fuel production and use."""
    return per_mile_breakdown(params, util).total


def segment_emissions(per_mile: Union[Quantity, float], miles: float) -> Quantity:
    """Tonnes CO2e emitted over ``miles`` at a fixed per-mile intensity."""
    if miles < 0:
        raise ValidationError(f"miles must be >= 0, got {miles}")
    g_per_mile = per_mile.expect(G_PER_MILE) if isinstance(per_mile, Quantity) else float(per_mile)
    return Quantity(miles / 1e6 * g_per_mile, TONNES)


def lifecycle(params: VehicleEmissionParams, util: UtilizationProfile, rounding: RoundingPolicy = RoundingPolicy.FULL_PRECISION) -> VehicleLifecycle:
    breakdown = per_mile_breakdown(params, util)
    if rounding is RoundingPolicy.PAPER_COMPAT:
        breakdown = PerMileBreakdown(*(q.rounded(PER_MILE_PLACES) for q in (
            breakdown.fuel_production, breakdown.fuel_usage, breakdown.manufacturing, breakdown.total)))

    def seg(miles: float) -> Quantity:
        q = segment_emissions(breakdown.total, miles)
        return q.rounded(TONNE_PLACES) if rounding is RoundingPolicy.PAPER_COMPAT else q

    return VehicleLifecycle(
        per_mile=breakdown,
        lifetime=seg(util.lifetime_miles),
        first_segment=seg(util.miles_first_segment),
        remaining=seg(util.miles_remaining),
    )


def per_vehicle_benefit(
    ice: VehicleEmissionParams,
    ev: VehicleEmissionParams,
    util: UtilizationProfile,
    rounding: RoundingPolicy = RoundingPolicy.PAPER_COMPAT,
) -> Quantity:
    """Remaining-life emissions avoided by replacing a preowned ICE with a preowned EV."""
    diff = lifecycle(ice, util, rounding).remaining - lifecycle(ev, util, rounding).remaining
    return diff.rounded(TONNE_PLACES) if rounding is RoundingPolicy.PAPER_COMPAT else diff


def cumulative_lost_benefit(benefit: Union[Quantity, float], households: HouseholdEstimate) -> BenefitEstimate:
    per_vehicle = benefit.expect(TONNES) if isinstance(benefit, Quantity) else float(benefit)
    if per_vehicle < 0:
        raise ValidationError(f"per-vehicle benefit must be >= 0, got {per_vehicle}")
    return BenefitEstimate(
        per_vehicle=Quantity(per_vehicle, TONNES),
        cumulative_lo=Quantity(per_vehicle * households.ineligible_lo / 1e6, MEGATONNES),
        cumulative_hi=Quantity(per_vehicle * households.ineligible_hi / 1e6, MEGATONNES),
    )


def assess_grids(
    ice: VehicleEmissionParams,
    ev: VehicleEmissionParams,
    grids: Sequence[GridScenario],
    util: UtilizationProfile,
    households: HouseholdEstimate,
    rounding: RoundingPolicy = RoundingPolicy.PAPER_COMPAT,
) -> EmissionsAssessment:
    """ICE lifecycle plus, per grid scenario, the EV lifecycle and lost benefit."""
    rows = []
    for grid in grids:
        ev_grid = replace(ev, fuel_production=grid.ev_fuel_production)
        benefit = per_vehicle_benefit(ice, ev_grid, util, rounding)
        rows.append(GridAssessment(grid, lifecycle(ev_grid, util, rounding), cumulative_lost_benefit(benefit, households)))
    return EmissionsAssessment(lifecycle(ice, util, rounding), tuple(rows))
