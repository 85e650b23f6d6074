"""Scenario engine for a used-EV purchase credit: bracket shifts, household
scaling and lifecycle-emissions benefit accounting."""

from .brackets import (
    ShiftSpec,
    adjacent_deltas,
    bracket_shares,
    common_boundaries,
    pathway_aggregates,
    real_shares,
    rebin,
    shift_brackets,
)
from .core import (
    BracketTable,
    Pathway,
    PriceBracket,
    Quantity,
    RoundingPolicy,
    ValidationError,
    round_half_up,
)
from .data import default_survey
from .eligibility import (
    CreditPolicy,
    Filing,
    PopulationParams,
    PurchaseProfile,
    credit_amount,
    scale_households,
)
from .emissions import (
    GridScenario,
    UtilizationProfile,
    VehicleEmissionParams,
    cumulative_lost_benefit,
    per_mile_emissions,
    per_vehicle_benefit,
    segment_emissions,
)
from .inputs import load_config, load_survey
from .report import ReportFormat, emit_report
from .scenario import PricePoint, ScenarioConfig, price_cap_pressure, run_scenario, sweep

__version__ = "0.1.0"

__all__ = [
    "BracketTable", "CreditPolicy", "Filing", "GridScenario", "Pathway", "PopulationParams", "PricePoint",
    "PriceBracket", "PurchaseProfile", "Quantity", "ReportFormat", "RoundingPolicy", "ScenarioConfig",
    "ShiftSpec", "UtilizationProfile", "ValidationError", "VehicleEmissionParams", "adjacent_deltas",
    "bracket_shares", "common_boundaries", "credit_amount", "cumulative_lost_benefit", "default_survey",
    "emit_report", "load_config", "load_survey", "pathway_aggregates", "per_mile_emissions",
    "per_vehicle_benefit", "price_cap_pressure", "real_shares", "rebin", "round_half_up", "run_scenario",
    "scale_households", "segment_emissions", "shift_brackets", "sweep",
]
