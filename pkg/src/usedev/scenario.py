"""Full pipeline (survey -> rebin -> household scaling -> emissions) and sweeps."""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, TypeVar

from .brackets import (
    AdjacentDeltas,
    BracketShares,
    PathwayAggregates,
    RebinResult,
    ShiftSpec,
    adjacent_deltas,
    bracket_shares,
    pathway_aggregates,
    real_shares,
    rebin,
)
from .core import (
    PATHWAYS,
    BracketTable,
    Pathway,
    RoundingPolicy,
    ValidationError,
    as_fraction,
    round_count,
)
from .data import USED_PRICE_POINTS
from .eligibility import CreditPolicy, HouseholdEstimate, PopulationParams, scale_households
from .emissions import (
    DEFAULT_EV,
    DEFAULT_GRIDS,
    DEFAULT_ICE,
    BenefitEstimate,
    EmissionsAssessment,
    GridScenario,
    UtilizationProfile,
    VehicleEmissionParams,
    assess_grids,
)

T = TypeVar("T")

# Minimum finite cut points (0 included) for a merged partition to count as
# an informative rebinning rather than a single catch-all bracket.
MIN_FINITE_CUTS = 2

INCIDENCE_NOTE = (
    "incidence is a reduced-form scaling of the credit: every eligible respondent "
    "moves up by incidence x max_credit; no market price response is modeled"
)
FIG1C_NOTE = (
    "Fig 1c shares are whole-sample shares (cell count / sample total) computed from "
    "integer counts; other Fig 1c percentages in circulation (43.54 -> 62.31 etc.) "
    "cannot be derived from the counts and are not reproduced"
)


class ScenarioError(ValidationError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


@dataclass(frozen=True)
class PricePoint:
    year: int
    mean_used_price: int

    def __post_init__(self) -> None:
        if self.year < 1990:
            raise ValidationError(f"year must be >= 1990, got {self.year}")
        if not self.mean_used_price > 0:
            raise ValidationError(f"price must be > 0, got {self.mean_used_price}")


DEFAULT_PRICE_POINTS = tuple(PricePoint(y, p) for y, p in USED_PRICE_POINTS)


@dataclass(frozen=True)
class PricePressure:
    cap: int
    fit_slope: float  # dollars per year
    fit_intercept: float  # fitted price at year 0
    first_year_exceeding: Optional[int]
    points: tuple[PricePoint, ...]
    per_point_headroom: tuple[int, ...]

    def fitted(self, year: float) -> float:
        return self.fit_intercept + self.fit_slope * year


def price_cap_pressure(points: Iterable[PricePoint | tuple[int, int]], cap: int) -> PricePressure:
    """OLS trend of mean used prices against a price cap.

    ``first_year_exceeding`` is the earliest whole year, no earlier than the
    first observation, whose fitted price is strictly above ``cap``.
    """
    pts = tuple(p if isinstance(p, PricePoint) else PricePoint(*p) for p in points)
    if len(pts) < 2:
        raise ValidationError("price_cap_pressure needs at least 2 points")
    years = [p.year for p in pts]
    if len(set(years)) != len(years):
        raise ValidationError(f"duplicate years in {sorted(years)}")
    n = len(pts)
    x_bar = Fraction(sum(years), n)
    y_bar = Fraction(sum(p.mean_used_price for p in pts), n)
    sxx = sum((x - x_bar) ** 2 for x in years)
    sxy = sum((p.year - x_bar) * (p.mean_used_price - y_bar) for p in pts)
    slope = sxy / sxx
    intercept = y_bar - slope * x_bar

    first_year = min(years)
    if intercept + slope * first_year > cap:
        exceeding: Optional[int] = first_year
    elif slope <= 0:
        exceeding = None
    else:
        crossing = (cap - intercept) / slope
        exceeding = max(first_year, math.floor(crossing) + 1)
    return PricePressure(
        cap=cap,
        fit_slope=float(slope),
        fit_intercept=float(intercept),
        first_year_exceeding=exceeding,
        points=pts,
        per_point_headroom=tuple(cap - p.mean_used_price for p in pts),
    )


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything a run depends on besides the survey table.

    ``shift`` contributes the eligible pathways and the percentage-cap switch;
    the shift amount is always ``incidence * policy.max_credit`` and the cap
    rate comes from ``policy``.
    """

    shift: ShiftSpec = field(default_factory=ShiftSpec)
    policy: CreditPolicy = field(default_factory=CreditPolicy)
    population: PopulationParams = field(default_factory=PopulationParams)
    ice: VehicleEmissionParams = DEFAULT_ICE
    ev: VehicleEmissionParams = DEFAULT_EV
    grids: tuple[GridScenario, ...] = DEFAULT_GRIDS
    util: UtilizationProfile = field(default_factory=UtilizationProfile)
    rounding: RoundingPolicy = RoundingPolicy.PAPER_COMPAT
    incidence: float = 1.0
    price_points: tuple[PricePoint, ...] = DEFAULT_PRICE_POINTS

    def __post_init__(self) -> None:
        if not 0 <= self.incidence <= 1:
            raise ValidationError(f"incidence must lie in [0, 1], got {self.incidence}")
        object.__setattr__(self, "grids", tuple(self.grids))
        object.__setattr__(self, "price_points", tuple(self.price_points))

    @property
    def effective_credit(self) -> int:
        return round_count(as_fraction(self.incidence) * self.policy.max_credit)

    def effective_shift(self) -> ShiftSpec:
        return replace(self.shift, amount=self.effective_credit, percentage_cap=self.policy.percentage_cap)


@dataclass(frozen=True)
class ScenarioReport:
    config: ScenarioConfig
    shift: ShiftSpec
    rebin: RebinResult
    before_shares: BracketShares
    after_shares: BracketShares
    # whole-sample shares and derived figures; None for an empty survey
    before_real: Optional[dict[Pathway, tuple[float, ...]]]
    after_real: Optional[dict[Pathway, tuple[float, ...]]]
    deltas: Optional[dict[Pathway, AdjacentDeltas]]
    aggregates: Optional[PathwayAggregates]
    population: PopulationParams
    households: HouseholdEstimate
    emissions: EmissionsAssessment
    price_pressure: PricePressure
    non_paper_partition: bool
    notes: tuple[str, ...]

    @property
    def rounding(self) -> RoundingPolicy:
        return self.config.rounding

    @property
    def benefits(self) -> tuple[tuple[GridScenario, BenefitEstimate], ...]:
        return tuple((g.grid, g.benefit) for g in self.emissions.grids)

    @property
    def empty(self) -> bool:
        return self.rebin.before.total == 0


def _stage(name: str, fn: Callable[[], T]) -> T:
    try:
        return fn()
    except ScenarioError:
        raise
    except ValidationError as exc:
        raise ScenarioError(name, str(exc)) from exc


def run_scenario(config: ScenarioConfig, survey: BracketTable) -> ScenarioReport:
    """Run all three parts of the analysis on one survey table."""
    spec = config.effective_shift()
    notes = [INCIDENCE_NOTE, FIG1C_NOTE]

    result = _stage("rebin", lambda: rebin(survey, spec))
    # each bracket contributes its lower bound as a finite cut
    non_paper = len(result.merged_partition) < MIN_FINITE_CUTS
    if non_paper:
        notes.append(
            f"credit ${spec.amount:,} leaves no interior cut shared by the original and shifted "
            "partitions; tables collapse to a single [0, inf) bracket (non-paper partition)"
        )

    populated = result.before.total > 0
    before_real = _stage("shares", lambda: real_shares(result.before)) if populated else None
    after_real = _stage("shares", lambda: real_shares(result.after)) if populated else None
    deltas = {p: adjacent_deltas(result, p) for p in PATHWAYS} if populated else None
    preowned = survey.pathway_total(Pathway.USED_PRIVATE) + survey.pathway_total(Pathway.USED_DEALER)
    aggregates = _stage("shares", lambda: pathway_aggregates(survey)) if preowned else None

    population = config.population
    if config.rounding is RoundingPolicy.FULL_PRECISION and preowned:
        population = population.with_survey_shares(survey)
        notes.append("preowned and private-seller shares recomputed exactly from the survey")

    households = _stage("eligibility", lambda: scale_households(population, config.rounding))
    emissions = _stage(
        "emissions",
        lambda: assess_grids(config.ice, config.ev, config.grids, config.util, households, config.rounding),
    )
    pressure = _stage("price-cap", lambda: price_cap_pressure(config.price_points, config.policy.price_cap))
    return ScenarioReport(
        config=config,
        shift=spec,
        rebin=result,
        before_shares=bracket_shares(result.before),
        after_shares=bracket_shares(result.after),
        before_real=before_real,
        after_real=after_real,
        deltas=deltas,
        aggregates=aggregates,
        population=population,
        households=households,
        emissions=emissions,
        price_pressure=pressure,
        non_paper_partition=non_paper,
        notes=tuple(notes),
    )


class SweepParam(enum.Enum):
    INCIDENCE = "incidence"
    MAX_CREDIT = "max_credit"
    PRICE_CAP = "price_cap"
    EV_FUEL_PRODUCTION = "ev_fuel_production"


class SweepDomainError(ValidationError):
    def __init__(self, index: int, value: float, reason: str):
        super().__init__(f"sweep value #{index} ({value!r}): {reason}")
        self.index = index
        self.value = value


def _whole_dollars(value: float) -> Optional[str]:
    if not math.isfinite(value) or value < 0:
        return "must be a finite amount >= 0"
    if value != int(value):
        return "must be a whole-dollar amount"
    return None


def _domain_error(param: SweepParam, value: float) -> Optional[str]:
    if isinstance(value, bool) or not isinstance(value, (int, float, Fraction)):
        return "not a number"
    if param is SweepParam.INCIDENCE:
        return None if 0 <= value <= 1 else "incidence must lie in [0, 1]"
    if param is SweepParam.EV_FUEL_PRODUCTION:
        return None if math.isfinite(value) and value >= 0 else "must be a finite intensity >= 0"
    return _whole_dollars(value)


def substitute(config: ScenarioConfig, param: SweepParam, value: float) -> ScenarioConfig:
    """``config`` with one sweep parameter replaced."""
    if param is SweepParam.INCIDENCE:
        return replace(config, incidence=value)
    if param is SweepParam.MAX_CREDIT:
        return replace(config, policy=replace(config.policy, max_credit=int(value)))
    if param is SweepParam.PRICE_CAP:
        return replace(config, policy=replace(config.policy, price_cap=int(value)))
    return replace(config, grids=(GridScenario(f"ev_fuel_production={value:g}", value),))


def sweep(
    config: ScenarioConfig,
    survey: BracketTable,
    param: SweepParam | str,
    values: Sequence[float],
    max_workers: Optional[int] = None,
) -> list[tuple[float, ScenarioReport]]:
    """One independent report per value, in input order."""
    param = SweepParam(param)
    for i, v in enumerate(values):
        reason = _domain_error(param, v)
        if reason:
            raise SweepDomainError(i, v, reason)
    configs = [substitute(config, param, v) for v in values]
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            reports = list(pool.map(lambda c: run_scenario(c, survey), configs))
    else:
        reports = [run_scenario(c, survey) for c in configs]
    return list(zip(values, reports))


def linspace(start: float, stop: float, steps: int) -> list[float]:
    """``steps`` evenly spaced values from start to stop inclusive, snapped to 12 decimals."""
    if steps < 1:
        raise ValidationError(f"steps must be >= 1, got {steps}")
    if steps == 1:
        return [float(start)]
    width = (Fraction(repr(float(stop))) - Fraction(repr(float(start)))) / (steps - 1)
    return [round(float(Fraction(repr(float(start))) + i * width), 12) for i in range(steps)]
