"""Used clean-vehicle credit qualification and household scaling."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Union

from .core import (
    BracketTable,
    EmptyTableError,
    Pathway,
    Real,
    RoundingPolicy,
    ValidationError,
    as_fraction,
    round_count,
)

Share = Union[float, Fraction]


@dataclass(frozen=True)
class CreditPolicy:
    max_credit: int = 4000
    percentage_cap: float = 0.30
    price_cap: int = 25000
    min_vehicle_age_years: int = 2
    income_limit_joint: int = 150000
    income_limit_single: int = 75000
    dealer_required: bool = True

    def __post_init__(self) -> None:
        for name in ("max_credit", "price_cap", "min_vehicle_age_years", "income_limit_joint", "income_limit_single"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not 0 <= self.percentage_cap <= 1:
            raise ValidationError(f"percentage_cap must lie in [0, 1], got {self.percentage_cap}")


class Filing(enum.Enum):
    JOINT = "joint"
    SINGLE = "single"


class Ineligibility(str, enum.Enum):
    PRICE_CAP = "price cap"
    NOT_DEALER = "not a dealer purchase"
    VEHICLE_AGE = "vehicle too new"
    INCOME = "income limit"


@dataclass(frozen=True)
class PurchaseProfile:
    price: int
    pathway: Pathway
    vehicle_age_years: int
    buyer_income: int
    filing: Filing = Filing.SINGLE

    def __post_init__(self) -> None:
        if self.price < 0:
            raise ValidationError(f"price must be >= 0, got {self.price}")
        if self.vehicle_age_years < 0:
            raise ValidationError(f"vehicle age must be >= 0, got {self.vehicle_age_years}")


@dataclass(frozen=True)
class CreditDecision:
    amount: int
    reasons: tuple[Ineligibility, ...] = ()

    @property
    def eligible(self) -> bool:
        return not self.reasons


def credit_amount(policy: CreditPolicy, purchase: PurchaseProfile) -> CreditDecision:
    """Credit a purchase qualifies for, or 0 with every failed rule listed."""
    reasons = []
    if purchase.price >= policy.price_cap:
        reasons.append(Ineligibility.PRICE_CAP)
    if policy.dealer_required and purchase.pathway is not Pathway.USED_DEALER:
        reasons.append(Ineligibility.NOT_DEALER)
    if purchase.vehicle_age_years < policy.min_vehicle_age_years:
        reasons.append(Ineligibility.VEHICLE_AGE)
    limit = policy.income_limit_joint if purchase.filing is Filing.JOINT else policy.income_limit_single
    if purchase.buyer_income >= limit:
        reasons.append(Ineligibility.INCOME)
    if reasons:
        return CreditDecision(0, tuple(reasons))
    cap = math.floor(as_fraction(policy.percentage_cap) * as_fraction(purchase.price))
    return CreditDecision(min(policy.max_credit, cap))


@dataclass(frozen=True)
class PopulationParams:
    """National household totals and the chain of shares applied to them.

    Share defaults are 4-decimal rounded values; the two survey shares
    can be replaced by exact fractions with :meth:`with_survey_shares`.
    """

    total_households: int = 125_736_353
    low_income_share: Share = 0.267
    ownership_share_lo: Share = 0.8092
    ownership_share_hi: Share = 0.8575
    preowned_share: Share = 0.7791
    private_seller_share: Share = 0.3757

    def __post_init__(self) -> None:
        if self.total_households < 0:
            raise ValidationError(f"total_households must be >= 0, got {self.total_households}")
        for name in ("low_income_share", "ownership_share_lo", "ownership_share_hi", "preowned_share", "private_seller_share"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise ValidationError(f"{name} must lie in [0, 1], got {v}")
        if self.ownership_share_lo > self.ownership_share_hi:
            raise ValidationError("ownership_share_lo must not exceed ownership_share_hi")

    def with_survey_shares(self, table: BracketTable) -> "PopulationParams":
        private = table.pathway_total(Pathway.USED_PRIVATE)
        preowned = private + table.pathway_total(Pathway.USED_DEALER)
        if preowned == 0:
            raise EmptyTableError("survey has no preowned respondents")
        return replace(
            self,
            preowned_share=Fraction(preowned, table.total),
            private_seller_share=Fraction(private, preowned),
        )


@dataclass(frozen=True)
class HouseholdEstimate:
    low_income_households: int
    owners_lo: int
    owners_hi: int
    preowned_lo: int
    preowned_hi: int
    ineligible_lo: int
    ineligible_hi: int


def scale_households(params: PopulationParams, rounding: RoundingPolicy = RoundingPolicy.PAPER_COMPAT) -> HouseholdEstimate:
    """Chain national households down to private-seller (ineligible) owners.

    PAPER_COMPAT rounds half-up to a whole household after every
    multiplication; FULL_PRECISION carries exact products and rounds only
    what it reports.
    """
    staged = rounding is RoundingPolicy.PAPER_COMPAT

    def mul(x: Real, share: Share) -> Fraction:
        y = as_fraction(x) * as_fraction(share)
        return Fraction(round_count(y)) if staged else y

    low = mul(params.total_households, params.low_income_share)
    owners = (mul(low, params.ownership_share_lo), mul(low, params.ownership_share_hi))
    preowned = tuple(mul(o, params.preowned_share) for o in owners)
    ineligible = tuple(mul(p, params.private_seller_share) for p in preowned)
    return HouseholdEstimate(
        low_income_households=round_count(low),
        owners_lo=round_count(owners[0]),
        owners_hi=round_count(owners[1]),
        preowned_lo=round_count(preowned[0]),
        preowned_hi=round_count(preowned[1]),
        ineligible_lo=round_count(ineligible[0]),
        ineligible_hi=round_count(ineligible[1]),
    )
