"""Embedded default dataset: low-income (<$40k) respondents by price and pathway.

738 respondents in 11 price brackets, after dropping households that could
not recall a price or acquired the vehicle without payment.
"""

from __future__ import annotations

from .core import INF, BracketTable, Pathway, partition_from_cuts

SURVEY_CUTS = (0, 500, 1000, 1500, 2000, 4000, 6000, 8000, 10000, 15000, 20000, INF)

SURVEY_COUNTS = {
    Pathway.NEW_DEALER: (0, 0, 1, 0, 2, 1, 1, 0, 13, 39, 106),
    Pathway.USED_PRIVATE: (15, 18, 30, 18, 56, 40, 12, 8, 9, 8, 2),
    Pathway.USED_DEALER: (0, 1, 3, 11, 33, 33, 27, 28, 95, 80, 48),
}

# Mean used-vehicle prices, inflation adjusted (year, dollars).
USED_PRICE_POINTS = ((2019, 21493), (2021, 25891), (2023, 26700))


def default_survey() -> BracketTable:
    return BracketTable.uniform(partition_from_cuts(SURVEY_CUTS), SURVEY_COUNTS)
