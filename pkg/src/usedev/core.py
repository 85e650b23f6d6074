"""Shared value types: price brackets, pathways, bracket tables, units and rounding."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal, localcontext
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

Real = Union[int, float, Fraction, Decimal]

INF = math.inf


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class ValidationError(ValueError):
    """Base class for every input/domain validation failure."""


class PartitionError(ValidationError):
    pass


class IncompatiblePartitionsError(ValidationError):
    pass


class StraddleError(ValidationError):
    pass


class EmptyTableError(ValidationError):
    pass


class UnitMismatchError(ValidationError):
    pass


# ---------------------------------------------------------------------------
# Rounding
# ---------------------------------------------------------------------------

class RoundingPolicy(enum.Enum):
    FULL_PRECISION = "full_precision"
    PAPER_COMPAT = "paper_compat"


def round_half_up(x: Real, places: int = 0) -> float:
    """Round ``x`` half away from zero at ``places`` decimals.

    Floats are interpreted through their shortest decimal repr, so
    ``round_half_up(2.675, 2) == 2.68`` (the builtin gives 2.67).
    Fractions are rounded exactly.
    """
    if places < 0:
        raise ValueError(f"places must be >= 0, got {places}")
    if isinstance(x, Fraction):
        scaled = abs(x) * 10**places
        n = math.floor(scaled + Fraction(1, 2))
        return math.copysign(n / 10**places, x) if n else 0.0
    if isinstance(x, float) and not math.isfinite(x):
        return x
    d = x if isinstance(x, Decimal) else Decimal(repr(x) if isinstance(x, float) else x)
    with localcontext() as ctx:
        ctx.prec = max(28, d.adjusted() + places + 2)
        q = d.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP)
    return float(q)


def round_count(x: Real) -> int:
    """Half-up rounding to a whole number (households, dollars)."""
    return int(round_half_up(x, 0))


def as_fraction(x: Real) -> Fraction:
    """Exact rational value of ``x``; floats go through their decimal repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def pct(rate: float, places: int = 2) -> float:
    """A rate in [0, 1] as a half-up rounded percentage."""
    return round_half_up(rate * 100, places)


# ---------------------------------------------------------------------------
# Units
# ---------------------------------------------------------------------------

G_PER_MILE = "gCO2e/mi"
G_PER_MJ = "gCO2e/MJ"
TONNES = "tCO2e"
MEGATONNES = "MtCO2e"
USD = "USD"


@dataclass(frozen=True)
class Quantity:
    """A real value tagged with a unit label.

    Addition, subtraction and ordering require matching units; scaling by a
    plain number keeps the unit.
    """

    value: float
    unit: str

    def _check(self, other: object) -> "Quantity":
        if not isinstance(other, Quantity):
            raise UnitMismatchError(f"cannot combine {self.unit} with unitless {other!r}")
        if other.unit != self.unit:
            raise UnitMismatchError(f"cannot combine {self.unit} with {other.unit}")
        return other

    def __add__(self, other: "Quantity") -> "Quantity":
        return Quantity(self.value + self._check(other).value, self.unit)

    def __sub__(self, other: "Quantity") -> "Quantity":
        return Quantity(self.value - self._check(other).value, self.unit)

    def __mul__(self, k: Real) -> "Quantity":
        if isinstance(k, Quantity):
            raise UnitMismatchError("quantity * quantity is not supported; convert explicitly")
        return Quantity(self.value * float(k), self.unit)

    __rmul__ = __mul__

    def __truediv__(self, k: Real) -> "Quantity":
        if isinstance(k, Quantity):
            raise UnitMismatchError("quantity / quantity is not supported; convert explicitly")
        return Quantity(self.value / float(k), self.unit)

    def __neg__(self) -> "Quantity":
        return Quantity(-self.value, self.unit)

    def __lt__(self, other: "Quantity") -> bool:
        return self.value < self._check(other).value

    def __le__(self, other: "Quantity") -> bool:
        return self.value <= self._check(other).value

    def __gt__(self, other: "Quantity") -> bool:
        return self.value > self._check(other).value

    def __ge__(self, other: "Quantity") -> bool:
        return self.value >= self._check(other).value

    def __float__(self) -> float:
        return float(self.value)

    def rounded(self, places: int) -> "Quantity":
        return Quantity(round_half_up(self.value, places), self.unit)

    def expect(self, unit: str) -> float:
        if self.unit != unit:
            raise UnitMismatchError(f"expected {unit}, got {self.unit}")
        return self.value


# ---------------------------------------------------------------------------
# Brackets and pathways
# ---------------------------------------------------------------------------

class Pathway(enum.Enum):
    NEW_DEALER = "new_dealer"
    USED_PRIVATE = "used_private"
    USED_DEALER = "used_dealer"

    @property
    def label(self) -> str:
        return _PATHWAY_LABELS[self]

    @property
    def preowned(self) -> bool:
        return self is not Pathway.NEW_DEALER


_PATHWAY_LABELS = {
    Pathway.NEW_DEALER: "New, commercial dealer",
    Pathway.USED_PRIVATE: "Preowned, private seller",
    Pathway.USED_DEALER: "Preowned, commercial dealer",
}

PATHWAYS: tuple[Pathway, ...] = tuple(Pathway)


@dataclass(frozen=True, order=True)
class PriceBracket:
    """Half-open dollar interval ``[lo, hi)``; ``hi`` may be ``INF``."""

    lo: int
    hi: float

    def __post_init__(self) -> None:
        if self.lo < 0:
            raise PartitionError(f"bracket lower bound must be >= 0, got {self.lo}")
        if not self.hi > self.lo:
            raise PartitionError(f"bracket [{self.lo}, {self.hi}) is empty")

    @property
    def unbounded(self) -> bool:
        return self.hi == INF

    def __contains__(self, price: Real) -> bool:
        return self.lo <= price < self.hi

    def within(self, other: "PriceBracket") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    @property
    def label(self) -> str:
        if self.unbounded:
            return f"${self.lo:,} or more"
        hi = int(self.hi)
        if self.lo == 0:
            return f"Less than ${hi:,}"
        return f"${self.lo:,} to ${hi - 1:,}"

    def __str__(self) -> str:
        hi = "inf" if self.unbounded else f"{int(self.hi)}"
        return f"[{self.lo}, {hi})"


Partition = tuple[PriceBracket, ...]


def validate_partition(brackets: Sequence[PriceBracket]) -> Partition:
    """Check that ``brackets`` are ordered, gapless and cover ``[0, inf)``."""
    if not brackets:
        raise PartitionError("partition is empty")
    if brackets[0].lo != 0:
        raise PartitionError(f"partition starts at {brackets[0].lo}, not 0 (gap [0, {brackets[0].lo}))")
    for a, b in zip(brackets, brackets[1:]):
        if b.lo < a.hi:
            raise PartitionError(f"brackets {a} and {b} overlap")
        if b.lo > a.hi:
            raise PartitionError(f"gap [{int(a.hi)}, {b.lo}) between {a} and {b}")
    if not brackets[-1].unbounded:
        raise PartitionError(f"partition ends at {int(brackets[-1].hi)}, not unbounded")
    return tuple(brackets)


def partition_from_cuts(cuts: Iterable[Real]) -> Partition:
    """Build a partition from its boundary set (0 and INF are added if missing)."""
    points = sorted(set(cuts) | {0, INF})
    return validate_partition(
        [PriceBracket(int(lo), hi if hi == INF else int(hi)) for lo, hi in zip(points, points[1:])]
    )


def boundaries(partition: Sequence[PriceBracket]) -> tuple[float, ...]:
    return tuple(b.lo for b in partition) + (partition[-1].hi,)


# ---------------------------------------------------------------------------
# Bracket tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BracketTable:
    """Integer respondent counts per (price bracket, pathway).

    Each pathway carries its own partition so that a shifted column can sit
    next to unshifted ones. Survey and rebinned tables use one shared
    partition, exposed as :attr:`partition`.
    """

    partitions: Mapping[Pathway, Partition]
    counts: Mapping[Pathway, tuple[int, ...]]

    def __post_init__(self) -> None:
        parts = {}
        counts = {}
        for p in PATHWAYS:
            if p not in self.partitions or p not in self.counts:
                raise ValidationError(f"missing pathway {p.value}")
            part = validate_partition(tuple(self.partitions[p]))
            col = tuple(self.counts[p])
            if len(col) != len(part):
                raise ValidationError(
                    f"{p.value}: {len(col)} counts for {len(part)} brackets"
                )
            for c in col:
                if isinstance(c, bool) or int(c) != c:
                    raise ValidationError(f"{p.value}: count {c!r} is not an integer")
                if c < 0:
                    raise ValidationError(f"{p.value}: negative count {c}")
            parts[p] = part
            counts[p] = tuple(int(c) for c in col)
        object.__setattr__(self, "partitions", MappingProxyType(parts))
        object.__setattr__(self, "counts", MappingProxyType(counts))

    @classmethod
    def uniform(cls, partition: Sequence[PriceBracket], counts: Mapping[Pathway, Sequence[int]]) -> "BracketTable":
        part = tuple(partition)
        return cls({p: part for p in PATHWAYS}, {p: tuple(counts[p]) for p in PATHWAYS})

    @property
    def is_uniform(self) -> bool:
        first = self.partitions[PATHWAYS[0]]
        return all(self.partitions[p] == first for p in PATHWAYS)

    @property
    def partition(self) -> Partition:
        if not self.is_uniform:
            raise ValidationError("pathway partitions differ; table has no shared partition")
        return self.partitions[PATHWAYS[0]]

    def column(self, pathway: Pathway) -> tuple[int, ...]:
        return self.counts[pathway]

    def pathway_total(self, pathway: Pathway) -> int:
        return sum(self.counts[pathway])

    @property
    def total(self) -> int:
        return sum(self.pathway_total(p) for p in PATHWAYS)

    def bracket_totals(self) -> tuple[int, ...]:
        self.partition
        return tuple(sum(row) for row in zip(*(self.counts[p] for p in PATHWAYS)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BracketTable):
            return NotImplemented
        return dict(self.partitions) == dict(other.partitions) and dict(self.counts) == dict(other.counts)

    def __hash__(self) -> int:
        return hash((tuple(self.partitions[p] for p in PATHWAYS), tuple(self.counts[p] for p in PATHWAYS)))

    def __repr__(self) -> str:
        cols = ", ".join(f"{p.value}={list(self.counts[p])}" for p in PATHWAYS)
        if self.is_uniform:
            return f"BracketTable(partition={[str(b) for b in self.partition]}, {cols})"
        return f"BracketTable(<per-pathway partitions>, {cols})"
