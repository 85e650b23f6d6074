"""Purchase-pathway shifts under a purchase credit.

Credit-eligible columns of a survey table are moved up by the credit amount,
both tables are rebinned onto the cut points the two partitions share, and
within-bracket and whole-sample shares are compared before and after.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .core import (
    INF,
    PATHWAYS,
    BracketTable,
    EmptyTableError,
    IncompatiblePartitionsError,
    Partition,
    Pathway,
    PriceBracket,
    StraddleError,
    ValidationError,
    as_fraction,
    boundaries,
    partition_from_cuts,
)


@dataclass(frozen=True)
class ShiftSpec:
    """How a credit moves eligible respondents up the price scale.

    With ``respect_percentage_cap`` each bracket endpoint moves by
    ``min(amount, floor(percentage_cap * endpoint))`` instead of ``amount``.
    """

    amount: int = 4000
    eligible_pathways: frozenset[Pathway] = frozenset({Pathway.USED_DEALER})
    respect_percentage_cap: bool = False
    percentage_cap: float = 0.30

    def __post_init__(self) -> None:
        if isinstance(self.amount, bool) or int(self.amount) != self.amount or self.amount < 0:
            raise ValidationError(f"shift amount must be a non-negative whole dollar amount, got {self.amount!r}")
        object.__setattr__(self, "amount", int(self.amount))
        object.__setattr__(self, "eligible_pathways", frozenset(self.eligible_pathways))
        if not self.eligible_pathways:
            raise ValidationError("eligible_pathways must not be empty")
        if not 0 <= self.percentage_cap <= 1:
            raise ValidationError(f"percentage_cap must lie in [0, 1], got {self.percentage_cap}")

    def shift_endpoint(self, x: float) -> float:
        if x == INF:
            return INF
        if not self.respect_percentage_cap:
            return x + self.amount
        return x + min(self.amount, math.floor(as_fraction(self.percentage_cap) * x))


@dataclass(frozen=True)
class RebinResult:
    merged_partition: Partition
    before: BracketTable
    after: BracketTable
    source: BracketTable = field(repr=False)
    shifted: BracketTable = field(repr=False)
    spec: ShiftSpec = field(default_factory=ShiftSpec)


@dataclass(frozen=True)
class BracketShares:
    """Within-bracket pathway shares; empty brackets are flagged and report 0."""

    partition: Partition
    shares: Mapping[Pathway, tuple[float, ...]]
    empty: tuple[bool, ...]


@dataclass(frozen=True)
class PathwayAggregates:
    new_share: float
    preowned_share: float
    dealer_share_of_preowned: float
    private_share_of_preowned: float


@dataclass(frozen=True)
class AdjacentDeltas:
    """Real-share change between consecutive merged brackets for one pathway."""

    pathway: Pathway
    pairs: tuple[tuple[PriceBracket, PriceBracket], ...]
    before: tuple[float, ...]
    after: tuple[float, ...]


def _shift_partition(partition: Partition, spec: ShiftSpec) -> Partition:
    cuts = [spec.shift_endpoint(b) for b in boundaries(partition)]
    # lowest shifted bracket reaches down to $0
    cuts[0] = 0
    return partition_from_cuts(cuts)


def shift_brackets(table: BracketTable, spec: ShiftSpec) -> BracketTable:
    """Move eligible pathways' bracket bounds up by the credit; counts ride along."""
    partitions = dict(table.partitions)
    for p in spec.eligible_pathways:
        partitions[p] = _shift_partition(table.partitions[p], spec)
    return BracketTable(partitions, dict(table.counts))


BoundarySet = Union[Sequence[PriceBracket], Sequence[float]]


def _as_boundaries(p: BoundarySet) -> set[float]:
    if p and isinstance(p[0], PriceBracket):
        return set(boundaries(p))
    return set(p) | {0, INF}


def common_boundaries(p1: BoundarySet, p2: BoundarySet, min_finite_cuts: int = 0) -> tuple[float, ...]:
    """Sorted boundaries shared by two partitions (always includes 0 and INF).

    ``min_finite_cuts`` counts finite boundaries, 0 included; fewer shared
    ones raise :class:`IncompatiblePartitionsError`.
    """
    shared = sorted(_as_boundaries(p1) & _as_boundaries(p2))
    finite = [c for c in shared if c != INF]
    if len(finite) < min_finite_cuts:
        raise IncompatiblePartitionsError(
            f"partitions share only {finite + [INF]}; {min_finite_cuts} finite cut(s) requested"
        )
    return tuple(shared)


def _merge_column(counts: Sequence[int], source: Partition, target: Partition, pathway: Pathway) -> tuple[int, ...]:
    out = [0] * len(target)
    j = 0
    for bracket, n in zip(source, counts):
        while j < len(target) and target[j].hi <= bracket.lo:
            j += 1
        if j == len(target) or not bracket.within(target[j]):
            raise StraddleError(
                f"{pathway.value} bracket {bracket} straddles a merged boundary of "
                f"{[str(b) for b in target]}"
            )
        out[j] += n
    return tuple(out)


def rebin_table(table: BracketTable, merged: Partition) -> BracketTable:
    """Sum every column of ``table`` into the brackets of ``merged``."""
    return BracketTable.uniform(
        merged,
        {p: _merge_column(table.counts[p], table.partitions[p], merged, p) for p in PATHWAYS},
    )


def rebin(before_table: BracketTable, spec: ShiftSpec, merged: BoundarySet | None = None) -> RebinResult:
    """Rebin the survey before and after the credit onto a common partition.

    ``merged`` defaults to the boundaries shared by the original partition
    and the shifted one.
    """
    source_partition = before_table.partition
    shifted = shift_brackets(before_table, spec)
    if merged is None:
        cuts: BoundarySet = boundaries(source_partition)
        for p in sorted(spec.eligible_pathways, key=PATHWAYS.index):
            cuts = common_boundaries(cuts, shifted.partitions[p])
        merged_partition = partition_from_cuts(cuts)
    elif merged and isinstance(merged[0], PriceBracket):
        merged_partition = tuple(merged)
    else:
        merged_partition = partition_from_cuts(merged)
    return RebinResult(
        merged_partition=merged_partition,
        before=rebin_table(before_table, merged_partition),
        after=rebin_table(shifted, merged_partition),
        source=before_table,
        shifted=shifted,
        spec=spec,
    )


def bracket_shares(table: BracketTable) -> BracketShares:
    totals = table.bracket_totals()
    shares = {
        p: tuple(float(Fraction(c, t)) if t else 0.0 for c, t in zip(table.counts[p], totals))
        for p in PATHWAYS
    }
    return BracketShares(table.partition, shares, tuple(t == 0 for t in totals))


def real_shares(table: BracketTable) -> dict[Pathway, tuple[float, ...]]:
    """Each cell as a fraction of the whole sample.

    Equivalent to (bracket share of the sample) x (pathway share within the
    bracket).
    """
    total = table.total
    if total == 0:
        raise EmptyTableError("real shares are undefined for an empty table")
    table.partition
    return {p: tuple(float(Fraction(c, total)) for c in table.counts[p]) for p in PATHWAYS}


def pathway_aggregates(table: BracketTable) -> PathwayAggregates:
    total = table.total
    if total == 0:
        raise EmptyTableError("pathway aggregates are undefined for an empty table")
    private = table.pathway_total(Pathway.USED_PRIVATE)
    dealer = table.pathway_total(Pathway.USED_DEALER)
    preowned = private + dealer
    if preowned == 0:
        raise EmptyTableError("no preowned respondents; dealer/private shares are undefined")
    return PathwayAggregates(
        new_share=float(Fraction(total - preowned, total)),
        preowned_share=float(Fraction(preowned, total)),
        dealer_share_of_preowned=float(Fraction(dealer, preowned)),
        private_share_of_preowned=float(Fraction(private, preowned)),
    )


def adjacent_deltas(result: RebinResult, pathway: Pathway) -> AdjacentDeltas:
    before = real_shares(result.before)[pathway]
    after = real_shares(result.after)[pathway]
    part = result.merged_partition
    return AdjacentDeltas(
        pathway=pathway,
        pairs=tuple(zip(part, part[1:])),
        before=tuple(b - a for a, b in zip(before, before[1:])),
        after=tuple(b - a for a, b in zip(after, after[1:])),
    )
