"""Render a :class:`ScenarioReport` as markdown tables, CSV files or SVG charts.

Every renderer returns ``{filename: text}``; :func:`emit_report` optionally
writes that mapping into a directory. Percentages carry exactly two
decimals, rounded half-up.
"""

from __future__ import annotations

import csv
import enum
import io
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .brackets import BracketShares
from .charts import bar_chart
from .core import PATHWAYS, BracketTable, Pathway, PriceBracket, RoundingPolicy, round_half_up
from .emissions import VehicleLifecycle
from .scenario import ScenarioReport, SweepParam


class ReportFormat(enum.Enum):
    MARKDOWN = "md"
    CSV = "csv"
    SVG = "svg"


def fmt_pct(rate: float) -> str:
    return f"{round_half_up(rate * 100, 2):.2f}"


def fmt_num(x: float, places: int = 2) -> str:
    return f"{round_half_up(x, places):.{places}f}"


def fmt_int(n: int) -> str:
    return f"{n:,}"


def _places(report: ScenarioReport) -> int:
    # paper-compat values are already rounded at display precision
    return 2 if report.rounding is RoundingPolicy.PAPER_COMPAT else 4


def _md_table(header: Sequence[str], rows: Iterable[Sequence[str]]) -> list[str]:
    out = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    out += ["| " + " | ".join(r) + " |" for r in rows]
    return out


def _csv(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Markdown
# ---------------------------------------------------------------------------

def _count_rows(table: BracketTable, pathways: Sequence[Pathway]) -> list[list[str]]:
    return [[p.label] + [str(c) for c in table.counts[p]] for p in pathways]


def _share_rows(table: BracketTable, shares: BracketShares) -> list[list[str]]:
    return [
        [p.label] + [f"{c} ({fmt_pct(s)}%)" for c, s in zip(table.counts[p], shares.shares[p])]
        for p in PATHWAYS
    ]


def table1_markdown(report: ScenarioReport) -> str:
    r = report.rebin
    spec = report.shift
    eligible = [p for p in PATHWAYS if p in spec.eligible_pathways]
    lines = [f"## Table 1. Respondents by price bracket and purchase pathway (credit ${spec.amount:,})", ""]

    lines += [f"### Step 1. {len(r.source.partition)} original price brackets (before credit)", ""]
    lines += _md_table(["Pathway"] + [b.label for b in r.source.partition], _count_rows(r.source, PATHWAYS))
    lines += ["", "### Step 2. Adjusted price brackets for credit-eligible pathways (after credit)", ""]
    for p in eligible:
        part = r.shifted.partitions[p]
        lines += _md_table(["Pathway"] + [b.label for b in part], _count_rows(r.shifted, [p]))
        lines.append("")
    n = len(r.merged_partition)
    merged_labels = [b.label for b in r.merged_partition]
    lines += [f"### Step 3. {n} merged price brackets (before credit)", ""]
    lines += _md_table(["Pathway"] + merged_labels, _share_rows(r.before, report.before_shares))
    lines += ["", f"### Step 4. {n} merged price brackets (after credit)", ""]
    lines += _md_table(["Pathway"] + merged_labels, _share_rows(r.after, report.after_shares))
    lines.append("")

    if report.before_real is not None and report.after_real is not None:
        lines += ["### Whole-sample (real) shares, percent", ""]
        rows = []
        for p in PATHWAYS:
            rows.append([p.label, "before"] + [fmt_pct(v) for v in report.before_real[p]])
            rows.append([p.label, "after"] + [fmt_pct(v) for v in report.after_real[p]])
        lines += _md_table(["Pathway", "Credit"] + merged_labels, rows)
        lines.append("")
    if report.deltas and n > 1:
        pair_labels = [f"{a.label} -> {b.label}" for a, b in report.deltas[PATHWAYS[0]].pairs]
        lines += ["### Real-share change between adjacent brackets, percentage points", ""]
        rows = []
        for p in PATHWAYS:
            d = report.deltas[p]
            rows.append([p.label, "before"] + [f"{round_half_up(v * 100, 2):+.2f}" for v in d.before])
            rows.append([p.label, "after"] + [f"{round_half_up(v * 100, 2):+.2f}" for v in d.after])
        lines += _md_table(["Pathway", "Credit"] + pair_labels, rows)
        lines.append("")
    if report.aggregates is not None:
        a = report.aggregates
        lines += ["### Pathway aggregates (original survey)", ""]
        lines += _md_table(
            ["Measure", "Percent"],
            [
                ["New from dealer", fmt_pct(a.new_share)],
                ["Preowned", fmt_pct(a.preowned_share)],
                ["Dealer share of preowned", fmt_pct(a.dealer_share_of_preowned)],
                ["Private-seller share of preowned", fmt_pct(a.private_share_of_preowned)],
            ],
        )
        lines.append("")
    lines += ["### Notes", ""]
    if report.empty:
        lines.append("- no data: the survey has no respondents, so whole-sample shares are omitted.")
    if report.non_paper_partition:
        lines.append("- NON-PAPER PARTITION: no interior cut point shared by original and shifted brackets.")
    lines += [f"- {n_}" for n_ in report.notes]
    lines.append(f"- rounding mode: {report.rounding.value}; incidence {report.config.incidence:g}")
    return "\n".join(lines) + "\n"


def table2_markdown(report: ScenarioReport) -> str:
    h = report.households
    pop = report.population
    rows = [
        ["Total number of households", fmt_int(pop.total_households), ""],
        ["Low-income households (under $40,000)", fmt_int(h.low_income_households), ""],
        ["Low-income households that own a vehicle", fmt_int(h.owners_lo), fmt_int(h.owners_hi)],
        ["... that purchased a preowned vehicle", fmt_int(h.preowned_lo), fmt_int(h.preowned_hi)],
        ["... from a private seller (ineligible)", fmt_int(h.ineligible_lo), fmt_int(h.ineligible_hi)],
    ]
    lines = ["## Table 2. Low-income household scaling", ""]
    lines += _md_table(["Households", "Lower bound", "Upper bound"], rows)
    lines += [
        "",
        f"Shares: low-income {float(pop.low_income_share):.4f}; vehicle ownership "
        f"{float(pop.ownership_share_lo):.4f}-{float(pop.ownership_share_hi):.4f}; preowned "
        f"{float(pop.preowned_share):.6g}; private seller {float(pop.private_seller_share):.6g} "
        f"(rounding: {report.rounding.value})",
    ]
    return "\n".join(lines) + "\n"


def _table3_rows(report: ScenarioReport) -> list[tuple[str, str, list[float]]]:
    """(label, unit, [ICE, EV per grid...]) rows shared by markdown and CSV."""
    em = report.emissions
    vehicles: list[VehicleLifecycle] = [em.ice] + [g.ev for g in em.grids]
    u = report.config.util

    def row(label: str, unit: str, get) -> tuple[str, str, list[float]]:
        return label, unit, [float(get(v)) for v in vehicles]

    return [
        row("Fuel production per-mile emissions", "gCO2e/mi", lambda v: v.per_mile.fuel_production),
        row("Fuel usage per-mile emissions", "gCO2e/mi", lambda v: v.per_mile.fuel_usage),
        row("Vehicle manufacturing per-mile emissions", "gCO2e/mi", lambda v: v.per_mile.manufacturing),
        row("Total per-mile emissions", "gCO2e/mi", lambda v: v.per_mile.total),
        row(f"Lifecycle emissions ({u.lifetime_miles:,.0f} mi, {u.lifetime_years} yr)", "tCO2e", lambda v: v.lifetime),
        row(f"First {u.owned_years} years ({u.miles_first_segment:,.0f} mi)", "tCO2e", lambda v: v.first_segment),
        row(f"Remaining {u.lifetime_years - u.owned_years} years ({u.miles_remaining:,.0f} mi)", "tCO2e", lambda v: v.remaining),
    ]


def table3_markdown(report: ScenarioReport) -> str:
    em = report.emissions
    places = _places(report)
    header = ["Quantity", "Unit", "ICE"] + [f"EV, {g.grid.label}" for g in em.grids]
    rows = [[label, unit] + [fmt_num(v, places) for v in vals] for label, unit, vals in _table3_rows(report)]
    rows.append(["Per-vehicle remaining lost lifecycle benefit", "tCO2e", ""]
                + [fmt_num(float(g.benefit.per_vehicle), places) for g in em.grids])
    rows.append(["Cumulative lost benefit, lower household bound", "MtCO2e", ""]
                + [fmt_num(float(g.benefit.cumulative_lo), 2) for g in em.grids])
    rows.append(["Cumulative lost benefit, upper household bound", "MtCO2e", ""]
                + [fmt_num(float(g.benefit.cumulative_hi), 2) for g in em.grids])
    lines = ["## Table 3. Lifecycle emissions and lost benefit", ""]
    lines += _md_table(header, rows)
    lines += [
        "",
        f"Households: {fmt_int(report.households.ineligible_lo)} (lower) / "
        f"{fmt_int(report.households.ineligible_hi)} (upper); EV fuel production per grid: "
        + ", ".join(f"{g.grid.label} = {g.grid.ev_fuel_production:g} gCO2e/MJ" for g in em.grids)
        + f" (rounding: {report.rounding.value})",
    ]
    return "\n".join(lines) + "\n"


def price_cap_markdown(report: ScenarioReport) -> str:
    pp = report.price_pressure
    lines = [f"## Used-vehicle price trend against the ${pp.cap:,} price cap", ""]
    lines += _md_table(
        ["Year", "Mean used price", "Fitted price", "Headroom under cap"],
        [[str(p.year), fmt_int(p.mean_used_price), fmt_num(pp.fitted(p.year)), f"{h:+,}"]
         for p, h in zip(pp.points, pp.per_point_headroom)],
    )
    first = "never" if pp.first_year_exceeding is None else str(pp.first_year_exceeding)
    lines += ["", f"OLS slope: {fmt_num(pp.fit_slope)} $/yr; first year the fitted price exceeds the cap: {first}"]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def table1_csv(report: ScenarioReport) -> str:
    """Long-format Table 1; ``stage`` in original / shifted / before / after.

    Filtering on one stage yields a survey-shaped table readable by
    :func:`usedev.inputs.parse_survey_csv`.
    """
    r = report.rebin
    header = ["stage", "bracket_lo", "bracket_hi", "pathway", "count", "bracket_share_pct", "real_share_pct"]
    rows: list[list[object]] = []

    def add(stage: str, table: BracketTable, pathways: Sequence[Pathway], shares=None, real=None) -> None:
        for p in pathways:
            for i, (b, c) in enumerate(zip(table.partitions[p], table.counts[p])):
                rows.append([
                    stage, b.lo, "inf" if b.unbounded else int(b.hi), p.value, c,
                    fmt_pct(shares.shares[p][i]) if shares else "",
                    fmt_pct(real[p][i]) if real else "",
                ])

    add("original", r.source, PATHWAYS)
    add("shifted", r.shifted, [p for p in PATHWAYS if p in report.shift.eligible_pathways])
    add("before", r.before, PATHWAYS, report.before_shares, report.before_real)
    add("after", r.after, PATHWAYS, report.after_shares, report.after_real)
    return _csv(header, rows)


def table2_csv(report: ScenarioReport) -> str:
    h = report.households
    return _csv(
        ["quantity", "lower_bound", "upper_bound"],
        [
            ["total_households", report.population.total_households, report.population.total_households],
            ["low_income_households", h.low_income_households, h.low_income_households],
            ["vehicle_owners", h.owners_lo, h.owners_hi],
            ["preowned_purchasers", h.preowned_lo, h.preowned_hi],
            ["private_seller_ineligible", h.ineligible_lo, h.ineligible_hi],
        ],
    )


def table3_csv(report: ScenarioReport) -> str:
    places = 2 if report.rounding is RoundingPolicy.PAPER_COMPAT else 6
    em = report.emissions
    names = ["ICE"] + [f"EV:{g.grid.label}" for g in em.grids]
    rows: list[list[object]] = []
    for label, unit, vals in _table3_rows(report):
        for vehicle, v in zip(names, vals):
            rows.append([vehicle, label, unit, fmt_num(v, places)])
    for g in em.grids:
        name = f"EV:{g.grid.label}"
        rows.append([name, "Per-vehicle remaining lost lifecycle benefit", "tCO2e", fmt_num(float(g.benefit.per_vehicle), places)])
        rows.append([name, "Cumulative lost benefit, lower household bound", "MtCO2e", fmt_num(float(g.benefit.cumulative_lo), places)])
        rows.append([name, "Cumulative lost benefit, upper household bound", "MtCO2e", fmt_num(float(g.benefit.cumulative_hi), places)])
    return _csv(["vehicle", "quantity", "unit", "value"], rows)


def price_cap_csv(report: ScenarioReport) -> str:
    pp = report.price_pressure
    first = "" if pp.first_year_exceeding is None else pp.first_year_exceeding
    return _csv(
        ["year", "mean_used_price", "fitted_price", "headroom", "cap", "fit_slope", "first_year_exceeding"],
        [[p.year, p.mean_used_price, fmt_num(pp.fitted(p.year)), h, pp.cap, fmt_num(pp.fit_slope), first]
         for p, h in zip(pp.points, pp.per_point_headroom)],
    )


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

def _bracket_labels(partition: Sequence[PriceBracket]) -> list[str]:
    return [b.label for b in partition]


def fig1a_svg(report: ScenarioReport) -> str:
    src = report.rebin.source
    total = src.total
    title = "Distribution of respondents by vehicle purchase method"
    if total == 0:
        return bar_chart(title, [], [], no_data=True)
    values = [100 * src.pathway_total(p) / total for p in PATHWAYS]
    return bar_chart(title, [p.label for p in PATHWAYS], [("Share of respondents", values)])


def fig1b_svg(report: ScenarioReport) -> str:
    r = report.rebin
    title = "Percentage of all respondents by price range"
    total = r.before.total
    if total == 0:
        return bar_chart(title, [], [], no_data=True)
    series = [
        ("Before credit", [100 * t / total for t in r.before.bracket_totals()]),
        ("After credit", [100 * t / total for t in r.after.bracket_totals()]),
    ]
    return bar_chart(title, _bracket_labels(r.merged_partition), series)


def fig1c_svg(report: ScenarioReport) -> str:
    title = "Real percentage of respondents by price range, pathway and credit availability"
    if report.before_real is None or report.after_real is None:
        return bar_chart(title, [], [], no_data=True)
    series = []
    for p in PATHWAYS:
        series.append((f"{p.label}, before", [100 * v for v in report.before_real[p]]))
        series.append((f"{p.label}, after", [100 * v for v in report.after_real[p]]))
    return bar_chart(title, _bracket_labels(report.rebin.merged_partition), series)


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

SECTIONS = ("table1", "table2", "table3", "price_cap")

_MARKDOWN = {"table1": table1_markdown, "table2": table2_markdown, "table3": table3_markdown, "price_cap": price_cap_markdown}
_CSV = {"table1": table1_csv, "table2": table2_csv, "table3": table3_csv, "price_cap": price_cap_csv}
_SVG = {"fig1a": fig1a_svg, "fig1b": fig1b_svg, "fig1c": fig1c_svg}


def render(report: ScenarioReport, fmt: Union[ReportFormat, str], sections: Optional[Sequence[str]] = None) -> dict[str, str]:
    """Rendered files as ``{filename: text}``.

    ``sections`` restricts tables (``table1``..``table3``, ``price_cap``); SVG
    output is always the three figures, which all derive from Table 1.
    """
    fmt = ReportFormat(fmt)
    if fmt is ReportFormat.SVG:
        return {f"{name}.svg": fn(report) for name, fn in _SVG.items()}
    chosen = SECTIONS if sections is None else tuple(sections)
    table = _MARKDOWN if fmt is ReportFormat.MARKDOWN else _CSV
    return {f"{name}.{fmt.value}": table[name](report) for name in chosen}


def emit_report(
    report: ScenarioReport,
    fmt: Union[ReportFormat, str],
    destination: Optional[Union[str, Path]] = None,
    sections: Optional[Sequence[str]] = None,
) -> dict[str, str]:
    """Render ``report`` and, when ``destination`` is a directory, write the files there."""
    files = render(report, fmt, sections)
    if destination is not None:
        out = Path(destination)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            (out / name).write_text(text, encoding="utf-8", newline="\n")
    return files


def join_for_stdout(files: dict[str, str], fmt: Union[ReportFormat, str]) -> str:
    fmt = ReportFormat(fmt)
    if fmt is ReportFormat.MARKDOWN:
        return "\n".join(files.values())
    if len(files) == 1:
        return next(iter(files.values()))
    marker = "<!-- {} -->\n" if fmt is ReportFormat.SVG else "# {}\n"
    return "\n".join(marker.format(name) + text for name, text in files.items())


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

def sweep_rows(param: Union[SweepParam, str], results: Sequence[tuple[float, ScenarioReport]]) -> tuple[list[str], list[list[object]]]:
    param = SweepParam(param)
    n_grids = max((len(r.emissions.grids) for _, r in results), default=0)
    header = [
        "param", "value", "effective_credit", "merged_cuts", "non_paper_partition",
        "used_dealer_before", "used_dealer_after", "ineligible_lo", "ineligible_hi",
        "price_cap", "first_year_exceeding_cap",
    ]
    for i in range(1, n_grids + 1):
        header += [f"grid{i}_ev_fuel_production", f"grid{i}_per_vehicle_t",
                   f"grid{i}_cumulative_lo_mt", f"grid{i}_cumulative_hi_mt"]
    rows = []
    for value, r in results:
        places = _places(r)
        cuts = "|".join(str(b.lo) for b in r.rebin.merged_partition)
        pp = r.price_pressure
        row: list[object] = [
            param.value, f"{value:g}", r.shift.amount, cuts, str(r.non_paper_partition).lower(),
            r.rebin.before.pathway_total(Pathway.USED_DEALER), r.rebin.after.pathway_total(Pathway.USED_DEALER),
            r.households.ineligible_lo, r.households.ineligible_hi,
            pp.cap, "" if pp.first_year_exceeding is None else pp.first_year_exceeding,
        ]
        for g in r.emissions.grids:
            row += [f"{g.grid.ev_fuel_production:g}", fmt_num(float(g.benefit.per_vehicle), places),
                    fmt_num(float(g.benefit.cumulative_lo), places), fmt_num(float(g.benefit.cumulative_hi), places)]
        rows.append(row)
    return header, rows


def sweep_csv(param: Union[SweepParam, str], results: Sequence[tuple[float, ScenarioReport]]) -> str:
    header, rows = sweep_rows(param, results)
    return _csv(header, rows)


def sweep_markdown(param: Union[SweepParam, str], results: Sequence[tuple[float, ScenarioReport]]) -> str:
    header, rows = sweep_rows(param, results)
    return "\n".join([f"## Sweep over {SweepParam(param).value}", ""] + _md_table(header, [[str(c).replace("|", "\\|") for c in r] for r in rows])) + "\n"


__all__ = [
    "ReportFormat",
    "emit_report",
    "render",
    "sweep_csv",
    "sweep_markdown",
]
