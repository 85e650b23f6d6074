"""Survey CSV and scenario config loading.

Survey CSV
    Header ``bracket_lo,bracket_hi,pathway,count`` (extra columns are
    ignored, so ``table1.csv`` reports can be read back with ``stage=``).
    ``bracket_hi`` may be ``inf``. Each pathway's rows must tile [0, inf);
    pathways that appear must share one partition; absent pathways count 0.

Config (TOML)
    Top-level ``rounding`` and ``incidence`` plus the sections
    ``[shift]``, ``[policy]``, ``[population]``, ``[utilization]``, ``[ice]``,
    ``[ev]``, ``[[grids]]`` and ``[[price_points]]``. See ``docs/config.md``.
    Unspecified keys keep their defaults; unknown keys are errors.
"""

from __future__ import annotations

import csv
import io
import math
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Mapping, Optional, Union

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .core import INF, PATHWAYS, BracketTable, Pathway, PriceBracket, RoundingPolicy, ValidationError
from .data import default_survey
from .eligibility import CreditPolicy, PopulationParams
from .emissions import GridScenario, UtilizationProfile, VehicleEmissionParams
from .scenario import PricePoint, ScenarioConfig

PathLike = Union[str, Path]

SURVEY_COLUMNS = ("bracket_lo", "bracket_hi", "pathway", "count")


class SurveyFormatError(ValidationError):
    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class ConfigError(ValidationError):
    pass


# ---------------------------------------------------------------------------
# Survey
# ---------------------------------------------------------------------------

def _parse_int(text: str, what: str, line: int) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise SurveyFormatError(f"{what} {text!r} is not an integer", line) from None


def parse_survey_csv(text: str, stage: Optional[str] = None) -> BracketTable:
    """Parse survey-shaped CSV text into a :class:`BracketTable`."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise SurveyFormatError("empty file", 1) from None
    missing = [c for c in SURVEY_COLUMNS if c not in header]
    if missing:
        raise SurveyFormatError(f"header lacks column(s) {missing}", 1)
    if stage is not None and "stage" not in header:
        raise SurveyFormatError("stage filter given but file has no 'stage' column", 1)
    col = {name: header.index(name) for name in header}

    rows: dict[Pathway, list[tuple[int, PriceBracket, int]]] = {}
    for line, rec in enumerate(reader, start=2):
        if not rec or all(not c.strip() for c in rec):
            continue
        if len(rec) != len(header):
            raise SurveyFormatError(f"expected {len(header)} fields, got {len(rec)}", line)
        if stage is not None and rec[col["stage"]].strip() != stage:
            continue
        lo = _parse_int(rec[col["bracket_lo"]], "bracket_lo", line)
        hi_text = rec[col["bracket_hi"]].strip()
        hi: float = INF if hi_text.lower() == "inf" else _parse_int(hi_text, "bracket_hi", line)
        try:
            pathway = Pathway(rec[col["pathway"]].strip())
        except ValueError:
            raise SurveyFormatError(
                f"unknown pathway {rec[col['pathway']]!r}; expected one of {[p.value for p in PATHWAYS]}", line
            ) from None
        count = _parse_int(rec[col["count"]], "count", line)
        if count < 0:
            raise SurveyFormatError(f"negative count {count}", line)
        try:
            bracket = PriceBracket(lo, hi)
        except ValidationError as exc:
            raise SurveyFormatError(str(exc), line) from None
        rows.setdefault(pathway, []).append((line, bracket, count))

    if not rows:
        raise SurveyFormatError("no data rows" + (f" for stage {stage!r}" if stage else ""))

    partitions = {}
    counts = {}
    for pathway, recs in rows.items():
        recs.sort(key=lambda r: (r[1].lo, r[1].hi))
        if recs[0][1].lo != 0:
            raise SurveyFormatError(f"{pathway.value}: gap [0, {recs[0][1].lo}) before line {recs[0][0]}")
        for (la, a, _), (lb, b, _) in zip(recs, recs[1:]):
            if b.lo < a.hi:
                raise SurveyFormatError(f"{pathway.value}: brackets {a} (line {la}) and {b} (line {lb}) overlap")
            if b.lo > a.hi:
                raise SurveyFormatError(
                    f"{pathway.value}: gap [{int(a.hi)}, {b.lo}) between lines {la} and {lb}"
                )
        last_line, last, _ = recs[-1]
        if not last.unbounded:
            raise SurveyFormatError(f"{pathway.value}: partition ends at {int(last.hi)} (line {last_line}); last bracket must be open-ended")
        partitions[pathway] = tuple(r[1] for r in recs)
        counts[pathway] = tuple(r[2] for r in recs)

    shared = next(iter(partitions.values()))
    for pathway, part in partitions.items():
        if part != shared:
            raise SurveyFormatError(f"{pathway.value} brackets differ from the other pathways' brackets")
    for pathway in PATHWAYS:
        counts.setdefault(pathway, (0,) * len(shared))
    return BracketTable.uniform(shared, counts)


def load_survey(path: Optional[PathLike] = None, stage: Optional[str] = None) -> BracketTable:
    """Survey table from a CSV file, or the embedded default when ``path`` is None."""
    if path is None:
        return default_survey()
    text = Path(path).read_text(encoding="utf-8")
    return parse_survey_csv(text, stage=stage)


def survey_csv(table: BracketTable, stage: Optional[str] = None) -> str:
    """Inverse of :func:`parse_survey_csv` (uniform tables only)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow((("stage",) if stage else ()) + SURVEY_COLUMNS)
    for p in PATHWAYS:
        for b, c in zip(table.partitions[p], table.counts[p]):
            w.writerow(((stage,) if stage else ()) + (b.lo, "inf" if b.unbounded else int(b.hi), p.value, c))
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Config
# ---------------------------------------------------------------------------

_INT, _FLOAT, _BOOL, _STR = "integer", "number", "boolean", "string"

_SECTIONS: dict[str, tuple[type, dict[str, str]]] = {
    "policy": (CreditPolicy, {
        "max_credit": _INT, "percentage_cap": _FLOAT, "price_cap": _INT, "min_vehicle_age_years": _INT,
        "income_limit_joint": _INT, "income_limit_single": _INT, "dealer_required": _BOOL,
    }),
    "population": (PopulationParams, {
        "total_households": _INT, "low_income_share": _FLOAT, "ownership_share_lo": _FLOAT,
        "ownership_share_hi": _FLOAT, "preowned_share": _FLOAT, "private_seller_share": _FLOAT,
    }),
    "utilization": (UtilizationProfile, {
        "lifetime_miles": _FLOAT, "lifetime_years": _INT, "owned_years": _INT,
        "miles_first_segment": _FLOAT, "miles_remaining": _FLOAT,
    }),
    "ice": (VehicleEmissionParams, {
        "manufacturing": _FLOAT, "fuel_production": _FLOAT, "fuel_usage": _FLOAT,
        "fuel_economy": _FLOAT, "energy_density": _FLOAT,
    }),
}
_SECTIONS["ev"] = _SECTIONS["ice"]

_TOP_LEVEL = {"rounding", "incidence", "shift", "grids", "price_points", *_SECTIONS}


def _check_type(where: str, value: Any, kind: str) -> Any:
    ok = {
        _INT: isinstance(value, int) and not isinstance(value, bool),
        _FLOAT: isinstance(value, (int, float)) and not isinstance(value, bool),
        _BOOL: isinstance(value, bool),
        _STR: isinstance(value, str),
    }[kind]
    if not ok:
        raise ConfigError(f"{where}: expected {kind}, got {type(value).__name__} {value!r}")
    if kind == _FLOAT and not math.isfinite(value):
        raise ConfigError(f"{where}: must be finite, got {value!r}")
    return value


def _check_keys(where: str, table: Mapping[str, Any], allowed: set[str]) -> None:
    unknown = sorted(set(table) - allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {unknown}; allowed: {sorted(allowed)}")


def _section(name: str, raw: Any, base: Any) -> Any:
    if not isinstance(raw, dict):
        raise ConfigError(f"[{name}] must be a table")
    _, schema = _SECTIONS[name]
    _check_keys(f"[{name}]", raw, set(schema))
    values = {k: _check_type(f"{name}.{k}", v, schema[k]) for k, v in raw.items()}
    return replace(base, **values)


def _array_of_tables(name: str, raw: Any, keys: dict[str, str]) -> list[dict[str, Any]]:
    if not isinstance(raw, list) or not all(isinstance(t, dict) for t in raw):
        raise ConfigError(f"{name} must be an array of tables ([[{name}]])")
    out = []
    for i, t in enumerate(raw):
        _check_keys(f"{name}[{i}]", t, set(keys))
        absent = sorted(set(keys) - set(t))
        if absent:
            raise ConfigError(f"{name}[{i}]: missing key(s) {absent}")
        out.append({k: _check_type(f"{name}[{i}].{k}", v, keys[k]) for k, v in t.items()})
    return out


def parse_config(data: Mapping[str, Any]) -> ScenarioConfig:
    """Build a :class:`ScenarioConfig` from already-parsed TOML data."""
    _check_keys("config", data, _TOP_LEVEL)
    cfg = ScenarioConfig()
    kw: dict[str, Any] = {}
    try:
        if "rounding" in data:
            mode = _check_type("rounding", data["rounding"], _STR)
            try:
                kw["rounding"] = RoundingPolicy(mode)
            except ValueError:
                raise ConfigError(
                    f"rounding: {mode!r} is not one of {[r.value for r in RoundingPolicy]}"
                ) from None
        if "incidence" in data:
            kw["incidence"] = _check_type("incidence", data["incidence"], _FLOAT)
        if "shift" in data:
            raw = data["shift"]
            if not isinstance(raw, dict):
                raise ConfigError("[shift] must be a table")
            _check_keys("[shift]", raw, {"eligible_pathways", "respect_percentage_cap"})
            shift = cfg.shift
            if "respect_percentage_cap" in raw:
                shift = replace(shift, respect_percentage_cap=_check_type(
                    "shift.respect_percentage_cap", raw["respect_percentage_cap"], _BOOL))
            if "eligible_pathways" in raw:
                names = raw["eligible_pathways"]
                if not isinstance(names, list):
                    raise ConfigError("shift.eligible_pathways: expected a list of pathway names")
                try:
                    pathways = frozenset(Pathway(_check_type("shift.eligible_pathways[]", n, _STR)) for n in names)
                except ValueError as exc:
                    raise ConfigError(f"shift.eligible_pathways: {exc}") from None
                shift = replace(shift, eligible_pathways=pathways)
            kw["shift"] = shift
        for name, attr in (("policy", "policy"), ("population", "population"), ("utilization", "util"),
                           ("ice", "ice"), ("ev", "ev")):
            if name in data:
                kw[attr] = _section(name, data[name], getattr(cfg, attr))
        if "grids" in data:
            grids = _array_of_tables("grids", data["grids"], {"label": _STR, "ev_fuel_production": _FLOAT})
            if not grids:
                raise ConfigError("grids: at least one grid scenario is required")
            kw["grids"] = tuple(GridScenario(**g) for g in grids)
        if "price_points" in data:
            pts = _array_of_tables("price_points", data["price_points"], {"year": _INT, "mean_used_price": _INT})
            kw["price_points"] = tuple(PricePoint(**p) for p in pts)
        return replace(cfg, **kw)
    except ConfigError:
        raise
    except ValidationError as exc:
        raise ConfigError(f"config value out of domain: {exc}") from exc


def load_config(path: Optional[PathLike] = None) -> ScenarioConfig:
    """Scenario config from a TOML file; None gives the all-defaults config."""
    if path is None:
        return ScenarioConfig()
    raw = Path(path).read_bytes()
    try:
        data = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return parse_config(data)


def config_fields() -> dict[str, list[str]]:
    """Accepted keys per config section (used by docs and tests)."""
    out = {name: list(schema) for name, (_, schema) in _SECTIONS.items()}
    out["shift"] = ["eligible_pathways", "respect_percentage_cap"]
    out["grids"] = ["label", "ev_fuel_production"]
    out["price_points"] = ["year", "mean_used_price"]
    out[""] = ["rounding", "incidence"]
    return out


__all__ = [
    "ConfigError",
    "SurveyFormatError",
    "config_fields",
    "load_config",
    "load_survey",
    "parse_config",
    "parse_survey_csv",
    "survey_csv",
]
