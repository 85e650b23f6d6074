"""Command-line interface.

Exit codes: 0 success, 1 validation or usage error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from . import report as rpt
from .core import Pathway, RoundingPolicy, ValidationError
from .eligibility import Filing, PurchaseProfile, credit_amount
from .inputs import load_config, load_survey
from .scenario import PricePoint, ScenarioConfig, SweepParam, linspace, run_scenario, sweep

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2, which is reserved for I/O
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags appear before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    common.add_argument("--config", metavar="PATH", default=S, help="scenario config (TOML)")
    common.add_argument("--survey", metavar="PATH", default=S, help="survey CSV (default: embedded data)")
    common.add_argument("--format", choices=[f.value for f in rpt.ReportFormat], default=S, help="output format")
    common.add_argument("--paper-compat", dest="rounding", action="store_const", const=RoundingPolicy.PAPER_COMPAT,
                        default=S, help="round intermediates at every step (table-compatible)")
    common.add_argument("--full-precision", dest="rounding", action="store_const", const=RoundingPolicy.FULL_PRECISION,
                        default=S, help="carry full precision; round only for display")
    common.add_argument("--out", metavar="DIR", default=S, help="write files into DIR instead of stdout")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="usedev", description="Used-EV purchase credit scenario engine", parents=[common])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("rebin", parents=[common], help="price-bracket shift and rebinning (Table 1, Figs 1a-1c)")
    p.add_argument("--credit", type=int, help="credit amount in dollars (overrides policy.max_credit)")
    p.add_argument("--incidence", type=float, help="pass-through fraction in [0, 1]")

    p = sub.add_parser("eligibility", parents=[common], help="household scaling (Table 2) and single-purchase checks")
    p.add_argument("--price", type=int, help="check one purchase: sale price in dollars")
    p.add_argument("--pathway", choices=[x.value for x in Pathway], default=Pathway.USED_DEALER.value)
    p.add_argument("--age", type=int, default=6, help="vehicle age in years")
    p.add_argument("--income", type=int, default=30000, help="buyer taxable income")
    p.add_argument("--filing", choices=[f.value for f in Filing], default=Filing.SINGLE.value)

    sub.add_parser("emissions", parents=[common], help="lifecycle emissions and lost benefit (Table 3)")
    sub.add_parser("report", parents=[common], help="full pipeline: all tables (and figures with --format svg)")

    p = sub.add_parser("sweep", parents=[common], help="sensitivity grid over one parameter")
    p.add_argument("--param", required=True, choices=[x.value for x in SweepParam])
    p.add_argument("--values", help="comma-separated parameter values")
    p.add_argument("--from", dest="start", type=float)
    p.add_argument("--to", dest="stop", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("price-cap", parents=[common], help="used-price trend against the price cap")
    p.add_argument("--cap", type=int, help="price cap in dollars (default: policy.price_cap)")
    p.add_argument("--point", action="append", metavar="YEAR:PRICE", help="price observation (repeatable)")
    return parser


def _config(args: argparse.Namespace) -> ScenarioConfig:
    cfg = load_config(getattr(args, "config", None))
    if hasattr(args, "rounding"):
        cfg = replace(cfg, rounding=args.rounding)
    return cfg


def _emit(args: argparse.Namespace, files: dict[str, str], fmt: rpt.ReportFormat) -> None:
    out = getattr(args, "out", None)
    if out is not None:
        d = Path(out)
        d.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            (d / name).write_text(text, encoding="utf-8", newline="\n")
        for name in files:
            print(d / name)
    else:
        sys.stdout.write(rpt.join_for_stdout(files, fmt))


def _fmt(args: argparse.Namespace, default: str = "md") -> rpt.ReportFormat:
    return rpt.ReportFormat(getattr(args, "format", default))


def _run_report(args: argparse.Namespace, cfg: ScenarioConfig, sections: Optional[Sequence[str]]) -> None:
    survey = load_survey(getattr(args, "survey", None))
    report = run_scenario(cfg, survey)
    fmt = _fmt(args)
    _emit(args, rpt.render(report, fmt, sections), fmt)


def _cmd_rebin(args: argparse.Namespace) -> None:
    cfg = _config(args)
    if args.credit is not None:
        cfg = replace(cfg, policy=replace(cfg.policy, max_credit=args.credit))
    if args.incidence is not None:
        cfg = replace(cfg, incidence=args.incidence)
    _run_report(args, cfg, ["table1"])


def _cmd_eligibility(args: argparse.Namespace) -> None:
    cfg = _config(args)
    if args.price is not None:
        decision = credit_amount(cfg.policy, PurchaseProfile(
            price=args.price, pathway=Pathway(args.pathway), vehicle_age_years=args.age,
            buyer_income=args.income, filing=Filing(args.filing),
        ))
        reasons = ", ".join(r.value for r in decision.reasons) or "eligible"
        print(f"credit: ${decision.amount:,} ({reasons})")
        return
    _run_report(args, cfg, ["table2"])


def _cmd_sweep(args: argparse.Namespace) -> None:
    cfg = _config(args)
    if args.values:
        try:
            values = [float(v) for v in args.values.split(",")]
        except ValueError:
            raise UsageError(f"--values: cannot parse {args.values!r}") from None
    elif None not in (args.start, args.stop, args.steps):
        values = linspace(args.start, args.stop, args.steps)
    else:
        raise UsageError("sweep needs --values or all of --from/--to/--steps")
    results = sweep(cfg, load_survey(getattr(args, "survey", None)), args.param, values, max_workers=args.workers)
    fmt = _fmt(args, default="csv")
    if fmt is rpt.ReportFormat.SVG:
        raise UsageError("sweep supports --format csv or md")
    text = rpt.sweep_csv(args.param, results) if fmt is rpt.ReportFormat.CSV else rpt.sweep_markdown(args.param, results)
    _emit(args, {f"sweep_{args.param}.{fmt.value}": text}, fmt)


def _cmd_price_cap(args: argparse.Namespace) -> None:
    cfg = _config(args)
    if args.cap is not None:
        cfg = replace(cfg, policy=replace(cfg.policy, price_cap=args.cap))
    if args.point:
        pts = []
        for spec in args.point:
            try:
                year, price = spec.split(":")
                pts.append(PricePoint(int(year), int(price)))
            except ValueError:
                raise UsageError(f"--point expects YEAR:PRICE, got {spec!r}") from None
        cfg = replace(cfg, price_points=tuple(pts))
    report = run_scenario(cfg, load_survey(getattr(args, "survey", None)))
    fmt = _fmt(args)
    if fmt is rpt.ReportFormat.SVG:
        raise UsageError("price-cap supports --format csv or md")
    _emit(args, rpt.render(report, fmt, ["price_cap"]), fmt)


COMMANDS = {
    "rebin": _cmd_rebin,
    "eligibility": _cmd_eligibility,
    "emissions": lambda a: _run_report(a, _config(a), ["table3"]),
    "report": lambda a: _run_report(a, _config(a), None),
    "sweep": _cmd_sweep,
    "price-cap": _cmd_price_cap,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"usedev: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValidationError as exc:
        print(f"usedev: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"usedev: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


cli_main = main


if __name__ == "__main__":
    sys.exit(main())
