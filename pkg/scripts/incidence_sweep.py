#!/usr/bin/env python3
"""How much of the credit reaches buyers: sweep incidence from 0 to 1.

Prints the used-dealer share of the top merged bracket before and after the
shift for each incidence value, plus whether the merged partition collapsed.
"""

import argparse

from usedev import ScenarioConfig, load_survey, sweep
from usedev.core import Pathway
from usedev.report import fmt_pct
from usedev.scenario import linspace


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=21)
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()

    results = sweep(ScenarioConfig(), load_survey(), "incidence", linspace(0, 1, args.steps), max_workers=args.workers)
    print("incidence,credit,n_brackets,ud_top_before_pct,ud_top_after_pct,non_paper_partition")
    for value, r in results:
        ud = Pathway.USED_DEALER
        top = len(r.rebin.merged_partition) - 1
        before = r.before_shares.shares[ud][top]
        after = r.after_shares.shares[ud][top]
        print(f"{value:g},{r.shift.amount},{top + 1},{fmt_pct(before)},{fmt_pct(after)},{r.non_paper_partition}")


if __name__ == "__main__":
    main()
