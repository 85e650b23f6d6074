#!/usr/bin/env python3
"""Lost per-vehicle and cumulative benefit across grid carbon intensities."""

import argparse

from usedev import ScenarioConfig, load_survey, sweep
from usedev.scenario import linspace


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--from", dest="start", type=float, default=0.0, help="EV fuel production, gCO2e/MJ")
    ap.add_argument("--to", dest="stop", type=float, default=165.22)
    ap.add_argument("--steps", type=int, default=9)
    args = ap.parse_args()

    results = sweep(ScenarioConfig(), load_survey(), "ev_fuel_production", linspace(args.start, args.stop, args.steps))
    print("ev_fuel_production,per_vehicle_t,cumulative_lo_mt,cumulative_hi_mt")
    for value, r in results:
        (_, b), = r.benefits
        print(f"{value:g},{b.per_vehicle.value:.2f},{b.cumulative_lo.value:.2f},{b.cumulative_hi.value:.2f}")


if __name__ == "__main__":
    main()
