"""Run the three-constellation study and write plot-ready CSV series.

    python scripts/run_experiments.py --out results/ --seed 42

Outputs (each with provenance comment lines):
  size_sweep.csv     link/capacity summaries vs satellite count (first 1,000)
  density_sweep.csv  per-user capacity and cost vs subscriber density
  costs.csv          per-satellite capex/opex/NPV per constellation
  aggregate.csv      full-deployment Monte Carlo summaries
"""

import argparse
from pathlib import Path

import numpy as np

from leotco.assets import BUILTINS, load_constellation
from leotco.capacity import load_modcod_table
from leotco.economics import allocate_per_satellite
from leotco.engine import SimulationRequest, run_monte_carlo, sweep_constellation_size, sweep_subscriber_density
from leotco.output import atomic_write_text, provenance, render_csv

SIZE_COUNTS = {"starlink": range(50, 1001, 50), "kuiper": range(50, 1001, 50), "oneweb": range(40, 721, 40)}
DENSITIES = [float(x) for x in np.geomspace(0.005, 1.0, 25)]


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="results")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--iterations", type=int, default=100)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    out = Path(args.out)
    table = load_modcod_table()

    size_rows, dens_rows, cost_rows, agg_rows = [], [], [], []
    versions = {"modcod": table.version}
    for name in BUILTINS:
        c = load_constellation(name)
        versions[name] = c.asset_version
        req = SimulationRequest(c.design, table, iterations=args.iterations, master_seed=args.seed)
        for s in sweep_constellation_size(req, list(SIZE_COUNTS[name]), args.workers):
            size_rows.append(
                {"constellation": name, "satellite_count": s.satellite_count, "coverage_area_km2": s.coverage_area_km2}
                | {f"{m}_mean": v.mean for m, v in s.metrics.items()}
                | {f"{m}_ci95": v.ci95_halfwidth for m, v in s.metrics.items()}
            )
        full = run_monte_carlo(req, args.workers).summary
        agg_rows.append({"constellation": name, "satellite_count": full.satellite_count}
                        | {f"{m}_mean": v.mean for m, v in full.metrics.items()})
        asset = allocate_per_satellite(c.cost_book, c.design.satellite_count)
        cost_rows.append({"constellation": name, "satellite_count": c.design.satellite_count,
                          "capex_per_satellite_musd": asset.capex_per_satellite,
                          "opex_annual_per_satellite_musd": asset.opex_annual_per_satellite,
                          "asset_npv_musd": asset.asset_npv})
        for r in sweep_subscriber_density(full, asset, DENSITIES):
            dens_rows.append({"constellation": name, "subscriber_density": r.subscriber_density,
                              "capacity_per_user_mbps": r.capacity_per_user, "cost_per_user_usd": r.cost_per_user})

    prov = provenance("run_experiments", {"seed": args.seed, "iterations": args.iterations,
                                          "sizes": {k: list(v) for k, v in SIZE_COUNTS.items()},
                                          "densities": DENSITIES}, versions, args.seed)
    for fname, rows in (("size_sweep.csv", size_rows), ("density_sweep.csv", dens_rows),
                        ("costs.csv", cost_rows), ("aggregate.csv", agg_rows)):
        atomic_write_text(out / fname, render_csv(rows, list(rows[0]), prov))
        print(f"wrote {out / fname}")


if __name__ == "__main__":
    main()
