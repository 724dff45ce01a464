"""Regenerate the frozen golden files under tests/golden/.

Run only when a change to the random model is intended; the diff of the
golden files is the review artefact.
"""

import json
from pathlib import Path

import numpy as np

from leotco.assets import load_constellation
from leotco.capacity import load_modcod_table
from leotco.engine import SimulationRequest, sweep_constellation_size
from leotco.link_budget import ShadowingModel, draw_shadowing

OUT = Path(__file__).resolve().parents[1] / "tests" / "golden"
SWEEP_COUNTS = list(range(60, 1001, 60)) + [1000]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(42)
    draws = [draw_shadowing(rng, ShadowingModel()) for _ in range(20)]
    (OUT / "shadowing_seed42.json").write_text(json.dumps({"seed": 42, "draws": draws}, indent=1) + "\n")

    design = load_constellation("starlink").design
    req = SimulationRequest(design, load_modcod_table(), iterations=100, master_seed=42)
    series = [
        {"satellite_count": s.satellite_count, "fspl_db_mean": s.mean("fspl_db"),
         "area_capacity_mbps_km2_mean": s.mean("area_capacity_mbps_km2")}
        for s in sweep_constellation_size(req, SWEEP_COUNTS)
    ]
    (OUT / "sweep_size_starlink_seed42.json").write_text(json.dumps(series, indent=1) + "\n")


if __name__ == "__main__":
    main()
