"""Command-line interface: ``leotco <subcommand> [options]``.

Exit codes: 0 success, 2 configuration error, 3 data error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from leotco import capacity, demand, economics, engine, regional
from leotco.assets import BUILTINS, Constellation, dump_assets, load_constellation, reload_constellation
from leotco.errors import ConfigurationError, DataError, InvalidInputError
from leotco.geometry import constellation_geometry
from leotco.link_budget import ShadowingModel
from leotco.output import append_log, atomic_write_text, provenance, render_csv, render_json

EXIT_OK, EXIT_CONFIG, EXIT_DATA = 0, 2, 3


@dataclass
class RunConfig:
    """Resolved options for one invocation, minus output plumbing."""

    command: str
    constellations: list[str]
    satellite_count_override: int | None = None
    iterations: int = 100
    master_seed: int = 0
    adoption_rate: float = 1.0
    overbooking_factor: float = 20.0
    sweep_start: float | None = None
    sweep_stop: float | None = None
    sweep_steps: int | None = None
    sweep_log: bool = False

    def __post_init__(self) -> None:
        if self.sweep_start is not None:
            if not 0 < self.sweep_start < self.sweep_stop:
                raise ConfigurationError(f"sweep needs 0 < start < stop, got {self.sweep_start}, {self.sweep_stop}")
            if self.sweep_steps is None or self.sweep_steps < 1:
                raise ConfigurationError(f"sweep steps must be >= 1, got {self.sweep_steps}")

    def sweep_points(self) -> list[float]:
        """``steps`` intervals, so ``steps + 1`` points including both ends."""
        n = self.sweep_steps + 1
        if self.sweep_log:
            pts = np.geomspace(self.sweep_start, self.sweep_stop, n)
        else:
            pts = np.linspace(self.sweep_start, self.sweep_stop, n)
        return [float(x) for x in pts]


# ---------------------------------------------------------------------------
# shared helpers


def _emit(args, name: str, text: str, log: list[str]) -> None:
    if args.output_dir is None:
        sys.stdout.write(text)
    else:
        path = atomic_write_text(Path(args.output_dir) / name, text)
        log.append(f"wrote {path}")


def _finish(args, log: list[str]) -> None:
    if args.output_dir is not None:
        append_log(args.output_dir, [f"leotco {args.command}"] + log)
    for line in log:
        print(line, file=sys.stderr)


def _load(args, names: Sequence[str]) -> list[Constellation]:
    return [load_constellation(n) for n in names]


def _request(args, c: Constellation) -> engine.SimulationRequest:
    table = capacity.load_modcod_table(args.modcod)
    overrides = {}
    if args.other_losses is not None:
        overrides["other_losses"] = args.other_losses
    if args.noise_figure is not None:
        overrides["noise_figure"] = args.noise_figure
    return engine.SimulationRequest(
        design=c.design,
        modcod=table,
        satellite_count_override=args.satellites,
        iterations=args.iterations,
        master_seed=args.seed,
        noise=c.design.noise_model(**overrides),
        shadowing=ShadowingModel(mu=args.shadow_mu, sigma=args.shadow_sigma),
    )


def _request_config(req: engine.SimulationRequest) -> dict:
    return {
        "design": req.design.to_dict(),
        "satellite_count": req.satellite_count,
        "iterations": req.iterations,
        "master_seed": req.master_seed,
        "noise": asdict(req.noise),
        "shadowing": asdict(req.shadowing),
        "modcod": req.modcod.to_csv(),
    }


def _versions(consts: Sequence[Constellation], table: capacity.ModcodTable | None = None) -> dict[str, str]:
    out = {c.design.name: c.asset_version or c.source for c in consts}
    if table is not None:
        out["modcod"] = table.version or table.source
    return out


def _fmt(args, default: str) -> str:
    return args.format or default


def _summary_rows(summaries: Sequence[engine.SimulationSummary]) -> tuple[list[dict], list[str]]:
    header = [
        "constellation",
        "satellite_count",
        "iterations",
        "coverage_area_km2",
        "mean_separation_km",
        "slant_path_km",
        "deterministic_fspl_db",
    ]
    for m in engine.METRICS:
        header += [f"{m}_mean", f"{m}_std", f"{m}_ci95"]
    rows = []
    for s in summaries:
        row = {
            "constellation": s.design_name,
            "satellite_count": s.satellite_count,
            "iterations": s.iterations,
            "coverage_area_km2": s.coverage_area_km2,
            "mean_separation_km": s.mean_separation_km,
            "slant_path_km": s.slant_path_km,
            "deterministic_fspl_db": s.deterministic_fspl_db,
        }
        for m, ms in s.metrics.items():
            row.update({f"{m}_mean": ms.mean, f"{m}_std": ms.std, f"{m}_ci95": ms.ci95_halfwidth})
        rows.append(row)
    return rows, header


def _financials(args) -> economics.FinancialAssumptions:
    return economics.FinancialAssumptions(discount_rate=args.discount_rate, study_period_years=args.years)


def _pins(args) -> dict[str, float]:
    pins = {}
    for item in args.pin_capacity or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigurationError(f"--pin-capacity expects NAME=MBPS, got {item!r}")
        try:
            pins[name.strip().lower()] = float(value)
        except ValueError:
            raise ConfigurationError(f"--pin-capacity value must be a number, got {value!r}") from None
    return pins


def _supply(args, c: Constellation, pins: dict[str, float]) -> engine.SimulationSummary:
    if c.design.name.lower() in pins:
        return engine.SimulationSummary.pinned(c.design, pins[c.design.name.lower()], args.satellites)
    return engine.run_monte_carlo(_request(args, c), args.workers).summary


# ---------------------------------------------------------------------------
# subcommands


def cmd_simulate(args) -> int:
    (c,) = _load(args, [args.constellation])
    req = _request(args, c)
    result = engine.run_monte_carlo(req, args.workers)
    prov = provenance("simulate", _request_config(req), _versions([c], req.modcod), req.master_seed)
    log: list[str] = []
    if _fmt(args, "json") == "json":
        _emit(args, "summary.json", render_json({"summary": result.summary.to_dict()}, prov), log)
    else:
        rows, header = _summary_rows([result.summary])
        _emit(args, "summary.csv", render_csv(rows, header, prov), log)
    if args.output_dir is not None:
        draw_rows = [d.as_row() for d in result.draws]
        _emit(args, "draws.csv", render_csv(draw_rows, list(draw_rows[0]), prov), log)
    _finish(args, log)
    return EXIT_OK


def _parse_counts(args) -> list[int]:
    if args.counts:
        try:
            counts = [int(x) for x in args.counts.split(",") if x.strip()]
        except ValueError:
            raise ConfigurationError(f"--counts must be comma-separated integers, got {args.counts!r}") from None
    else:
        if None in (args.count_from, args.count_to, args.count_step):
            raise ConfigurationError("give --counts or all of --from/--to/--step")
        if args.count_step < 1 or args.count_from < 1 or args.count_to < args.count_from:
            raise ConfigurationError("need 1 <= --from <= --to and --step >= 1")
        counts = list(range(args.count_from, args.count_to + 1, args.count_step))
    if not counts or min(counts) < 1:
        raise ConfigurationError("satellite counts must be >= 1")
    return counts


def cmd_sweep_size(args) -> int:
    (c,) = _load(args, [args.constellation])
    counts = _parse_counts(args)
    req = _request(args, c)
    summaries = engine.sweep_constellation_size(req, counts, args.workers)
    config = _request_config(req) | {"counts": counts}
    prov = provenance("sweep-size", config, _versions([c], req.modcod), req.master_seed)
    log: list[str] = []
    if _fmt(args, "csv") == "csv":
        rows, header = _summary_rows(summaries)
        _emit(args, "sweep_size.csv", render_csv(rows, header, prov), log)
    else:
        _emit(args, "sweep_size.json", render_json({"series": [s.to_dict() for s in summaries]}, prov), log)
    _finish(args, log)
    return EXIT_OK


def cmd_sweep_density(args) -> int:
    (c,) = _load(args, [args.constellation])
    cfg = RunConfig(
        "sweep-density",
        [c.design.name],
        args.satellites,
        args.iterations,
        args.seed,
        overbooking_factor=args.obf,
        sweep_start=args.dens_from,
        sweep_stop=args.dens_to,
        sweep_steps=args.steps,
        sweep_log=args.log,
    )
    pins = _pins(args)
    summary = _supply(args, c, pins)
    n = summary.satellite_count
    asset = economics.allocate_per_satellite(c.cost_book, n, _financials(args))
    densities = cfg.sweep_points()
    results = engine.sweep_subscriber_density(summary, asset, densities, args.obf, args.cost_mode)
    header = [
        "constellation",
        "satellite_count",
        "subscriber_density",
        "active_user_density",
        "capacity_per_user_mbps",
        "cost_per_user_usd",
    ]
    rows = [
        {
            "constellation": c.design.name,
            "satellite_count": n,
            "subscriber_density": r.subscriber_density,
            "active_user_density": r.active_user_density,
            "capacity_per_user_mbps": r.capacity_per_user,
            "cost_per_user_usd": r.cost_per_user,
        }
        for r in results
    ]
    config = {
        "run": asdict(cfg),
        "supply": summary.to_dict(),
        "asset": asdict(asset),
        "cost_mode": args.cost_mode,
        "financial": asdict(_financials(args)),
    }
    table = capacity.load_modcod_table(args.modcod)
    prov = provenance("sweep-density", config, _versions([c], table), summary.master_seed)
    log: list[str] = []
    if _fmt(args, "csv") == "csv":
        _emit(args, "sweep_density.csv", render_csv(rows, header, prov), log)
    else:
        payload = {"supply": summary.to_dict(), "asset_cost_musd": asdict(asset), "series": rows}
        _emit(args, "sweep_density.json", render_json(payload, prov), log)
    _finish(args, log)
    return EXIT_OK


def cmd_cost(args) -> int:
    consts = _load(args, args.constellation or list(BUILTINS))
    fin = _financials(args)
    reports, rows = [], []
    for c in consts:
        n = int(args.satellites or c.design.satellite_count)
        asset = economics.allocate_per_satellite(c.cost_book, n, fin)
        schedule = economics.npv_schedule(c.cost_book, n, fin)
        reports.append(
            {
                "constellation": c.design.name,
                "satellite_count": n,
                "capex_total_musd": economics.capex_total(c.cost_book, n),
                "opex_annual_musd": economics.opex_annual(c.cost_book, n),
                "capex_per_satellite_musd": asset.capex_per_satellite,
                "opex_annual_per_satellite_musd": asset.opex_annual_per_satellite,
                "asset_npv_musd": asset.asset_npv,
                "discounted_terms": schedule,
            }
        )
        rows += [{"constellation": c.design.name, "satellite_count": n, **term} for term in schedule]
    config = {
        "books": {c.design.name: c.cost_book.to_dict() for c in consts},
        "satellites": args.satellites,
        "financial": asdict(fin),
    }
    prov = provenance("cost", config, _versions(consts), None)
    log: list[str] = []
    if _fmt(args, "json") == "json":
        _emit(args, "cost.json", render_json({"financial": asdict(fin), "constellations": reports}, prov), log)
    else:
        header = ["constellation", "satellite_count", "t", "year", "discount_factor",
                  "opex_per_satellite_musd", "discounted_opex_musd"]
        _emit(args, "cost.csv", render_csv(rows, header, prov), log)
    _finish(args, log)
    return EXIT_OK


def cmd_assess(args) -> int:
    consts = _load(args, args.constellation or list(BUILTINS))
    records, problems = regional.load_regions(args.regions, skip_invalid=args.skip_invalid)
    for p in problems:
        print(f"skipped: {p}", file=sys.stderr)
    pins = _pins(args)
    fin = _financials(args)
    summaries, assets = {}, {}
    for c in consts:
        s = _supply(args, c, pins)
        summaries[c.design.name] = s
        assets[c.design.name] = economics.allocate_per_satellite(c.cost_book, s.satellite_count, fin)
    out = regional.assess_regions(
        records, summaries, assets, args.adoption, args.obf, args.threshold, args.cost_mode
    )
    rows = regional.assessment_rows(out)
    config = {
        "regions_file": Path(args.regions).name,
        "regions": [asdict(r) for r in records],
        "supply": {k: s.to_dict() for k, s in summaries.items()},
        "assets": {k: asdict(a) for k, a in assets.items()},
        "adoption_rate": args.adoption,
        "overbooking_factor": args.obf,
        "threshold_mbps": args.threshold,
        "cost_mode": args.cost_mode,
    }
    prov = provenance("assess", config, _versions(consts, capacity.load_modcod_table(args.modcod)), args.seed)
    log: list[str] = [f"assessed {len(records)} region(s) against {len(consts)} constellation(s)"]
    if _fmt(args, "csv") == "csv":
        _emit(args, "assessment.csv", render_csv(rows, regional.ASSESSMENT_HEADER, prov), log)
    else:
        _emit(args, "assessment.json", render_json({"assessments": rows}, prov), log)
    _finish(args, log)
    return EXIT_OK


def _check(label: str, ok: bool, lines: list[str]) -> bool:
    lines.append(f"{'ok  ' if ok else 'FAIL'} {label}")
    return ok


def cmd_validate(args) -> int:
    lines: list[str] = []
    ok = True
    table = capacity.load_modcod_table(args.modcod)
    lines.append(f"ok   MODCOD table {table.source}: {len(table.entries)} rows, monotone")
    for c in _load(args, args.constellation or list(BUILTINS)):
        d = c.design
        capped = table.with_cap(d.modulation_cap)
        ok &= _check(f"{d.name}: design and cost book load ({c.source})", True, lines)
        ok &= _check(f"{d.name}: MODCOD entries at or below {capped.modulation_cap}: {len(capped.usable_entries)}",
                     len(capped.usable_entries) > 0, lines)
        n = d.satellite_count
        geo = constellation_geometry(n, d.altitude_km)
        ok &= _check(f"{d.name}: density x coverage = 1",
                     math.isclose(geo.network_density * geo.coverage_area, 1.0, rel_tol=1e-9), lines)
        ok &= _check(f"{d.name}: slant path >= altitude", geo.slant_path >= d.altitude_km, lines)
        asset = economics.allocate_per_satellite(c.cost_book, n)
        ok &= _check(f"{d.name}: asset NPV >= capex per satellite", asset.asset_npv >= asset.capex_per_satellite, lines)
        again = reload_constellation(c)
        ok &= _check(f"{d.name}: serialise/reload round trip",
                     (again.design, again.cost_book) == (c.design, c.cost_book), lines)
    if args.dump_assets:
        for path in dump_assets(args.dump_assets):
            lines.append(f"dumped {path}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_CONFIG


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    g.add_argument("--iterations", type=int, default=100, help="Monte Carlo iterations (default 100)")
    g.add_argument("--workers", type=int, default=engine.default_workers(),
                   help="parallel workers; results do not depend on this")
    g.add_argument("--output-dir", default=None, help="write files here instead of standard output")
    g.add_argument("--format", choices=("csv", "json"), default=None)

    sim = argparse.ArgumentParser(add_help=False)
    s = sim.add_argument_group("simulation options")
    s.add_argument("--satellites", type=int, default=None, help="override the simulated satellite count")
    s.add_argument("--other-losses", type=float, default=None, help="aggregate other losses, dB")
    s.add_argument("--noise-figure", type=float, default=None, help="receiver noise figure, dB")
    s.add_argument("--shadow-mu", type=float, default=1.0, help="shadowing mean, dB")
    s.add_argument("--shadow-sigma", type=float, default=7.8, help="shadowing std, dB")
    s.add_argument("--modcod", default=None, help="MODCOD table CSV (default: shipped DVB-S2)")

    fin = argparse.ArgumentParser(add_help=False)
    f = fin.add_argument_group("financial options")
    f.add_argument("--discount-rate", type=float, default=0.05)
    f.add_argument("--years", type=int, default=5, help="study period Y; Y+1 discounted terms")

    dem = argparse.ArgumentParser(add_help=False)
    d = dem.add_argument_group("demand options")
    d.add_argument("--obf", type=float, default=20.0, help="overbooking factor")
    d.add_argument("--cost-mode", choices=demand.COST_MODES, default="active",
                   help="divide NPV by active users (default) or all subscribers")
    d.add_argument("--pin-capacity", action="append", metavar="NAME=MBPS",
                   help="fix a constellation's channel capacity instead of simulating")

    parser = argparse.ArgumentParser(prog="leotco", description="LEO constellation techno-economic simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common, sim], help="Monte Carlo link budget and capacity")
    p.add_argument("--constellation", default="starlink", help=f"builtin ({', '.join(BUILTINS)}) or JSON path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep-size", parents=[common, sim], help="summaries across satellite counts")
    p.add_argument("--constellation", default="starlink")
    p.add_argument("--counts", default=None, help="comma-separated satellite counts")
    p.add_argument("--from", dest="count_from", type=int, default=None)
    p.add_argument("--to", dest="count_to", type=int, default=None)
    p.add_argument("--step", dest="count_step", type=int, default=None)
    p.set_defaults(func=cmd_sweep_size)

    p = sub.add_parser("sweep-density", parents=[common, sim, fin, dem], help="per-user capacity and cost")
    p.add_argument("--constellation", default="starlink")
    p.add_argument("--from", dest="dens_from", type=float, default=0.05, help="first subscriber density, /km²")
    p.add_argument("--to", dest="dens_to", type=float, default=1.0, help="last subscriber density, /km²")
    p.add_argument("--steps", type=int, default=19, help="number of intervals (steps + 1 points)")
    p.add_argument("--log", action="store_true", help="geometric spacing")
    p.set_defaults(func=cmd_sweep_density)

    p = sub.add_parser("cost", parents=[common, fin], help="capex, opex and per-satellite NPV")
    p.add_argument("--constellation", action="append", default=None)
    p.add_argument("--satellites", type=int, default=None)
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("assess", parents=[common, sim, fin, dem], help="per-region suitability")
    p.add_argument("--regions", required=True, help="CSV: " + ",".join(regional.REGION_HEADER))
    p.add_argument("--constellation", action="append", default=None)
    p.add_argument("--adoption", type=float, default=1.0, help="adoption rate, percent")
    p.add_argument("--threshold", type=float, default=regional.DEFAULT_THRESHOLD_MBPS, help="suitability, Mbps/user")
    p.add_argument("--skip-invalid", action="store_true", help="drop invalid rows instead of failing")
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("validate", parents=[common], help="check assets and table invariants")
    p.add_argument("--constellation", action="append", default=None)
    p.add_argument("--modcod", default=None)
    p.add_argument("--dump-assets", metavar="DIR", default=None, help="export builtin assets for editing")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ConfigurationError, InvalidInputError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
