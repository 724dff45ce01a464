"""Seeded Monte Carlo orchestration and sweeps.

Iteration ``i`` draws from its own generator seeded with
``SeedSequence([master_seed, i])``, i.e. numpy's SeedSequence hash of the
(seed, index) pair, so
results do not depend on how iterations are split across workers. Summaries
are computed from the draw list sorted by iteration index using ``math.fsum``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import MISSING, asdict, dataclass, field, fields, replace
from statistics import NormalDist
from typing import Sequence

import numpy as np

from leotco import capacity as cap
from leotco import demand
from leotco.economics import AssetCost
from leotco.errors import ConfigurationError, InvalidInputError
from leotco.geometry import DEFAULT_CONSTANTS, GeometryResult, PhysicalConstants, constellation_geometry
from leotco.link_budget import (
    LinkBudgetDraw,
    ReceiverNoiseModel,
    ShadowingModel,
    free_space_path_loss,
    link_budget_draw,
)

METRICS = ("fspl_db", "cnr_db", "spectral_efficiency", "channel_capacity_mbps", "area_capacity_mbps_km2")
MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class ConstellationDesign:
    name: str
    satellite_count: int  # simulated satellites
    altitude_km: float
    frequency_ghz: float
    channel_bandwidth_mhz: float
    channels: int
    reuse_factor: float
    eirp_dbw: float
    receiver_gain_dbi: float
    system_temperature_k: float
    min_elevation_deg: float  # stored only; coverage is flat-area partitioning
    antenna_diameter_m: float  # stored only
    satellite_mass_kg: float
    modulation_cap: str = "16APSK"
    planned_satellites: int | None = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ConfigurationError("design name must be non-empty")
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name in ("name", "modulation_cap") or value is None:
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ConfigurationError(f"design field {f.name!r} must be a finite number, got {value!r}")
            if f.name == "eirp_dbw" or f.name == "receiver_gain_dbi":
                continue
            if f.name == "min_elevation_deg":
                if not 0 <= value <= 90:
                    raise ConfigurationError(f"min_elevation_deg must be within [0, 90], got {value}")
                continue
            if not value > 0:
                raise ConfigurationError(f"design field {f.name!r} must be positive, got {value}")
        for name in ("satellite_count", "channels", "planned_satellites"):
            value = getattr(self, name)
            if value is not None and int(value) != value:
                raise ConfigurationError(f"design field {name!r} must be an integer, got {value}")
        if self.reuse_factor < 1:
            raise ConfigurationError(f"reuse_factor must be >= 1, got {self.reuse_factor}")
        cap.normalize_modulation(self.modulation_cap)

    @classmethod
    def from_dict(cls, data: dict) -> ConstellationDesign:
        known = {f.name: f for f in fields(cls)}
        unknown = set(data) - set(known)
        if unknown:
            raise ConfigurationError(f"unknown design field(s): {sorted(unknown)}")
        for name, f in known.items():
            if f.default is MISSING and name not in data:
                raise ConfigurationError(f"design missing required field {name!r}")
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)

    def noise_model(self, **overrides) -> ReceiverNoiseModel:
        """Receiver model using this design's temperature and channel bandwidth."""
        params = dict(system_temperature=self.system_temperature_k, bandwidth=self.channel_bandwidth_mhz * 1e6)
        params.update(overrides)
        return ReceiverNoiseModel(**params)


@dataclass(frozen=True)
class SimulationRequest:
    design: ConstellationDesign
    modcod: cap.ModcodTable
    satellite_count_override: int | None = None
    iterations: int = 100
    master_seed: int = 0
    noise: ReceiverNoiseModel | None = None  # None: design.noise_model()
    shadowing: ShadowingModel = field(default_factory=ShadowingModel)
    constants: PhysicalConstants = DEFAULT_CONSTANTS

    def __post_init__(self) -> None:
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise ConfigurationError(f"iterations must be an integer >= 1, got {self.iterations}")
        if int(self.master_seed) != self.master_seed or not 0 <= self.master_seed <= MAX_SEED:
            raise ConfigurationError(f"master seed must be an integer in [0, 2**64), got {self.master_seed}")
        n = self.satellite_count_override
        if n is not None and (int(n) != n or n < 1):
            raise ConfigurationError(f"satellite count override must be an integer >= 1, got {n}")
        if self.noise is None:
            object.__setattr__(self, "noise", self.design.noise_model())

    @property
    def satellite_count(self) -> int:
        return int(self.satellite_count_override or self.design.satellite_count)


@dataclass(frozen=True)
class DrawRecord:
    iteration: int
    link: LinkBudgetDraw
    modcod: str  # "" in outage
    spectral_efficiency: float
    channel_capacity_mbps: float
    area_capacity_mbps_km2: float

    def metric(self, name: str) -> float:
        if name in ("fspl_db", "cnr_db"):
            return getattr(self.link, name)
        return getattr(self, name)

    def as_row(self) -> dict:
        row = {"iteration": self.iteration}
        row.update(asdict(self.link))
        row.update(
            modcod=self.modcod,
            spectral_efficiency=self.spectral_efficiency,
            channel_capacity_mbps=self.channel_capacity_mbps,
            area_capacity_mbps_km2=self.area_capacity_mbps_km2,
        )
        return row


@dataclass(frozen=True)
class MetricSummary:
    mean: float
    std: float
    ci95_halfwidth: float


@dataclass(frozen=True)
class SimulationSummary:
    design_name: str
    satellite_count: int
    iterations: int
    master_seed: int | None
    coverage_area_km2: float
    mean_separation_km: float
    slant_path_km: float
    deterministic_fspl_db: float
    metrics: dict[str, MetricSummary]

    def mean(self, metric: str) -> float:
        return self.metrics[metric].mean

    @property
    def area_capacity(self) -> float:
        return self.metrics["area_capacity_mbps_km2"].mean

    def to_dict(self) -> dict:
        out = asdict(self)
        out["metrics"] = {k: asdict(v) for k, v in self.metrics.items()}
        return out

    @classmethod
    def pinned(
        cls,
        design: ConstellationDesign,
        channel_capacity_mbps: float,
        satellite_count: int | None = None,
        constants: PhysicalConstants = DEFAULT_CONSTANTS,
    ) -> SimulationSummary:
        """A zero-variance summary with supply fixed to a given channel capacity.

        Only the capacity metrics are meaningful; link metrics are NaN.
        """
        n = int(satellite_count or design.satellite_count)
        geo = constellation_geometry(n, design.altitude_km, constants)
        bw_total = design.channel_bandwidth_mhz * design.channels * design.reuse_factor
        values = {
            "fspl_db": math.nan,
            "cnr_db": math.nan,
            "spectral_efficiency": channel_capacity_mbps / bw_total,
            "channel_capacity_mbps": channel_capacity_mbps,
            "area_capacity_mbps_km2": cap.area_capacity(channel_capacity_mbps, geo.coverage_area),
        }
        return cls(
            design_name=design.name,
            satellite_count=n,
            iterations=1,
            master_seed=None,
            coverage_area_km2=geo.coverage_area,
            mean_separation_km=geo.mean_separation,
            slant_path_km=geo.slant_path,
            deterministic_fspl_db=free_space_path_loss(geo.slant_path, design.frequency_ghz),
            metrics={k: MetricSummary(v, 0.0, 0.0) for k, v in values.items()},
        )


@dataclass(frozen=True)
class SimulationResult:
    summary: SimulationSummary
    draws: tuple[DrawRecord, ...]


def summarize(samples: Sequence[float], confidence: float = 0.95) -> tuple[float, float, float]:
    """Mean, sample std (n-1) and normal-approximation CI half-width."""
    n = len(samples)
    if n == 0:
        raise InvalidInputError("cannot summarise an empty sample")
    if not 0 < confidence < 1:
        raise InvalidInputError(f"confidence must be in (0, 1), got {confidence}")
    mean = math.fsum(samples) / n
    if n == 1:
        return mean, 0.0, 0.0
    std = math.sqrt(math.fsum((x - mean) ** 2 for x in samples) / (n - 1))
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    return mean, std, z * std / math.sqrt(n)


def iteration_rng(master_seed: int, iteration: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([master_seed, iteration]))


@dataclass(frozen=True)
class _DrawContext:
    request: SimulationRequest
    table: cap.ModcodTable
    geometry: GeometryResult


def _draw(ctx: _DrawContext, i: int) -> DrawRecord:
    req, design = ctx.request, ctx.request.design
    link = link_budget_draw(
        iteration_rng(req.master_seed, i),
        ctx.geometry.slant_path,
        design.frequency_ghz,
        design.eirp_dbw,
        design.receiver_gain_dbi,
        req.noise,
        req.shadowing,
        req.constants,
    )
    entry = cap.lookup_modcod(link.cnr_db, ctx.table)
    se = entry.spectral_efficiency if entry else 0.0
    c = cap.channel_capacity(se, design.channel_bandwidth_mhz, design.channels, design.reuse_factor)
    return DrawRecord(
        iteration=i,
        link=link,
        modcod=entry.modcod if entry else "",
        spectral_efficiency=se,
        channel_capacity_mbps=c,
        area_capacity_mbps_km2=cap.area_capacity(c, ctx.geometry.coverage_area),
    )


def _draw_range(ctx: _DrawContext, start: int, stop: int) -> list[DrawRecord]:
    return [_draw(ctx, i) for i in range(start, stop)]


def default_workers() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def run_monte_carlo(request: SimulationRequest, workers: int = 1) -> SimulationResult:
    """Run ``request.iterations`` independent link-budget draws and summarise them."""
    if workers < 1:
        raise ConfigurationError(f"workers must be >= 1, got {workers}")
    design = request.design
    geo = constellation_geometry(request.satellite_count, design.altitude_km, request.constants)
    ctx = _DrawContext(request, request.modcod.with_cap(design.modulation_cap), geo)

    n = request.iterations
    workers = min(workers, n)
    if workers == 1:
        draws = _draw_range(ctx, 0, n)
    else:
        bounds = np.linspace(0, n, workers + 1).astype(int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_draw_range, ctx, int(a), int(b)) for a, b in zip(bounds, bounds[1:]) if b > a]
            draws = [d for fut in futures for d in fut.result()]
    draws.sort(key=lambda d: d.iteration)

    metrics = {}
    for name in METRICS:
        metrics[name] = MetricSummary(*summarize([d.metric(name) for d in draws]))
    summary = SimulationSummary(
        design_name=design.name,
        satellite_count=request.satellite_count,
        iterations=n,
        master_seed=request.master_seed,
        coverage_area_km2=geo.coverage_area,
        mean_separation_km=geo.mean_separation,
        slant_path_km=geo.slant_path,
        deterministic_fspl_db=free_space_path_loss(geo.slant_path, design.frequency_ghz),
        metrics=metrics,
    )
    return SimulationResult(summary, tuple(draws))


def sweep_constellation_size(
    request: SimulationRequest, counts: Sequence[int], workers: int = 1
) -> list[SimulationSummary]:
    """One summary per satellite count; every point reuses the master seed."""
    if not counts:
        raise InvalidInputError("counts must be non-empty")
    return [
        run_monte_carlo(replace(request, satellite_count_override=int(n)), workers).summary for n in counts
    ]


def sweep_subscriber_density(
    summary: SimulationSummary,
    asset: AssetCost,
    densities: Sequence[float],
    overbooking_factor: float = 20.0,
    cost_mode: demand.CostMode = "active",
) -> list[demand.DemandResult]:
    """Per-user capacity and cost against the summary's mean supply.

    ``densities`` are subscribers per km²; the asset NPV is in M$.
    """
    out = []
    for d in densities:
        if not d > 0:
            raise InvalidInputError(f"subscriber densities must be positive, got {d}")
        out.append(
            demand.evaluate(
                d,
                summary.area_capacity,
                asset.asset_npv * 1e6,
                summary.coverage_area_km2,
                overbooking_factor,
                cost_mode,
            )
        )
    return out
