"""Batch assessment of sub-national regions from a tabular population file."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from leotco import demand
from leotco.economics import AssetCost
from leotco.engine import SimulationSummary
from leotco.errors import DataError, InvalidInputError

REGION_HEADER = ("region_id", "country_code", "level", "area_km2", "population")
ASSESSMENT_HEADER = (
    "region_id",
    "density",
    "decile_band",
    "constellation",
    "capacity_per_user_mbps",
    "cost_per_user_usd",
    "suitable",
)
BAND_WIDTH = 5.0
N_BANDS = 10
DEFAULT_THRESHOLD_MBPS = 10.0


class RegionDataError(DataError):
    """One or more region rows failed validation; ``errors`` lists them."""

    def __init__(self, errors: list[str]):
        self.errors = errors
        shown = "; ".join(errors[:5]) + (f" (+{len(errors) - 5} more)" if len(errors) > 5 else "")
        super().__init__(f"{len(errors)} invalid region row(s): {shown}")


@dataclass(frozen=True)
class RegionRecord:
    region_id: str
    country_code: str
    level: int
    area_km2: float
    population: float

    def __post_init__(self) -> None:
        if not self.area_km2 > 0 or not math.isfinite(self.area_km2):
            raise InvalidInputError(f"area_km2 must be positive and finite, got {self.area_km2}")
        if not self.population >= 0 or not math.isfinite(self.population):
            raise InvalidInputError(f"population must be >= 0 and finite, got {self.population}")
        if self.level not in (0, 1, 2):
            raise InvalidInputError(f"level must be 0, 1 or 2, got {self.level}")
        if not self.region_id:
            raise InvalidInputError("region_id must be non-empty")

    @property
    def population_density(self) -> float:
        return self.population / self.area_km2


@dataclass(frozen=True)
class ConstellationOutcome:
    constellation: str
    capacity_per_user: float | None  # None: uncontended
    cost_per_user: float | None
    suitable: bool


@dataclass(frozen=True)
class RegionAssessment:
    region_id: str
    density: float
    density_decile_band: int
    outcomes: tuple[ConstellationOutcome, ...]


def parse_regions(text: str, source: str = "<string>", skip_invalid: bool = False) -> tuple[list[RegionRecord], list[str]]:
    """Parse region CSV text into records plus row diagnostics.

    Raises :class:`RegionDataError` on any bad row unless ``skip_invalid``.
    """
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        raise DataError(f"{source}: empty region file")
    header = [h.strip().lstrip("\ufeff") for h in header]
    missing = [c for c in REGION_HEADER if c not in header]
    if missing:
        raise DataError(f"{source}: missing column(s) {missing}; expected {','.join(REGION_HEADER)}")
    col = {name: header.index(name) for name in REGION_HEADER}

    records, errors = [], []
    for lineno, row in enumerate(reader, start=2):
        if not any(cell.strip() for cell in row):
            continue
        try:
            if len(row) < len(header):
                raise InvalidInputError(f"expected {len(header)} fields, got {len(row)}")
            level_text = row[col["level"]].strip()
            level = int(level_text)
            records.append(
                RegionRecord(
                    region_id=row[col["region_id"]].strip(),
                    country_code=row[col["country_code"]].strip(),
                    level=level,
                    area_km2=float(row[col["area_km2"]]),
                    population=float(row[col["population"]]),
                )
            )
        except ValueError as exc:
            errors.append(f"{source} row {lineno}: {exc}")
    if errors and not skip_invalid:
        raise RegionDataError(errors)
    return records, errors


def load_regions(path: str | Path, skip_invalid: bool = False) -> tuple[list[RegionRecord], list[str]]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read region file {path}: {exc}") from None
    return parse_regions(text, str(path), skip_invalid)


def classify_density_decile(density: float) -> int:
    """Band 1..10 of width 5 people/km², lower-inclusive; band 10 is >= 45."""
    if not density >= 0:
        raise InvalidInputError(f"density must be >= 0, got {density}")
    if math.isinf(density):
        return N_BANDS
    return min(int(density // BAND_WIDTH) + 1, N_BANDS)


def assess_region(
    region: RegionRecord,
    summaries: Mapping[str, SimulationSummary],
    assets: Mapping[str, AssetCost],
    adoption_rate: float = 1.0,
    overbooking_factor: float = 20.0,
    threshold_mbps: float = DEFAULT_THRESHOLD_MBPS,
    cost_mode: demand.CostMode = "active",
) -> RegionAssessment:
    density = region.population_density
    subs = demand.subscriber_density(density, adoption_rate)
    outcomes = []
    for name, summary in summaries.items():
        result = demand.evaluate(
            subs,
            summary.area_capacity,
            assets[name].asset_npv * 1e6,
            summary.coverage_area_km2,
            overbooking_factor,
            cost_mode,
        )
        cpu = result.capacity_per_user
        outcomes.append(ConstellationOutcome(name, cpu, result.cost_per_user, cpu is None or cpu >= threshold_mbps))
    return RegionAssessment(region.region_id, density, classify_density_decile(density), tuple(outcomes))


def assess_regions(
    regions: Iterable[RegionRecord],
    summaries: Mapping[str, SimulationSummary],
    assets: Mapping[str, AssetCost],
    scenario_adoption_rate: float = 1.0,
    overbooking_factor: float = 20.0,
    threshold_mbps: float = DEFAULT_THRESHOLD_MBPS,
    cost_mode: demand.CostMode = "active",
) -> list[RegionAssessment]:
    """Assess every region against every constellation, preserving input order."""
    if not summaries:
        raise InvalidInputError("need at least one constellation summary")
    missing = set(summaries) - set(assets)
    if missing:
        raise InvalidInputError(f"no asset cost for {sorted(missing)}")
    return [
        assess_region(r, summaries, assets, scenario_adoption_rate, overbooking_factor, threshold_mbps, cost_mode)
        for r in regions
    ]


def assessment_rows(assessments: Sequence[RegionAssessment]) -> list[dict]:
    """Flatten to one row per (region, constellation) in the output schema order."""
    rows = []
    for a in assessments:
        for o in a.outcomes:
            rows.append(
                {
                    "region_id": a.region_id,
                    "density": a.density,
                    "decile_band": a.density_decile_band,
                    "constellation": o.constellation,
                    "capacity_per_user_mbps": demand.UNCONTENDED if o.capacity_per_user is None else o.capacity_per_user,
                    "cost_per_user_usd": demand.UNCONTENDED if o.cost_per_user is None else o.cost_per_user,
                    "suitable": str(o.suitable).lower(),
                }
            )
    return rows
