"""Capex/opex aggregation and per-satellite NPV of total cost of ownership.

Monetary values are in millions of US dollars throughout this module.
"""

from __future__ import annotations

import math
from dataclasses import MISSING, asdict, dataclass, fields

from leotco.errors import ConfigurationError, InvalidInputError


@dataclass(frozen=True)
class CostBook:
    """Cost items for one constellation, M$.

    Launch and satellite build are per-satellite capex; the four fleet items
    (ground stations, digital infrastructure, spectrum, regulation fees) are
    one-off capex; the ``*_annual`` items are yearly opex. Ground-station
    energy and maintenance have no shipped values and go in
    ``maintenance_annual`` when known.
    """

    ground_station: float
    digital_infrastructure: float
    spectrum: float
    regulation_fees: float
    staff_annual: float
    research_development_annual: float
    marketing_acquisition_annual: float
    launch_per_satellite: float
    satellite_build: float
    maintenance_annual: float = 0.0
    satellite_lifespan: float = 10.0  # years; stored, not costed

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ConfigurationError(f"cost book field {f.name!r} must be a finite number, got {value!r}")
            if f.name == "satellite_lifespan":
                if value <= 0:
                    raise ConfigurationError("cost book field 'satellite_lifespan' must be positive")
            elif value < 0:
                raise ConfigurationError(f"cost book field {f.name!r} must be >= 0, got {value}")

    @classmethod
    def from_dict(cls, data: dict) -> CostBook:
        known = {f.name for f in fields(cls)}
        required = {f.name for f in fields(cls) if f.default is MISSING}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown cost book field(s): {sorted(unknown)}")
        missing = sorted(required - set(data))
        if missing:
            raise ConfigurationError(f"cost book missing required field {missing[0]!r}")
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class FinancialAssumptions:
    discount_rate: float = 0.05
    study_period_years: int = 5
    start_year: int = 2020

    def __post_init__(self) -> None:
        if not 0 <= self.discount_rate < 1:
            raise ConfigurationError(f"discount rate must be in [0, 1), got {self.discount_rate}")
        if int(self.study_period_years) != self.study_period_years or self.study_period_years < 1:
            raise ConfigurationError(f"study period must be an integer >= 1, got {self.study_period_years}")


@dataclass(frozen=True)
class AssetCost:
    capex_per_satellite: float
    opex_annual_per_satellite: float
    asset_npv: float


def _check_count(satellite_count: int) -> None:
    if isinstance(satellite_count, bool) or int(satellite_count) != satellite_count or satellite_count < 1:
        raise InvalidInputError(f"satellite count must be an integer >= 1, got {satellite_count!r}")


def capex_total(book: CostBook, satellite_count: int) -> float:
    """Fleet capex: per-satellite launch and build plus the one-off fleet items."""
    _check_count(satellite_count)
    per_sat = book.launch_per_satellite + book.satellite_build
    return satellite_count * per_sat + book.ground_station + book.digital_infrastructure + book.spectrum + book.regulation_fees


def opex_annual(book: CostBook, satellite_count: int) -> float:
    """Fleet opex per year. Independent of fleet size with the shipped books."""
    _check_count(satellite_count)
    return (
        book.staff_annual
        + book.research_development_annual
        + book.marketing_acquisition_annual
        + book.maintenance_annual
    )


def discount_factors(discount_rate: float, years: int) -> list[float]:
    """``1/(1+r)^t`` for t = 0..years (years + 1 terms)."""
    if discount_rate <= -1:
        raise InvalidInputError(f"discount rate must be > -1, got {discount_rate}")
    return [(1.0 + discount_rate) ** -t for t in range(years + 1)]


def asset_npv(capex: float, opex_annual: float, assumptions: FinancialAssumptions = FinancialAssumptions()) -> float:
    """Capex plus opex discounted over t = 0..Y inclusive."""
    if capex < 0 or opex_annual < 0:
        raise InvalidInputError("capex and opex must be >= 0")
    factors = discount_factors(assumptions.discount_rate, assumptions.study_period_years)
    return capex + sum(opex_annual * f for f in factors)


def allocate_per_satellite(
    book: CostBook,
    satellite_count: int,
    assumptions: FinancialAssumptions = FinancialAssumptions(),
) -> AssetCost:
    """Spread fleet capex and opex evenly over satellites and take the NPV."""
    capex = capex_total(book, satellite_count) / satellite_count
    opex = opex_annual(book, satellite_count) / satellite_count
    return AssetCost(capex, opex, asset_npv(capex, opex, assumptions))


def npv_schedule(
    book: CostBook,
    satellite_count: int,
    assumptions: FinancialAssumptions = FinancialAssumptions(),
) -> list[dict]:
    """Per-year discounted opex terms for one satellite, for itemised reports."""
    cost = allocate_per_satellite(book, satellite_count, assumptions)
    factors = discount_factors(assumptions.discount_rate, assumptions.study_period_years)
    return [
        {
            "t": t,
            "year": assumptions.start_year + t,
            "discount_factor": f,
            "opex_per_satellite_musd": cost.opex_annual_per_satellite,
            "discounted_opex_musd": cost.opex_annual_per_satellite * f,
        }
        for t, f in enumerate(factors)
    ]
