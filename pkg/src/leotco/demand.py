"""Demand dimensioning: adoption, busy-hour overbooking, per-user capacity and cost.

A zero active-user density has no finite per-user figure; those cases return
``None`` (the "uncontended" marker) instead of infinity so outputs stay finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from leotco.errors import InvalidInputError

UNCONTENDED = "uncontended"

CostMode = Literal["active", "subscriber"]
COST_MODES = ("active", "subscriber")


@dataclass(frozen=True)
class DemandScenario:
    """Adoption scenario. Supply exactly one of the two densities."""

    adoption_rate: float = 1.0  # percent
    overbooking_factor: float = 20.0
    population_density: float | None = None  # people/km²
    subscriber_density: float | None = None  # users/km²

    def __post_init__(self) -> None:
        if not self.adoption_rate > 0:
            raise InvalidInputError(f"adoption rate must be > 0, got {self.adoption_rate}")
        if not self.overbooking_factor >= 1:
            raise InvalidInputError(f"overbooking factor must be >= 1, got {self.overbooking_factor}")
        if (self.population_density is None) == (self.subscriber_density is None):
            raise InvalidInputError("give exactly one of population_density or subscriber_density")
        density = self.population_density if self.population_density is not None else self.subscriber_density
        if not density >= 0:
            raise InvalidInputError(f"density must be >= 0, got {density}")

    def subscribers(self) -> float:
        if self.subscriber_density is not None:
            return self.subscriber_density
        return subscriber_density(self.population_density, self.adoption_rate)


@dataclass(frozen=True)
class DemandResult:
    subscriber_density: float
    active_user_density: float
    capacity_per_user: float | None  # Mbps; None when uncontended
    cost_per_user: float | None  # US$; None when uncontended

    @property
    def uncontended(self) -> bool:
        return self.active_user_density == 0


def subscriber_density(population_density: float, adoption_rate: float) -> float:
    """Subscribers per km² at an adoption rate given in percent."""
    if population_density < 0 or adoption_rate < 0:
        raise InvalidInputError("population density and adoption rate must be >= 0")
    return population_density * adoption_rate / 100.0


def active_users(subscriber_density: float, overbooking_factor: float = 20.0) -> float:
    """Busy-hour active users per km²."""
    if overbooking_factor < 1:
        raise InvalidInputError(f"overbooking factor must be >= 1, got {overbooking_factor}")
    if subscriber_density < 0:
        raise InvalidInputError("subscriber density must be >= 0")
    return subscriber_density / overbooking_factor


def capacity_per_user(area_capacity: float, active_user_density: float) -> float | None:
    """Mbps per busy-hour user, or ``None`` if nobody is active."""
    if active_user_density < 0 or area_capacity < 0:
        raise InvalidInputError("area capacity and active density must be >= 0")
    if active_user_density == 0:
        return None
    return area_capacity / active_user_density


def cost_per_user(asset_npv_usd: float, coverage_area: float, user_density: float) -> float:
    """Asset NPV (US$) spread over the users inside one satellite footprint."""
    if asset_npv_usd < 0:
        raise InvalidInputError("asset NPV must be >= 0")
    denominator = coverage_area * user_density
    if not coverage_area > 0 or not user_density > 0 or not math.isfinite(denominator):
        raise InvalidInputError(
            f"cost per user needs positive coverage area and user density, got {coverage_area}, {user_density}"
        )
    return asset_npv_usd / denominator


def evaluate(
    subscribers: float,
    area_capacity_mbps_km2: float,
    asset_npv_usd: float,
    coverage_area_km2: float,
    overbooking_factor: float = 20.0,
    cost_mode: CostMode = "active",
) -> DemandResult:
    """Per-user capacity and cost at one subscriber density.

    ``cost_mode="active"`` divides the NPV by busy-hour active users;
    ``"subscriber"`` divides by all subscribers in the footprint.
    """
    if cost_mode not in COST_MODES:
        raise InvalidInputError(f"cost mode must be one of {COST_MODES}, got {cost_mode!r}")
    active = active_users(subscribers, overbooking_factor)
    cap = capacity_per_user(area_capacity_mbps_km2, active)
    if active == 0:
        cost = None
    else:
        cost = cost_per_user(asset_npv_usd, coverage_area_km2, active if cost_mode == "active" else subscribers)
    return DemandResult(subscribers, active, cap, cost)
