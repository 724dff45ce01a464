"""Stochastic coverage geometry of a constellation.

Satellites are treated as evenly partitioning the Earth's surface: each one
serves ``A_earth / n`` km², and a user sees its nearest satellite at half the
mean inter-satellite spacing horizontally, ``altitude`` vertically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from leotco.errors import InvalidInputError


@dataclass(frozen=True)
class PhysicalConstants:
    earth_surface_area: float = 510_072_000.0  # km²
    speed_of_light: float = 2.998e8  # m/s
    boltzmann: float = 1.38064852e-23  # J/K

    def __post_init__(self) -> None:
        for name in ("earth_surface_area", "speed_of_light", "boltzmann"):
            if not getattr(self, name) > 0:
                raise InvalidInputError(f"{name} must be positive")


DEFAULT_CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class GeometryResult:
    network_density: float  # satellites / km²
    coverage_area: float  # km² per satellite
    mean_separation: float  # km
    slant_path: float  # km


def _check_count(satellite_count: int) -> None:
    if isinstance(satellite_count, bool) or int(satellite_count) != satellite_count:
        raise InvalidInputError(f"satellite count must be an integer, got {satellite_count!r}")
    if satellite_count < 1:
        raise InvalidInputError(f"satellite count must be >= 1, got {satellite_count}")


def network_density(satellite_count: int, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Satellites per km² of Earth surface."""
    _check_count(satellite_count)
    return satellite_count / constants.earth_surface_area


def coverage_area(satellite_count: int, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Surface area served by one satellite, km²."""
    _check_count(satellite_count)
    return constants.earth_surface_area / satellite_count


def mean_separation(density: float) -> float:
    """Half the mean spacing between satellites (km) for a per-km² density."""
    if not density > 0 or not math.isfinite(density):
        raise InvalidInputError(f"density must be positive and finite, got {density}")
    return math.sqrt(1.0 / density) / 2.0


def slant_path(altitude: float, separation: float) -> float:
    """Terminal-to-satellite path length (km) from altitude and ground offset."""
    if not altitude > 0:
        raise InvalidInputError(f"altitude must be positive, got {altitude}")
    if not separation >= 0:
        raise InvalidInputError(f"mean separation must be >= 0, got {separation}")
    return math.hypot(altitude, separation)


def constellation_geometry(
    satellite_count: int,
    altitude_km: float,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
) -> GeometryResult:
    density = network_density(satellite_count, constants)
    separation = mean_separation(density)
    return GeometryResult(
        network_density=density,
        coverage_area=coverage_area(satellite_count, constants),
        mean_separation=separation,
        slant_path=slant_path(altitude_km, separation),
    )
