"""Techno-economic simulation of LEO broadband constellations.

Coverage geometry, Monte Carlo downlink budget, MODCOD capacity, cost NPV
and per-user capacity/cost under demand scenarios.
"""

from leotco.errors import ConfigurationError, DataError, InvalidInputError

__version__ = "0.1.0"

__all__ = ["ConfigurationError", "DataError", "InvalidInputError", "__version__"]
