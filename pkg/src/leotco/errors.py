"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """An argument is outside the domain of an operation."""


class ConfigurationError(ValueError):
    """A design, cost book, table or run configuration is invalid."""


class DataError(ValueError):
    """Input data (e.g. a region table) failed validation."""
