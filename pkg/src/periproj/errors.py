"""Exception types shared across the package."""


class PeriprojError(Exception):
    """Base class for all package errors."""


class InvalidFactorError(PeriprojError):
    """Malformed factor description: bad table, bad coordinate, bad labels."""


class NormalFormError(PeriprojError):
    """Syllable data that cannot be normalized (e.g. invalid factor index)."""


class UnsupportedMetricError(PeriprojError):
    """Exact-metric operation requested on an extended generating set."""


class OutOfRangeError(PeriprojError):
    """A distance or search result could not be certified within the backend's range."""


class BallBudgetError(PeriprojError):
    """Ball enumeration exceeded the configured element budget."""


class ConfigError(PeriprojError):
    """Run configuration failed to parse or validate."""


class TheoremViolationError(PeriprojError):
    """A proved inequality failed on certified data: a build-failing defect."""
