"""Exception hierarchy shared across the package."""


class AbilityRankError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(AbilityRankError):
    """Input stream cannot be read or decoded at all (fatal, not row-level)."""


class ConfigError(AbilityRankError):
    """Invalid configuration: alias cycles, bad ranges, contradictory flags."""


class EmptyDatasetError(AbilityRankError):
    """No papers or no authors remain where at least one of each is required."""


class NumericError(AbilityRankError):
    """A numeric computation produced NaN or is impossible (e.g. log of zero)."""


class UndefinedCorrelationError(AbilityRankError):
    """Correlation requested on constant input, where it is undefined."""
