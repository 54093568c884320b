"""Exception types shared across the pipeline.

The CLI maps these onto its exit-code contract: ConfigError -> 1,
DataError -> 2, anything else -> 3.
"""


class InfodemicError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(InfodemicError):
    """Invalid configuration or command usage."""


class DataError(InfodemicError):
    """Malformed, missing, or inconsistent input data."""


class HydrationError(DataError):
    """Tweet lookup failed in a way that cannot be reported per-ID."""


class AuthenticationError(HydrationError):
    """The lookup endpoint rejected our credentials."""
