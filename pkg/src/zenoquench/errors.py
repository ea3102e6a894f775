"""Exception types shared across the package."""


class ConfigError(Exception):
    """Base class for configuration problems (bad keys or values)."""


class MissingKeyError(ConfigError):
    """A required configuration key is absent."""

    def __init__(self, key: str):
        self.key = key
        super().__init__(f"missing required key '{key}'")


class InvalidValueError(ConfigError):
    """A parameter value violates its constraints."""

    def __init__(self, key: str, reason: str):
        self.key = key
        self.reason = reason
        super().__init__(f"invalid value for '{key}': {reason}")


class ConvergenceFailure(Exception):
    """The symmetric eigensolver failed to converge."""


class DegenerateFitError(Exception):
    """A least-squares fit produced a non-positive or non-finite slope."""
