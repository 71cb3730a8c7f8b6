"""Exception types raised across the package."""


class LeaderTrackError(Exception):
    """Base class for all package errors."""


class ContractViolation(LeaderTrackError, ValueError):
    """A precondition of a public operation was not met."""


class ParseError(LeaderTrackError, ValueError):
    """Malformed input record. The message carries ``file:line`` when known."""

    def __init__(self, message: str, path: str | None = None, lineno: int | None = None):
        self.path = path
        self.lineno = lineno
        prefix = ""
        if path is not None:
            prefix = f"{path}:{lineno}: " if lineno is not None else f"{path}: "
        elif lineno is not None:
            prefix = f"line {lineno}: "
        super().__init__(prefix + message)


class EmptyNetworkError(LeaderTrackError, ValueError):
    """Ingestion produced no usable edges."""


class UndefinedObjectiveError(LeaderTrackError, ArithmeticError):
    """An objective (IC, modularity) was evaluated where it is not defined."""


class ConfigError(LeaderTrackError, ValueError):
    """Invalid generator or run configuration."""


class InvariantError(LeaderTrackError, AssertionError):
    """A structural invariant of a produced result does not hold."""
