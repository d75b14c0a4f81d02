"""Exception types shared across the package."""


class GaclustError(Exception):
    """Base class for all package-specific errors."""


class ParseError(GaclustError):
    """Malformed input text; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EmptyInputError(ParseError):
    """Input contained no data lines."""


class ValidationError(GaclustError):
    """A parsed value violates a domain invariant."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigError(GaclustError):
    """A configuration value is missing, unknown, or out of range."""


class SceneSpecError(GaclustError):
    """A synthetic-scene specification is inconsistent."""


class InvariantViolation(GaclustError):
    """An internal data invariant was broken; signals a bug upstream."""


class DegenerateLabelingError(GaclustError):
    """A labeling has fewer than two non-empty clusters."""
