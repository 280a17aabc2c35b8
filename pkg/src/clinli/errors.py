"""Shared exception types."""


class ClinliError(Exception):
    """Base class for package errors."""


class ShapeError(ClinliError):
    """Operands do not conform for a tensor primitive."""

    def __init__(self, primitive: str, *shapes, detail: str = ""):
        self.primitive = primitive
        self.shapes = shapes
        msg = f"{primitive}: incompatible shapes {' vs '.join(str(tuple(s)) for s in shapes)}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ConfigError(ClinliError):
    """Invalid configuration value or unknown key."""


class DataFormatError(ClinliError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
