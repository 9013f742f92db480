"""Exception types shared across the package."""


class InfraSpectralError(Exception):
    """Base class for all library errors."""


class ParseError(InfraSpectralError):
    """Malformed or incomplete input file.

    Carries the 1-based line number of the offending row when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DimensionMismatchError(InfraSpectralError, ValueError):
    """Signal, basis, or filter lengths do not agree."""


class EigendecompositionError(InfraSpectralError):
    """Eigensolver failed or produced a basis outside tolerance."""


class DegenerateSignalError(InfraSpectralError):
    """Signal has no usable energy for the requested computation."""
