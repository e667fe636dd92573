"""Exception hierarchy shared by every module.

Each class carries a stable ``code`` so the CLI can report failures in a
machine-greppable way.
"""


class FiltennaError(Exception):
    code = "ERROR"


class GeometryError(FiltennaError, ValueError):
    """Physically impossible or unsupported geometry."""

    code = "GEOMETRY"


class DomainError(FiltennaError, ValueError):
    """Argument outside the domain of a formula."""

    code = "DOMAIN"


class IndexRangeError(FiltennaError, ValueError):
    """Order/root/identity index outside the supported table."""

    code = "RANGE"


class NoSolutionError(FiltennaError, ValueError):
    code = "NO_SOLUTION"


class GridTooCoarseError(DomainError):
    code = "GRID"


class SpecError(FiltennaError, ValueError):
    """Design-spec document failed validation."""

    code = "SPEC"


class ParseError(FiltennaError, ValueError):
    code = "PARSE"

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
