"""Analytical design chain for dual-mode circular SIW filtering antennas."""
from .errors import (DomainError, FiltennaError, GeometryError, GridTooCoarseError, IndexRangeError,
                     NoSolutionError, ParseError, SpecError)

__version__ = "0.1.0"
