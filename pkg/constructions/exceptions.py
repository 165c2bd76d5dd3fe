"""
Exceptions raised by the triangulation builders.
"""
from triangulations.exceptions import ParseError, TriangulationError


class ConstructionError(TriangulationError):
    """The requested object cannot be built from the given parameters."""


class NotWellBalancedError(ConstructionError):
    """A surface decomposition breaks one of the three well-balanced conditions."""

    def __init__(self, condition: int, message: str):
        self.condition = condition
        super().__init__(f"condition {condition}: {message}")


class NameParseError(ParseError):
    """A family name such as ``B[T7|1,1|1,0]`` could not be parsed."""
