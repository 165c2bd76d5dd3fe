"""
Exceptions raised by the triangulation toolkit.

Routers translate these into ErrorResponse payloads; management commands
translate them into CommandError.
"""


class TriangulationError(Exception):
    """Base class for every error raised while building or analysing a triangulation."""


class InvalidGluingError(TriangulationError):
    """A gluing table entry breaks the face-pairing involution."""

    def __init__(self, message: str, tet: int = None, face: int = None):
        self.tet = tet
        self.face = face
        if tet is not None:
            message = f"{message} (tetrahedron {tet}, face {face})"
        super().__init__(message)


class ParseError(TriangulationError):
    """Text input (gluing table or signature) could not be parsed."""

    def __init__(self, message: str, line: int = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DisconnectedError(TriangulationError):
    """The operation needs a connected triangulation."""


class InvalidTriangulationError(TriangulationError):
    """The operation needs a closed, valid triangulation."""


class IllegalMoveError(TriangulationError):
    """An elementary move was requested at a site where its hypotheses fail."""


class UnsupportedSizeError(TriangulationError):
    """Input lies outside the range an algorithm is prepared to handle."""
