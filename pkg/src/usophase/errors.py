"""Exception hierarchy shared by every module."""

from __future__ import annotations


class UsoError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(UsoError, ValueError):
    pass


class FaceError(UsoError, ValueError):
    pass


class ArgumentError(UsoError, ValueError):
    pass


class ResourceError(UsoError):
    """A dense materialization or search budget would be exceeded."""


class ParseError(UsoError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidOrientation(UsoError, ValueError):
    """Outmaps disagree on the direction of some edge."""

    def __init__(self, message: str, edge=None, line: int | None = None):
        self.edge = edge
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotUsoError(UsoError, ValueError):
    pass


class NotUnionOfPhases(UsoError, ValueError):
    pass


class NotAMatching(UsoError, ValueError):
    pass


class NotHypervertex(UsoError, ValueError):
    pass


class GadgetError(UsoError, ValueError):
    pass
