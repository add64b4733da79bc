"""Exception hierarchy shared by every module."""

from __future__ import annotations


class DbwError(Exception):
    """Base class for all errors raised by dbwidth."""


class GraphError(DbwError, ValueError):
    pass


class SelfLoopError(GraphError):
    pass


class ParallelEdgeError(GraphError):
    pass


class ParallelEdgesUnsupportedError(GraphError):
    pass


class InvalidEdgeError(GraphError):
    pass


class NotIdentifiableError(GraphError):
    pass


class GroundMismatchError(DbwError, ValueError):
    pass


class GroundTooLargeError(DbwError):
    """An exact engine was asked to work beyond its configured cap."""

    def __init__(self, engine: str, size: int, cap: int):
        super().__init__(f"{engine}: ground size {size} exceeds cap {cap}")
        self.engine = engine
        self.size = size
        self.cap = cap


class TooLargeError(GroundTooLargeError):
    """A brute-force oracle was asked to work beyond its cap."""


class UnknownCheckError(DbwError, KeyError):
    pass


class ParseError(DbwError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
