"""Exception hierarchy shared across the package.

Every error carries a stable machine-readable name (the class name) that the
CLI prints on stderr and maps to an exit code.
"""

from __future__ import annotations


class RelpropError(Exception):
    """Base class for all errors raised by this package."""

    @property
    def name(self) -> str:
        return type(self).__name__


class BadParams(RelpropError):
    """A parameter is outside its allowed domain."""


class EmptyInput(RelpropError):
    """An input collection that must be non-empty is empty."""


class SelfMatch(RelpropError):
    """A match record pairs an image with itself."""


class DuplicatePair(RelpropError):
    """The same unordered image pair appears more than once."""


class UnknownVertex(RelpropError):
    """A vertex id or index is not part of the graph."""


class NoDirectMatches(RelpropError):
    """The query has no supra-threshold match against any graph vertex."""


class DimensionMismatch(RelpropError):
    """Vector/operator shapes do not line up."""


class EmptyTruth(RelpropError):
    """A ground-truth entry has no relevant ids."""


class MissingTruth(RelpropError):
    """A query has no ground-truth entry."""


class UnknownQueryId(RelpropError):
    """A query id names no vertex of the graph."""


class ParseError(RelpropError):
    """An input file is malformed; the message names the file and line."""


class IoError(RelpropError):
    """An underlying filesystem operation failed."""
