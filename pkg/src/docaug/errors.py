"""Exception hierarchy shared by the whole package.

Every error carries a stable ``code`` string so callers (the CLI, the
bindings) can report machine-readable failure categories without matching
on Python class names.
"""

from __future__ import annotations


class AugmentError(Exception):
    """Base class for all errors raised by this package."""

    code = "ERROR"


class InvalidInputError(AugmentError):
    """A document (or document part) violates the data-model invariants."""

    code = "INVALID_INPUT"

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class InvalidRangeError(AugmentError):
    """A token range is empty, out of bounds, or crosses a sentence."""

    code = "INVALID_RANGE"


class InvalidPlanError(AugmentError):
    """An edit plan is malformed (unsorted, overlapping, or empty edits)."""

    code = "INVALID_PLAN"


class InvalidParamError(AugmentError):
    """An augmenter or pipeline parameter is outside its allowed domain."""

    code = "INVALID_PARAM"


class ParseError(AugmentError):
    """Input text (corpus file or resource file) could not be parsed."""

    code = "PARSE_ERROR"

    def __init__(self, message: str, *, path=None, line: int | None = None):
        loc = ""
        if path is not None:
            loc += f"{path}:"
        if line is not None:
            loc += f"line {line}: "
        elif loc:
            loc += " "
        super().__init__(loc + message)
        self.path = path
        self.line = line


class UnsupportedMWTError(ParseError):
    """Multiword-token or empty-node ids are not representable here."""

    code = "UNSUPPORTED_MWT"


class ResourceError(AugmentError):
    """Base class for resource loading and lookup failures.

    ``code`` may be overridden per instance so a wrapped loader error
    (say a PARSE_ERROR from a layout file) keeps its original code while
    still being classifiable as a resource failure.
    """

    code = "RESOURCE_ERROR"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class UnknownResourceError(ResourceError):
    """A resource id did not resolve to a file."""

    code = "UNKNOWN_RESOURCE"


class InvalidLayoutError(ResourceError):
    """A keyboard layout file violates layout invariants."""

    code = "INVALID_LAYOUT"


class InvalidResourceError(ResourceError):
    """A name-list or synonym file violates its invariants."""

    code = "INVALID_RESOURCE"


class DimMismatchError(ResourceError):
    """An embedding row has the wrong number of components."""

    code = "DIM_MISMATCH"


class ZeroVectorError(ResourceError):
    """An embedding row has zero norm and cannot be used for cosine."""

    code = "ZERO_VECTOR"


class OOVError(ResourceError):
    """A nearest-neighbour query word is not in the table vocabulary."""

    code = "OOV"
