"""Exception hierarchy shared across the package."""

from __future__ import annotations


class FeelgridError(Exception):
    """Base class for all errors raised by this package."""


# --- chart specs ---------------------------------------------------------


class SpecError(FeelgridError):
    """A chart specification could not be parsed or validated."""


class SpecSyntaxError(SpecError):
    """The spec text is not syntactically valid JSON."""


class UnsupportedMarkError(SpecError):
    """The spec requests a mark outside the supported subset."""


class MissingFieldError(SpecError):
    """A required encoding channel or property is absent."""


class SchemaMismatchError(SpecError):
    """An encoding references a column absent from the data schema."""


class TypeCoercionError(FeelgridError):
    """A data value failed to coerce to its column type."""

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        super().__init__(message)
        self.row = row
        self.column = column


# --- transforms and expressions ------------------------------------------


class ExpressionError(FeelgridError):
    """An expression failed to parse or evaluate.

    ``span`` is the (start, end) offset of the offending source text.
    """

    def __init__(self, message: str, span: tuple[int, int] = (0, 0)):
        super().__init__(message)
        self.span = span


class UnknownColumnError(FeelgridError):
    """A transform or calculation referenced a column that does not exist."""


class NonTemporalGroupByError(FeelgridError):
    """Resolution hierarchies require a temporal groupby column."""


# --- rendering and viewport -----------------------------------------------


class OutOfWindowError(FeelgridError):
    """A value fell outside the viewport windows during grid mapping."""


class NoFinerLayerError(FeelgridError):
    """Semantic zoom-in requested at the finest resolution layer."""


class NoCoarserLayerError(FeelgridError):
    """Semantic zoom-out requested at the coarsest resolution layer."""


class TooManySeriesError(FeelgridError):
    """More distinct series values than available tactile textures."""


# --- agent -----------------------------------------------------------------


class EmptyRangeError(FeelgridError):
    """A calculation's filtered range contained no rows."""


class PortTimeoutError(FeelgridError):
    """The external model endpoint did not answer in time."""


class PortSchemaError(FeelgridError):
    """The external model endpoint returned an invalid message."""


# --- bus --------------------------------------------------------------------


class UnknownTopicError(FeelgridError):
    """Publish attempted on a topic missing from the topic table."""


class SchemaViolationError(FeelgridError):
    """A payload failed its topic's schema check."""


class InvalidPatternError(FeelgridError):
    """A subscription pattern is malformed."""


# --- device protocol --------------------------------------------------------


class FramingError(FeelgridError):
    """A byte stream did not contain a complete, well-formed packet."""


class ChecksumMismatchError(FeelgridError):
    """A packet's checksum did not match its contents."""


class OversizeFrameError(FeelgridError):
    """A packet payload exceeds the protocol's size limits."""
