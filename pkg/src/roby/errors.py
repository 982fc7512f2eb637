"""Exception hierarchy.

Every error raised on bad user input derives from RobyError so the CLI can
map the whole family to exit code 2 and keep internal failures distinct.
"""


class RobyError(Exception):
    """Base class for all input, format, and contract violations."""


# -- vector / dataset construction ------------------------------------------

class DimensionMismatch(RobyError):
    """Vector lengths or array shapes disagree."""


class NonFiniteInput(RobyError):
    """An in-memory value is NaN or infinite."""


class EmptyInput(RobyError):
    """An operation received an empty sequence."""


class EmptyClass(RobyError):
    """A class index in [0, K) has no records, or K >= 2 is unsatisfiable."""


class LabelOutOfRange(RobyError):
    """A class label falls outside [0, K)."""


class DuplicateIndex(RobyError):
    """Two records share an index; identifiers must be unique."""


class InvalidSpec(RobyError):
    """A parameter violates its documented bounds (e.g. Minkowski p < 1)."""


# -- file formats ------------------------------------------------------------

class MalformedHeader(RobyError):
    """A file header does not match the expected layout."""


class RaggedRow(RobyError):
    """A CSV row has the wrong number of fields."""


class NonFiniteValue(RobyError):
    """A parsed file value is NaN, infinite, or not a number at all."""


class BadMagic(RobyError):
    """A binary file's magic or version does not match."""


class TruncatedFile(RobyError):
    """A binary file is shorter (or longer) than its header declares."""


class MissingColumn(RobyError):
    """A required table column is absent."""


class IoFailure(RobyError):
    """Writing an output file failed."""


# -- analysis ----------------------------------------------------------------

class LengthMismatch(RobyError):
    """Paired sequences have different lengths."""


class TooFewPoints(RobyError):
    """A correlation needs at least three points."""


class ZeroVariance(RobyError):
    """A correlation input is constant; the coefficient is undefined."""


class UnknownColumn(RobyError):
    """A named table column does not exist."""
