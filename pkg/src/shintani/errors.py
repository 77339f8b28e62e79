"""Exception taxonomy shared by all modules."""


class ShintaniError(Exception):
    """Base class for all library errors."""


class SingularMatrix(ShintaniError):
    """Matrix with zero determinant where an invertible one is required."""


class DependentInput(ShintaniError):
    """Vectors required to be linearly independent are not."""


class ZeroDirection(ShintaniError):
    """A nonzero direction vector is required."""


class NonGenericDeformation(ShintaniError):
    """The rational deformation vector landed on a face hyperplane.

    A truly irrational deformation vector never does; the caller should
    re-sample and retry.
    """


class NotUnimodular(ShintaniError):
    """Integer matrix is not in SL_n(Z) where the action requires it."""


class NotStabilizer(ShintaniError):
    """Group element does not stabilize the given step function."""


class VHFailsForE1(ShintaniError):
    """The vanishing hypothesis for e_1 does not hold."""


class NonPositiveDenominator(ShintaniError):
    """A denominator vector has nonpositive weight; geometric expansion
    would not be graded-finite."""


class NotPIntegral(ShintaniError):
    """A rational number has p in its denominator where a p-integral
    value is required."""


class NonUnitDenominator(ShintaniError):
    """A denominator vector is not a p-unit multiple of a basis vector,
    so its transform has no invertible leading structure."""


class NotAMeasure(ShintaniError):
    """Division in the power-series ring failed: the pseudo-measure has
    a genuine pole and is not a measure."""


class PrecisionExhausted(ShintaniError):
    """The p-adic working precision is insufficient to decide a verdict."""


class TruncationTooSmall(ShintaniError):
    """The series truncation degree is too small for the requested moment."""


class SchemaError(ShintaniError):
    """Malformed JSON input for the CLI."""
