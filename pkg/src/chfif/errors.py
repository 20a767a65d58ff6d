"""Exception hierarchy.

Every error raised by the library derives from :class:`ChfifError`.  Input
problems additionally derive from :class:`ValidationError` so the CLI can map
them to a single exit status.
"""


class ChfifError(Exception):
    """Base class for all library errors."""


class ValidationError(ChfifError, ValueError):
    """Input violates a documented constraint."""


class NonIncreasingAbscissae(ValidationError):
    pass


class TooFewPoints(ValidationError):
    pass


class NonFiniteValue(ValidationError):
    pass


class ParameterConstraintViolation(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class IndexOutOfRange(ValidationError, IndexError):
    pass


class AbscissaOutOfDomain(ValidationError):
    pass


class AbscissaCollision(ValidationError):
    pass


class DegenerateOrdinates(ValidationError):
    pass


class DepthTooLarge(ValidationError):
    pass


class EvaluationTooCoarse(ChfifError):
    """Certified error bound could not be pushed below the requested tolerance."""


class HypothesisNotMet(ChfifError):
    """Inputs fall outside the configurations a prediction or comparison covers."""


class DegenerateLogarithm(ValidationError):
    pass


class DegenerateScales(ValidationError):
    pass


class GridTooCoarse(ValidationError):
    pass


class RangeMismatch(ValidationError):
    pass


class ConfigParseError(ChfifError):
    """Configuration document is malformed (bad syntax, missing keys, wrong types)."""


class IoFailure(ChfifError, OSError):
    """Reading or writing a file failed."""


class EmptySample(ValidationError):
    pass
