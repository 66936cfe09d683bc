"""Exception hierarchy.

Every error raised on bad user input derives from :class:`InputError` so the
CLI can map it to exit code 2 in one place.
"""


class EqMorseError(Exception):
    pass


class InputError(EqMorseError, ValueError):
    pass


class NotUnimodular(InputError):
    pass


class Unbounded(InputError):
    pass


class PolarizationError(InputError):
    pass


class NonIntegralWeight(InputError):
    pass


class NotConvex(InputError):
    pass


class SingularEvaluation(EqMorseError, ArithmeticError):
    pass


class ChamberInconsistency(EqMorseError):
    """Index coefficients disagree between chambers (corrupted input data)."""


class AssignmentAmbiguous(EqMorseError):
    pass


class OracleMismatch(EqMorseError):
    """Two independent computations of the same quantity disagree."""
