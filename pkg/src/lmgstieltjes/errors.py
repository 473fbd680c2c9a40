"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end:
2 for a failed validation, 3 for numerical non-convergence and 4 for bad
input.
"""


class LMGError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 3


class InputError(LMGError, ValueError):
    exit_code = 4


class NumericalError(LMGError, ArithmeticError):
    exit_code = 3


class ValidationError(LMGError):
    exit_code = 2


class UZero(InputError):
    """The interaction strength U is zero, so gamma = t/U does not exist."""


class DegenerateRoute(InputError):
    """t = 0 gives gamma = 0; the classical Jacobi route must be used."""


class ParamOutOfRange(InputError):
    pass


class PoleCollision(InputError):
    pass


class RootOnSingularity(NumericalError):
    """A root (or charge) sits on one of the fixed poles."""


class SingularConfiguration(NumericalError):
    """Coincident charges or a charge on a fixed pole."""


class ComplexEigenvalue(NumericalError):
    pass


class DegenerateVanVleck(RuntimeWarning):
    """Two Van Vleck constants coincide within tolerance (reported, not fatal)."""


class RecurrenceResidual(NumericalError):
    pass


class NonRealRoot(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class EscapedInterval(NumericalError):
    pass


class VerificationFailed(ValidationError):
    pass
