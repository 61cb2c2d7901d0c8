"""Exception hierarchy shared by all crfactor modules.

Two families matter to callers: InputError (bad arguments, malformed
files, violated preconditions) and ResourceLimit (the computation would
exceed a configured degree/index/dimension cap).  The CLI maps them to
exit codes 2 and 3 respectively.
"""


class CrfactorError(Exception):
    """Base class for all crfactor errors."""

    exit_code = 2


class InputError(CrfactorError):
    """Invalid input: bad arguments, files, or violated preconditions."""

    exit_code = 2


class ResourceLimit(CrfactorError):
    """The computation would exceed a configured resource cap."""

    exit_code = 3


class NotPrime(InputError):
    pass


class ReduciblePolynomial(InputError):
    pass


class DivisionByZero(InputError, ZeroDivisionError):
    pass


class FieldMismatch(InputError):
    pass


class FieldTooLarge(ResourceLimit):
    pass


class DegreeTooLarge(ResourceLimit):
    pass


class IndexTooLarge(ResourceLimit):
    pass


class DimensionTooLarge(ResourceLimit):
    pass


class NotNormal(InputError):
    pass


class NotIrreducible(InputError):
    pass


class NotCompletelyReducible(InputError):
    pass


class OddPowerField(InputError):
    pass


class UnsupportedFermatPrime(InputError):
    pass


class PreconditionViolated(InputError):
    pass
