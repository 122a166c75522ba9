"""Exception types. Each maps to a CLI exit status."""


class ChebMomentsError(Exception):
    exit_code = 1


class InputError(ChebMomentsError, ValueError):
    """Bad arguments or mismatched objects."""

    exit_code = 2


class NumericError(ChebMomentsError, ArithmeticError):
    """A numeric tolerance, certification or cost guard failed."""

    exit_code = 3


class DataFormatError(ChebMomentsError, ValueError):
    """A text file could not be parsed."""

    exit_code = 4


class SieveCeilingError(NumericError):
    pass


class CertificationError(NumericError):
    pass


class CostGuardError(NumericError):
    pass
