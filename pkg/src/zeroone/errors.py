"""Exception hierarchy shared by all modules."""


class ZeroOneError(Exception):
    """Base class for library errors."""


class ParseError(ZeroOneError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{message} (line {line}, column {col})"
        super().__init__(message)


class SemanticsViolation(ZeroOneError):
    """An edge formula is reflexive or asymmetric on the evaluated domain."""


class EquivalenceViolation(SemanticsViolation):
    """An equality formula is not an equivalence relation on the kept domain."""


class WellDefinednessViolation(SemanticsViolation):
    """An edge formula distinguishes representatives of the same class."""


class CapExceeded(ZeroOneError):
    """An exact solver or enumeration was asked to go beyond its size cap."""


class UnsupportedFragment(ZeroOneError):
    """The formula uses constructs outside the decider's language."""
