"""Exception hierarchy shared by every module."""


class SymRamseyError(Exception):
    """Base class; the CLI maps subclasses to exit codes."""


class InvalidParams(SymRamseyError, ValueError):
    pass


class UndefinedTransform(SymRamseyError, ValueError):
    pass


class UndefinedForKind(SymRamseyError, ValueError):
    pass


class EmptyInput(SymRamseyError, ValueError):
    pass


class NoIdentity(SymRamseyError, ValueError):
    pass


class RegionRequiresPositiveEll(SymRamseyError, ValueError):
    pass


class ArityMismatch(SymRamseyError, ValueError):
    pass


class ZeroPolynomial(SymRamseyError, ValueError):
    pass


class NonIntegerCoefficients(SymRamseyError, ValueError):
    pass


class PolynomialParseError(SymRamseyError, ValueError):
    pass


class BoundExhausted(SymRamseyError):
    """No nested thresholds up to the probe bound; carries the failing tuple."""

    def __init__(self, counterexample, value=None):
        self.counterexample = tuple(counterexample)
        self.value = value
        super().__init__(f"no thresholds within bound; counterexample {self.counterexample} -> {value}")


class NotInjective(SymRamseyError, ValueError):
    pass


class SequenceMismatch(SymRamseyError, ValueError):
    pass


class DegenerateElement(SymRamseyError, ValueError):
    def __init__(self, j, image):
        self.j = j
        self.image = image
        super().__init__(f"element a_{j} is degenerate: T(a_{j}) = {image}")


class DegenerateElementWarning(UserWarning):
    pass


class DomainIncompatible(SymRamseyError, ValueError):
    pass


class MalformedCertificate(SymRamseyError, ValueError):
    pass
