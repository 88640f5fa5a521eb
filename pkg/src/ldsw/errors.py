"""Exception hierarchy shared by all modules."""


class LdswError(Exception):
    """Base class for library errors."""


class DivisionByZero(LdswError, ZeroDivisionError):
    pass


class DimensionMismatch(LdswError, ValueError):
    pass


class ZeroSequence(LdswError, ValueError):
    """Raised when an operation needs a sequence that is not identically zero."""


class InternalInconsistency(LdswError, RuntimeError):
    pass


class InvalidDiscount(LdswError, ValueError):
    pass


class NotStochastic(LdswError, ValueError):
    pass


class NotIrreducible(LdswError, ValueError):
    pass


class SpectralPreconditionViolated(LdswError, ValueError):
    pass


class NotBounded(LdswError, ValueError):
    pass


class RelationSearchInconclusive(LdswError):
    """Neither a relation nor independence could be certified within the search bound."""


class InvalidParameters(LdswError, ValueError):
    pass


class PreconditionViolated(LdswError, ValueError):
    pass


class HypothesisViolated(LdswError):
    pass


class NotRealValued(LdswError, ValueError):
    pass


class DimensionTooHigh(LdswError, ValueError):
    pass


class EnergyInconclusive(LdswError):
    """A decision needs a finite check beyond the configured horizon cap."""

    def __init__(self, message, thresholds=None):
        super().__init__(message)
        self.thresholds = dict(thresholds or {})


class ParseError(LdswError, ValueError):
    def __init__(self, message, line=None, column=None):
        loc = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + loc)
        self.line = line
        self.column = column


class IncompatibleMethod(LdswError, ValueError):
    pass
