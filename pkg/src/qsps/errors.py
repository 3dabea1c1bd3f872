"""Exception hierarchy shared by all qsps modules."""


class QspsError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(QspsError):
    pass


class EmptyAlphabet(QspsError):
    pass


class NotHomogeneous(QspsError):
    pass


class ZeroPolynomial(QspsError):
    pass


class UnknownVariable(QspsError):
    def __init__(self, name, position=None):
        self.name = name
        self.position = position
        super().__init__(f"unknown variable {name!r}" + (f" at position {position}" if position is not None else ""))


class ParseError(QspsError):
    """Raised on malformed DSL input; carries the offset and what was expected."""

    def __init__(self, message, position, expected=None):
        self.position = position
        self.expected = expected
        detail = f"{message} at position {position}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class OutOfRange(QspsError):
    pass


class InsufficientLevels(QspsError):
    pass


class BudgetExceeded(QspsError):
    pass


class AxiomViolation(QspsError):
    pass


class NotTemperleyLieb(QspsError):
    pass


class InconsistentCharacterizations(QspsError):
    """Internal check failure: the two Temperley-Lieb criteria disagreed."""


class TraceBelowTwo(QspsError):
    pass


class QOutOfRange(QspsError):
    pass


class NotGeneric(QspsError):
    pass


class NotUnitary(QspsError):
    pass


class DecompositionMismatch(QspsError):
    pass


class ZeroRowOrColumn(QspsError):
    pass


class NonUnitalSeries(QspsError):
    pass


class ImproperIdealWarning(UserWarning):
    """The quadratic generators span all of degree two; every higher fibre is zero."""
