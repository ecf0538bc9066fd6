"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`QSError`.
The CLI maps :class:`UnsupportedInput` subclasses to exit code 2 and
:class:`ParseError` to exit code 3.
"""


class QSError(Exception):
    pass


class UnknownVariable(QSError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class NonMonicDivisor(QSError, ValueError):
    pass


class DimensionMismatch(QSError, ValueError):
    pass


class NotIdempotent(QSError, ValueError):
    pass


class NotSplitPair(QSError, ValueError):
    pass


class MiddleMismatch(QSError, ValueError):
    pass


class SingularMatrix(QSError, ValueError):
    pass


class NotRecognizedUnit(QSError, ValueError):
    pass


class NotInLocalization(QSError, ValueError):
    """An element was expected in R(x) or R[x] for the given point ideal."""


class ResidueMismatch(QSError, ArithmeticError):
    """An internal consistency check of the Horrocks pipeline failed."""


class PolynomialPartSolveError(QSError, ArithmeticError):
    """The system [F*A'] = I could not be solved over the local ring."""


class DenominatorInIdeal(QSError, ArithmeticError):
    pass


class MismatchedE(QSError, ValueError):
    pass


class NotBezout(QSError, ValueError):
    pass


class NotUnitTranslation(QSError, ValueError):
    pass


class VerificationFailed(QSError, ArithmeticError):
    def __init__(self, report):
        super().__init__(str(report))
        self.report = report


class UnsupportedInput(QSError):
    pass


class NonRationalLocus(UnsupportedInput):
    pass


class UnsupportedDimension(UnsupportedInput):
    pass


class NotUnimodular(UnsupportedInput):
    pass


class ParseError(QSError, ValueError):
    pass
