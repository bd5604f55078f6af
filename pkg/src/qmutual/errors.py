"""Exception hierarchy.

Every error raised by the package derives from :class:`QmutualError`, and the
shape/value errors also derive from :class:`ValueError` so generic callers can
catch them the usual way.
"""


class QmutualError(Exception):
    """Base class for all package errors."""


class InvalidArgument(QmutualError, ValueError):
    """An argument outside the domain of the operation."""


class NotSquare(QmutualError, ValueError):
    pass


class NotHermitian(QmutualError, ValueError):
    pass


class NegativeEigenvalue(QmutualError, ValueError):
    pass


class NotPositive(QmutualError, ValueError):
    pass


class TraceNotOne(QmutualError, ValueError):
    pass


class DimMismatch(QmutualError, ValueError):
    pass


class LengthMismatch(QmutualError, ValueError):
    pass


class NotDistribution(QmutualError, ValueError):
    pass


class BlockShapeMismatch(QmutualError, ValueError):
    pass


class RankOutOfRange(QmutualError, ValueError):
    pass


class DecompositionMismatch(QmutualError, ValueError):
    pass


class NotTracePreserving(QmutualError, ValueError):
    pass


class NotStochastic(QmutualError, ValueError):
    pass


class InvalidPOVM(QmutualError, ValueError):
    pass


class UnknownChannel(QmutualError, ValueError):
    pass


class ParamOutOfRange(QmutualError, ValueError):
    pass


class EmptyStateSet(QmutualError, ValueError):
    pass


class EmptyFamily(QmutualError, ValueError):
    pass


class FormMismatch(QmutualError, ArithmeticError):
    """Two formulas that must agree for the same input did not."""


class ParseError(QmutualError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class ValidationError(QmutualError, ValueError):
    def __init__(self, field, message, defect=None):
        self.field = field
        self.defect = defect
        extra = f", defect {defect:.3g}" if defect is not None else ""
        super().__init__(f"{field}: {message}{extra}")
