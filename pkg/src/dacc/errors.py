"""Exception hierarchy shared by every stage of the pipeline."""


class DaccError(Exception):
    """Base class for all library errors."""


class SingularCurve(DaccError):
    pass


class PointNotOnCurve(DaccError):
    pass


class TorsionGenerator(DaccError):
    pass


class BadPrime(DaccError):
    pass


class PrecisionUnachievable(DaccError):
    pass


class DependentGenerators(DaccError):
    pass


class AmbiguousSign(DaccError):
    pass


class DomainError(DaccError, ValueError):
    pass


class ParityMismatch(DaccError):
    pass


class Inconclusive(DaccError):
    pass


class ZeroRegulator(DaccError):
    pass


class NonPositiveRatio(DaccError):
    pass


class ParseError(DaccError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class DuplicateLabel(DaccError):
    pass
