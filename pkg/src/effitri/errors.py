"""Exception hierarchy shared by all modules."""


class EffitriError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(EffitriError):
    """Input rejected before any computation (exit code 2 in the CLI)."""


class TriSyntaxError(InvalidInput):
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


class InvolutionViolation(InvalidInput):
    pass


class SelfGluedFace(InvalidInput):
    pass


class IndexOutOfRange(InvalidInput):
    pass


class EmptyTriangulation(InvalidInput):
    pass


class NotClosed(InvalidInput):
    pass


class NotOrientable(InvalidInput):
    pass


class NotManifold(InvalidInput):
    pass


class IllegalMove(InvalidInput):
    pass


class BudgetExceeded(InvalidInput):
    pass


class MatchingViolated(InvalidInput):
    pass


class NotAdmissible(InvalidInput):
    pass


class PreconditionNot0Efficient(InvalidInput):
    pass


class SafetyCapExceeded(EffitriError):
    pass
