"""Exception hierarchy.

Every mathematical precondition failure has its own class so the CLI can map
it onto an exit code without string matching.
"""


class HeightLabError(Exception):
    """Base class for all errors raised by heightlab."""


class PoleAtPoint(HeightLabError, ZeroDivisionError):
    """A rational function was evaluated where its denominator vanishes."""


class NotNilpotent(HeightLabError):
    pass


class NotCommuting(HeightLabError):
    def __init__(self, i, j, message=None):
        self.pair = (i, j)
        super().__init__(message or f"monodromy logarithms {i} and {j} do not commute")


class FiltrationNotPreserved(HeightLabError):
    pass


class NotInImage(HeightLabError):
    pass


class NotAdmissible(HeightLabError):
    """N(t) l = alpha(t) has no solution."""


class NotGluable(HeightLabError):
    def __init__(self, obstruction, message=None):
        self.obstruction = obstruction
        super().__init__(message or "blocks do not commute; obstruction is nonzero")


class BlockMismatch(HeightLabError):
    pass


class NotRestricted(HeightLabError):
    pass


class NotTorsion(HeightLabError):
    pass


class GenusTooSmall(HeightLabError):
    pass


class InvalidPair(HeightLabError):
    pass


class NotACocycle(HeightLabError):
    """A cochain handed in as a class representative fails d(x) = 0 or B-membership."""


class ValidationError(HeightLabError):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(p["message"] for p in self.problems))


class ParseError(HeightLabError):
    pass
