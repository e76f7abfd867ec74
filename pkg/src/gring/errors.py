class GringError(Exception):
    """Base class for all library errors."""


class WordError(GringError, ValueError):
    pass


class DomainError(GringError, ValueError):
    """Mismatched coefficient domains or an operation the domain cannot do."""


class ParseError(GringError, ValueError):
    def __init__(self, message, pos=None, line=None):
        self.pos = pos
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if pos is not None:
            where.append(f"column {pos + 1}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class PreconditionError(GringError, ValueError):
    pass


class BudgetExceeded(GringError):
    """A bounded enumeration or search would exceed its configured budget.

    Callers must read this as "unknown", never as a mathematical "none".
    """


class ClaimViolation(GringError, AssertionError):
    """An internal invariant of the division algorithm failed.

    On a tree these cannot happen, so any instance is an implementation bug.
    """

    def __init__(self, claim, message):
        self.claim = claim
        super().__init__(f"claim {claim} violated: {message}")


class ConvergenceError(GringError):
    pass
