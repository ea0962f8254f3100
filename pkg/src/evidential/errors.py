"""Exception hierarchy shared by every engine in the package."""

from __future__ import annotations


class EvidentialError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(EvidentialError):
    """Malformed knowledge-language text.

    ``line`` and ``column`` are 1-based and point at the offending token.
    """

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class SignatureError(ParseError):
    """Undeclared constant or predicate, or an arity mismatch."""


class ReasoningError(EvidentialError):
    """An evaluation could not be carried out."""


class AtomBudgetExceeded(ReasoningError):
    def __init__(self, count: int, budget: int):
        self.count = count
        self.budget = budget
        super().__init__(f"{count} ground atoms exceeds the atom budget of {budget}")


class InconsistentEvidence(EvidentialError):
    """Raised when a certain sentence would make the evidence base inconsistent."""


class MissingItem(EvidentialError):
    pass


class ConsistentTheory(EvidentialError):
    """Raised when inconsistent-core extraction is asked of a consistent theory."""


class BoundExceeded(ReasoningError):
    """A search bound (defaults, derivation steps) was exceeded."""


class StepBoundExceeded(BoundExceeded):
    def __init__(self, trace, unreached):
        self.trace = trace
        self.unreached = tuple(unreached)
        names = ", ".join(str(g) for g in self.unreached)
        super().__init__(f"step bound exhausted; unreached goals: {names}")
