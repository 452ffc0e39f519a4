"""Exception types shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


class CommonGroundError(Exception):
    """Base class for all domain errors raised by this package."""


class ConflictDetected(CommonGroundError):
    """A proposition clashes with live content of equal or greater strength.

    Carried as a signal, not a crash: the acceptance machinery consumes it
    and records conflict evidence instead of asserting the content.
    """

    def __init__(self, clashes):
        self.clashes = tuple(clashes)  # pairs of clashing Literal objects
        super().__init__(f"contradictory literals: {self.clashes!r}")


class DuplicateUtterance(CommonGroundError):
    pass


class DanglingAntecedent(CommonGroundError):
    pass


class OrderingViolation(CommonGroundError):
    pass


class DefeatRejected(CommonGroundError):
    """Defeat requires strictly stronger evidence than the target holds."""


class UnknownProposition(CommonGroundError):
    pass


class BadPropositionSyntax(CommonGroundError):
    pass


@dataclass(frozen=True)
class ParseIssue:
    """One parse problem, pinned to a 1-based line number."""

    line: int
    code: str
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.message} [{self.code}]"


class TranscriptError(CommonGroundError):
    """Raised when a transcript document fails to parse; carries every issue found."""

    def __init__(self, issues):
        self.issues = tuple(issues)
        super().__init__("; ".join(str(i) for i in self.issues))
