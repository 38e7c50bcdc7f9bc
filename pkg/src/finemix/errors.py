"""Error types shared by all finemix modules.

Every domain failure raises a DomainError subclass carrying a stable
``code`` string and a JSON-serializable ``payload`` so the CLI can emit
the diagnostic verbatim.
"""

from __future__ import annotations

from typing import Any


class DomainError(Exception):
    """Base class for all expected domain failures."""

    code = "DomainError"

    def __init__(self, message: str, **payload: Any):
        super().__init__(message)
        self.payload = payload

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self), **self.payload}


class CyclicTournament(DomainError):
    code = "CyclicTournament"


class NotAcyclic(DomainError):
    code = "NotAcyclic"


class IndexOutOfRange(DomainError):
    code = "IndexOutOfRange"


class BadBounds(DomainError):
    code = "BadBounds"


class EmptySummand(DomainError):
    code = "EmptySummand"


class NotFine(DomainError):
    code = "NotFine"


class VolumeMismatch(DomainError):
    code = "VolumeMismatch"


class BadIntersection(DomainError):
    code = "BadIntersection"


class MalformedEdgeRestriction(DomainError):
    code = "MalformedEdgeRestriction"


class SimplexCountMismatch(DomainError):
    code = "SimplexCountMismatch"


class NotATriangulation(DomainError):
    code = "NotATriangulation"


class MalformedTiling(DomainError):
    code = "MalformedTiling"


class MalformedRouting(DomainError):
    code = "MalformedRouting"


class NoRoutingFound(DomainError):
    code = "NoRoutingFound"


class InfeasibleScale(DomainError):
    code = "InfeasibleScale"


class UnsupportedDimension(DomainError):
    code = "UnsupportedDimension"


class InternalInvariantViolation(DomainError):
    code = "InternalInvariantViolation"
