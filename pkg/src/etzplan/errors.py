"""Shared error taxonomy.

Every failure mode raised by this package derives from EtzError so callers
(service, CLI) can map exceptions onto a stable wire-level error code.
"""

from __future__ import annotations


class EtzError(Exception):
    """Base class for all package errors."""

    code = "Internal"


class DomainError(EtzError, ValueError):
    """An input lies outside the mathematical domain of an operation."""

    code = "DomainError"


class BracketError(DomainError):
    """A root-finding bracket does not straddle a sign change."""

    code = "DomainError"


class DecompositionError(DomainError):
    """A decomposed variance component came out negative.

    Signals inconsistent input variances or a violated independence
    assumption between the intercept and trajectory components; the offending
    component is reported rather than clamped.
    """

    code = "DecompositionError"

    def __init__(self, component: str, value: float):
        self.component = component
        self.value = value
        super().__init__(
            f"decomposed component {component} is negative ({value:.6g}); "
            "the variance triple is incompatible with the model"
        )


class NotApplicable(EtzError):
    """A precondition fails in a way the caller is expected to handle."""

    code = "DomainError"


class InfeasiblePlan(EtzError):
    """No valid plan or design satisfies the request."""

    code = "Infeasible"


class ParseError(EtzError):
    """A document failed schema validation."""

    code = "ParseError"

    def __init__(self, field_path: str, message: str = ""):
        self.field_path = field_path
        self.reason = message or "invalid or missing field"
        super().__init__(f"{field_path}: {self.reason}" if field_path else self.reason)


class NotFound(EtzError):
    code = "NotFound"


class Conflict(EtzError):
    code = "Conflict"


class TooLarge(EtzError):
    """A simulation request exceeds the configured size budget."""

    code = "TooLarge"
