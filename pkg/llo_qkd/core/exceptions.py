"""Exceptions raised by the key-rate model."""

from typing import TYPE_CHECKING, List, Optional

if TYPE_CHECKING:
    from llo_qkd.models.schemas import Violation


class KeyRateError(Exception):
    """Base class for all model errors."""


class ParseError(KeyRateError):
    """The scenario document is not a well-formed JSON object."""


class ValidationError(KeyRateError):
    """A scenario violates one or more parameter invariants."""

    def __init__(self, violations: List["Violation"]):
        self.violations = violations
        self.field: Optional[str] = violations[0].field if violations else None
        super().__init__("; ".join(f"{v.field}: {v.rule}" for v in violations) or "invalid scenario")


class DomainError(KeyRateError, ValueError):
    """An argument lies outside the domain of a formula."""


class InconsistentBudget(KeyRateError, ValueError):
    """The trusted part of the noise exceeds the total excess noise."""


class NonPhysical(KeyRateError):
    """Symplectic spectrum is not that of a physical state."""
