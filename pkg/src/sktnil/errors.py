"""Exception types and the falsification log."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

logger = logging.getLogger("sktnil.falsification")


class SKTError(Exception):
    """Base class for all library errors."""


class ValidationError(SKTError, ValueError):
    """Input data violates an axiom (Jacobi, J^2 = -1, integrability, ...).

    ``axiom`` names the violated condition, ``witness`` is a concrete tuple,
    entry or vector showing the failure.
    """

    def __init__(self, axiom: str, message: str, witness=None):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"{axiom}: {message}")


class PreconditionError(SKTError, ValueError):
    """An operation was called on data outside its domain.

    ``condition`` is a stable short name, e.g. ``"center_vs_derived"``.
    """

    def __init__(self, condition: str, message: str):
        self.condition = condition
        super().__init__(f"{condition}: {message}")


class InternalInconsistencyError(SKTError, RuntimeError):
    """Two computations that must agree did not.  Always a bug."""


@dataclass
class FalsificationEvent:
    statement: str
    detail: str
    context: dict = field(default_factory=dict)


FALSIFICATION_EVENTS: list[FalsificationEvent] = []


def report_falsification(statement: str, detail: str, **context) -> FalsificationEvent:
    """Record that a proven statement failed on concrete data.

    These are theorems, so an event means a bug in this library (or a
    mistake in the theorem).  Either way it should be impossible to miss.
    """
    ev = FalsificationEvent(statement, detail, context)
    FALSIFICATION_EVENTS.append(ev)
    logger.error("FALSIFICATION of %s: %s | context=%r", statement, detail, context)
    return ev
