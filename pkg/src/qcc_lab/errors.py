"""Exception types shared across the package."""

from __future__ import annotations


class QccLabError(Exception):
    """Base class for all package errors."""


class InvariantError(QccLabError, ValueError):
    """A value failed one of its declared invariants."""


class DimensionMismatchError(InvariantError):
    """Operands have incompatible dimensions."""


class PromiseViolationError(QccLabError, ValueError):
    """An input pair violates the agree-everywhere-or-on-half promise."""


class ProtocolError(QccLabError, RuntimeError):
    """A protocol produced an ill-formed action or deadlocked."""


class NonHaltingError(ProtocolError):
    """A run exceeded its bit budget.  Carries the partial transcript."""

    def __init__(self, message: str, partial_transcript=None):
        super().__init__(message)
        self.partial_transcript = partial_transcript


class PartitionError(QccLabError, RuntimeError):
    """Input partitioning failed.  Carries a witness input when known."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
