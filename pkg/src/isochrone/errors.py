"""Shared exception types, mapped to CLI exit codes."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of the operation."""


class InternalConsistencyError(RuntimeError):
    """A structural invariant that should always hold was violated.

    Signals an implementation bug (e.g. extended generators failing to
    cancel), never an expected runtime condition.
    """
