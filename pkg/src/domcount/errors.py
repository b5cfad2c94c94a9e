"""Exceptions shared across the package."""


class GuardExceeded(RuntimeError):
    """A configured resource guard (state count, memory, problem size) was hit.

    Raised before a computation starts thrashing; the message names the guard
    and the offending size.
    """


class VerificationError(RuntimeError):
    """A self-check found a mismatch between two independent computations."""
