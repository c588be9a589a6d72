"""Exception types shared across the package."""

from __future__ import annotations


class CayleyGapError(Exception):
    """Base class for all package-specific errors."""


class GroupValidationError(CayleyGapError):
    """A multiplication table violates a group axiom or is malformed."""


class ElementCapError(CayleyGapError):
    """A construction would exceed the configured element cap."""


class GeneratingSetError(CayleyGapError):
    """A generating set is empty, out of range, asymmetric, or non-generating."""


class SpecParseError(CayleyGapError):
    """A group or generator spec string does not match the grammar."""


class ConvergenceError(CayleyGapError):
    """The eigensolver failed to converge within its sweep cap."""


class DisconnectedGraphError(CayleyGapError):
    """An operation that requires a connected graph was given a disconnected one."""


class CapExceededError(CayleyGapError):
    """An exact search was requested beyond its configured size cap.

    Carries a machine-readable reason so reports can record the skip.
    """

    def __init__(self, cap_name: str, limit: int, needed: int):
        self.cap_name = cap_name
        self.limit = limit
        self.needed = needed
        super().__init__(
            f"{cap_name} cap exceeded: problem size {needed} > limit {limit}"
        )

    @property
    def reason(self) -> str:
        return f"cap:{self.cap_name}={self.limit},needed={self.needed}"
