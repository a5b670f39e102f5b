"""Exception hierarchy shared by every module."""


class RealismError(Exception):
    """Base class for errors raised by this package."""


class DomainError(RealismError, ValueError):
    """An input violates a documented precondition or invariant.

    ``invariant`` names the violated condition when one applies, so that the
    CLI can report it verbatim.
    """

    def __init__(self, message, invariant=None):
        super().__init__(message)
        self.invariant = invariant


class InvalidStateError(DomainError):
    """A matrix or Bloch vector does not describe a physical state."""


class NumericError(RealismError, ArithmeticError):
    """A numerical routine failed to converge or stagnated."""
