"""Exception hierarchy shared by the whole package.

Three failure families matter to callers (and map to CLI exit codes):
invalid input (1), resource budget exceeded (2), and internal consistency
failures that signal a bug rather than a user error (3).
"""

from __future__ import annotations


class CirculantError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(CirculantError):
    """The caller supplied arguments outside an operation's domain."""


class PrimePowerInput(InvalidInput):
    """A witness was requested for an order that admits no coprime split."""


class InvalidAction(InvalidInput):
    """A group action violates its invariants (gcd condition, bad exponents)."""


class BudgetExceeded(CirculantError):
    """An expansion would exceed the configured term budget."""

    def __init__(self, message: str, *, needed: int | None = None,
                 budget: int | None = None):
        super().__init__(message)
        self.needed = needed
        self.budget = budget


class ConsistencyError(CirculantError):
    """An internal cross-check failed.  Never a user error; always a bug."""


class NotRational(ConsistencyError):
    """A cyclotomic value expected to be a rational integer is not.

    Carries the residue left after reduction and, when known, the exponent
    vector of the offending polynomial term.
    """

    def __init__(self, order: int, remainder: tuple[int, ...],
                 exponent: tuple[int, ...] | None = None):
        detail = f"non-constant residue {remainder} modulo the order-{order} cyclotomic polynomial"
        if exponent is not None:
            detail += f" at exponent {exponent}"
        super().__init__(detail)
        self.order = order
        self.remainder = remainder
        self.exponent = exponent


class WitnessFailure(ConsistencyError):
    """A kernel witness product left the invariant monomial span."""
