"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: domain failures exit 1,
file/format problems exit 2, window exhaustion exits 3.
"""

from __future__ import annotations


class AmensweepError(Exception):
    """Base class for all package errors."""


class DomainError(AmensweepError):
    """A precondition on mathematical input was violated."""


class FormatError(AmensweepError):
    """A file could not be parsed or fails its schema."""


class WindowExhausted(AmensweepError):
    """A window-limited action is undefined on a needed simplex.

    Carries enough context to report which element/simplex fell off the
    window, so callers can advise enlarging it.
    """

    def __init__(self, message: str, *, element: str | None = None,
                 simplex: str | None = None):
        super().__init__(message)
        self.element = element
        self.simplex = simplex


class SynthesisFailure(WindowExhausted):
    """Measure synthesis could not reach its verified bound inside the window."""


class CertificateError(AmensweepError):
    """A certificate operation was used outside its contract."""
