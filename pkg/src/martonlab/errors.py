"""Exception hierarchy.

Every failure the library can diagnose raises a subclass of
:class:`MartonlabError`, so callers can catch one root type.  Validation
failures double as ``ValueError`` and algorithmic failures as
``RuntimeError`` to stay friendly to generic handlers.
"""

__all__ = [
    "MartonlabError",
    "ValidationError",
    "NormalizationError",
    "PositivityError",
    "HermiticityError",
    "InfeasibleRates",
    "ConvergenceError",
    "SupportOverflowError",
]


class MartonlabError(Exception):
    """Root of the library's exception hierarchy."""


class ValidationError(MartonlabError, ValueError):
    """Malformed or inconsistent input data."""


class NormalizationError(ValidationError):
    """Probabilities or traces do not sum to one within tolerance."""


class PositivityError(ValidationError):
    """Negative probability mass or a non positive semidefinite operator."""


class HermiticityError(ValidationError):
    """Matrix expected to be Hermitian is not, within tolerance."""


class InfeasibleRates(MartonlabError, ValueError):
    """Rate or band-exponent constraints cannot be satisfied.

    The message names the first violated constraint.
    """


class ConvergenceError(MartonlabError, RuntimeError):
    """An iterative solver exceeded its iteration budget."""


class SupportOverflowError(MartonlabError, RuntimeError):
    """A distribution's support grew past the configured cap."""
