class TreeCountError(Exception):
    """Base class for every failure the toolkit reports."""

    exit_code = 1


class ValidationError(TreeCountError):
    """Custom validation error exception."""

    pass


class DisconnectedGraphError(TreeCountError):
    """Spectrum has more than one zero eigenvalue; use the exact oracle instead."""

    pass


class ResultTooLargeError(TreeCountError):
    """Exact mode refused: the count would exceed the configured bit cap."""

    pass


class NeedsMorePrecision(TreeCountError):
    """Enclosure too wide to isolate a single integer (escalation signal)."""

    exit_code = 3


class PrecisionExhaustedError(TreeCountError):
    """No certified integer could be isolated at the maximum precision."""

    exit_code = 3


class IntegralityError(TreeCountError):
    """A certified enclosure isolates no integer, or an exact division failed."""

    exit_code = 3


class QuadratureBudgetError(TreeCountError):
    """Requested quadrature tolerance was not reached within the refinement budget."""

    exit_code = 3


class TruncationBudgetError(TreeCountError):
    """A series truncation box grew beyond its budget."""

    exit_code = 3


class VerificationMismatch(TreeCountError):
    """Closed-form and oracle values disagree for at least one instance."""

    exit_code = 2
