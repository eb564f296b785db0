"""Exception hierarchy.

The CLI maps each family onto an exit status: domain errors exit 1, usage
errors exit 2 and consistency errors exit 3.
"""


class HeatCountError(Exception):
    """Base class for every error raised by this package."""

    exit_status = 1
    kind = "error"


class DomainError(HeatCountError, ValueError):
    """Mathematically invalid request (divergent series, singular point...)."""

    exit_status = 1
    kind = "domain"


class DivergenceError(DomainError):
    kind = "divergence"


class SingularPointError(DomainError):
    kind = "singular_point"


class ResourceError(DomainError):
    """A configured size cap would be exceeded."""

    kind = "resource"


class UsageError(HeatCountError, ValueError):
    """Malformed input text (group spec, word, torus point...)."""

    exit_status = 2
    kind = "usage"


class ParseError(UsageError):
    kind = "parse"


class ConsistencyError(HeatCountError, ArithmeticError):
    """A numerical certificate failed (rounding residue, orthogonality)."""

    exit_status = 3
    kind = "consistency"


class DegeneracyError(ConsistencyError):
    kind = "degeneracy"


class SingularityWarning(UserWarning):
    """Marked point is not generic; the geometric prefactor is unavailable."""
