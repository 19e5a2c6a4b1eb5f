"""Exception hierarchy.

Each error that can reach the command line carries the process exit code
the CLI should return for it.
"""


class SpiralError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class DomainError(SpiralError, ValueError):
    """An argument lies outside the open interval where a formula is defined."""


class SubcriticalC2(DomainError):
    """C2 does not exceed the minimum of the barrier, so no arc exists."""

    exit_code = 3


class MultipleComponents(SpiralError):
    """The sublevel set {barrier < C2} is not a single interval."""


class ConvergenceError(SpiralError):
    """A numeric minimizer, root finder or expansion failed to converge."""


class QuadratureDisagreement(SpiralError):
    """The two independent quadrature routes disagree beyond tolerance."""

    exit_code = 5


class BracketBelowC2Min(DomainError):
    """A search bracket reaches down to (or below) the critical C2."""

    exit_code = 3


class DimensionMismatch(SpiralError, ValueError):
    """Input charts do not have the dimensions the construction expects."""


class UncertifiedInput(SpiralError, ValueError):
    """An input chart lacks a flag the construction relies on."""


class RankDeficient(SpiralError):
    """The finite-difference Jacobian is numerically rank deficient."""


class NotMaximalDimension(SpiralError, ValueError):
    """The Legendrian angle needs a chart with intrinsic dim equal to n."""


class CertificationFailure(SpiralError):
    """A flag claimed by a constructor failed its numeric certificate."""

    exit_code = 4


class SchemaError(SpiralError, ValueError):
    """A composition file does not satisfy the JSON schema."""

    exit_code = 2

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
