"""Exception hierarchy.

Failed verifications are reported through CheckReport objects; the exceptions
below signal violated preconditions or malformed input.
"""

from typing import Iterable, Optional


class CourantKitError(ValueError):
    """Base class for every error raised by courantkit."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class SingularMatrix(CourantKitError):
    """Determinant vanishes identically."""


class NotInSpan(CourantKitError):
    """The augmented linear system is inconsistent."""


class RankDeficient(CourantKitError):
    """Spanning set is generically linearly dependent."""


class HostMismatch(CourantKitError):
    """Sections belong to different bundles."""


class HypothesisFailure(CourantKitError):
    """A theorem hypothesis (algebroid or bialgebroid axioms) does not hold."""


class NotTransverse(CourantKitError):
    pass


class NotIsotropic(CourantKitError):
    pass


class NotIntegrable(CourantKitError):
    pass


class NotHamiltonian(CourantKitError):
    pass


class NotNullDirac(CourantKitError):
    pass


class NotPoisson(CourantKitError):
    pass


class ModelSyntaxError(CourantKitError):
    """Parse failure with a position and the set of tokens that would have been accepted."""

    def __init__(self, message: str, line: int = 1, column: int = 1,
                 expected: Optional[Iterable[str]] = None):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected or ())))
        detail = f"line {line}, column {column}: {message}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class ResolutionError(CourantKitError):
    """A model file refers to a name that was never declared."""


class ShapeError(CourantKitError):
    """Ranks or dimensions disagree."""
