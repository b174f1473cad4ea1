"""Base class and shared helpers for checkers."""

import logging
from abc import ABC, abstractmethod
from typing import Any, List, Sequence

import sympy

from ..reports import CheckReport, Residual
from ..scalars import ScalarRing, is_zero

logger = logging.getLogger(__name__)


class Check(ABC):
    """A named verification producing a CheckReport."""

    @abstractmethod
    def run(self, subject: Any) -> CheckReport:
        """Verify ``subject``.

        Args:
            subject: Object under test (algebroid, double, subbundle, ...)

        Returns:
            Report with one entry per clause
        """
        pass

    @abstractmethod
    def get_name(self) -> str:
        pass

    def new_report(self, subject: str) -> CheckReport:
        logger.debug("running %s on %s", self.get_name(), subject)
        return CheckReport(self.get_name(), subject)


def formal_multipliers(ring: ScalarRing, count: int, prefix: str = "f") -> List:
    """Fresh formal functions of all coordinates, avoiding declared names."""
    return [ring.formal(name) for name in ring.fresh_names(prefix, count)]


def residual(ring: ScalarRing, witness: str, value) -> Residual:
    """Print ``value`` (scalar, tuple of scalars, or any section type) canonically."""
    if isinstance(value, (sympy.Basic, int)):
        return Residual(witness, ring.format(value))
    if isinstance(value, (list, tuple)):
        return Residual(witness, "(" + ", ".join(ring.format(v) for v in value) + ")")
    return Residual(witness, value.format(ring))


def is_null(value) -> bool:
    if isinstance(value, (sympy.Basic, int)):
        return is_zero(value)
    if isinstance(value, (list, tuple)):
        return all(is_zero(v) for v in value)
    return value.is_zero()


def frame_label(prefix: str, indices: Sequence[int]) -> str:
    return ",".join(f"{prefix}{i + 1}" for i in indices)
