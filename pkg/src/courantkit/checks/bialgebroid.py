"""Bialgebroid compatibility: d_* is a derivation of the bracket on A."""

from itertools import combinations_with_replacement
from typing import Optional

from ..double import DoubleStructure
from ..reports import CheckReport
from ..sections import GradedSection
from .base import Check, formal_multipliers
from .courant_axioms import collect, section_inputs


def derivation_residual(D: DoubleStructure, X: GradedSection, Y: GradedSection) -> GradedSection:
    """d_*[X, Y] - L_X d_* Y + L_Y d_* X, a section of the second exterior power of A."""
    A, B = D.A, D.Astar
    return (
        B.differential(A.bracket(X, Y))
        - A.schouten(X, B.differential(Y))
        + A.schouten(Y, B.differential(X))
    ).with_host(A.name)


class BialgebroidCheck(Check):
    """Derivation property on frame pairs with formal multipliers."""

    def __init__(self, workers: int = 1):
        self.workers = workers

    def get_name(self) -> str:
        return "bialgebroid"

    def run(self, D: DoubleStructure) -> CheckReport:
        D.require_algebroids()
        report = self.new_report(D.name)
        multipliers = formal_multipliers(D.ring, 2, "f")
        pairs = list(combinations_with_replacement(range(D.rank), 2))
        inputs = section_inputs(D, pairs, multipliers, samples=0, arity=2)
        residuals = collect(
            D.ring, inputs,
            lambda e1, e2: derivation_residual(D, e1.X, e2.X),
            self.workers,
        )
        report.add_clause("derivation", residuals)
        return report


def check_bialgebroid(D: DoubleStructure, workers: int = 1) -> CheckReport:
    """Raises HypothesisFailure when either constituent is not a Lie algebroid."""
    return BialgebroidCheck(workers).run(D)


def is_bialgebroid(D: DoubleStructure) -> Optional[bool]:
    """True/False, or None when the constituents are not both algebroids."""
    if not (D.A.is_valid() and D.Astar.is_valid()):
        return None
    return check_bialgebroid(D).passed
