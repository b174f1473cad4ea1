"""Structural checks on a single algebroid: axioms, subalgebroids, morphisms to algebras."""

from itertools import combinations
from typing import List, Sequence

from ..errors import NotInSpan, RankDeficient
from ..linalg import generic_rank, solve_in_span
from ..reports import CheckReport
from ..scalars import canonical
from ..sections import GradedSection
from .base import Check, formal_multipliers, frame_label, residual


class LieAlgebroidCheck(Check):
    """Jacobi identity on frame triples and the anchor-morphism identity on a formal f."""

    def get_name(self) -> str:
        return "lie-algebroid"

    def run(self, A) -> CheckReport:
        report = self.new_report(A.name)
        ring = A.ring

        jacobi = []
        for i, j, k in combinations(range(A.rank), 3):
            ei, ej, ek = (A.frame_section(t) for t in (i, j, k))
            total = (
                A.bracket(A.bracket(ei, ej), ek)
                + A.bracket(A.bracket(ej, ek), ei)
                + A.bracket(A.bracket(ek, ei), ej)
            )
            if not total.is_zero():
                jacobi.append(residual(ring, frame_label("e", (i, j, k)), total))
        report.add_clause("jacobi", jacobi)

        (f,) = formal_multipliers(ring, 1)
        anchor = []
        for i, j in combinations(range(A.rank), 2):
            lhs = A.anchor_apply(A.bracket_frame(i, j), f)
            rhs = A.frame_apply(i, A.frame_apply(j, f)) - A.frame_apply(j, A.frame_apply(i, f))
            value = canonical(lhs - rhs)
            if value != 0:
                anchor.append(residual(ring, frame_label("e", (i, j)), value))
        report.add_clause("anchor-morphism", anchor)
        return report


class SubalgebroidCheck(Check):
    """Closure of a spanning set under the bracket, over rational functions."""

    def get_name(self) -> str:
        return "subalgebroid"

    def run(self, subject) -> CheckReport:
        A, sections = subject
        report = self.new_report(A.name)
        vectors = [s.components() for s in sections]
        if generic_rank(vectors) < len(vectors):
            raise RankDeficient(f"{len(vectors)} sections of {A.name} are generically dependent")

        escaping = []
        for i, j in combinations(range(len(sections)), 2):
            b = A.bracket(sections[i], sections[j])
            if b.is_zero():
                continue
            try:
                solve_in_span(b.components(), vectors)
            except NotInSpan:
                escaping.append(residual(A.ring, f"[S{i + 1},S{j + 1}]", b))
        report.add_clause("closure", escaping)
        return report


class MorphismToAlgebraCheck(Check):
    """phi[X,Y] = a(X)(phi Y) - a(Y)(phi X) + [phi X, phi Y] on frame pairs."""

    def get_name(self) -> str:
        return "morphism-to-algebra"

    def run(self, m) -> CheckReport:
        report = self.new_report(m.name)
        failures = []
        for i, j in combinations(range(m.source.rank), 2):
            d = m.defect(i, j)
            if any(v != 0 for v in d):
                failures.append(residual(m.source.ring, frame_label("e", (i, j)), d))
        report.add_clause("bracket-compatibility", failures)
        return report


def check_lie_algebroid(A) -> CheckReport:
    return LieAlgebroidCheck().run(A)


def check_subalgebroid(A, sections: Sequence[GradedSection]) -> CheckReport:
    """Raises RankDeficient when the sections are generically dependent."""
    return SubalgebroidCheck().run((A, list(sections)))


def check_morphism_to_algebra(m) -> CheckReport:
    return MorphismToAlgebraCheck().run(m)
