"""The double E = A + A* of a pair of algebroids in duality.

Sections of E are ``DoubleSection`` pairs (X, xi). The symmetric and
antisymmetric pairings, the bracket, the anchor rho and the operator D are
all computed from the two constituent algebroids without assuming any
compatibility between them.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import sympy

from .algebroid import LieAlgebroid
from .errors import (HypothesisFailure, NotInSpan, NotIntegrable, NotIsotropic,
                     NotTransverse, ShapeError)
from .linalg import determinant, invert_matrix, is_antisymmetric, solve_in_span, transpose
from .scalars import ZERO, ScalarRing, canonical, is_zero
from .sections import GradedSection, contract, dual_label

logger = logging.getLogger(__name__)

HALF = sympy.Rational(1, 2)


@dataclass(frozen=True)
class DoubleSection:
    """X + xi with X on A and xi on A*."""
    X: GradedSection
    xi: GradedSection

    def __add__(self, other: "DoubleSection") -> "DoubleSection":
        return DoubleSection(self.X + other.X, self.xi + other.xi)

    def __sub__(self, other: "DoubleSection") -> "DoubleSection":
        return DoubleSection(self.X - other.X, self.xi - other.xi)

    def __neg__(self) -> "DoubleSection":
        return DoubleSection(-self.X, -self.xi)

    def scale(self, factor) -> "DoubleSection":
        return DoubleSection(self.X.scale(factor), self.xi.scale(factor))

    def is_zero(self) -> bool:
        return self.X.is_zero() and self.xi.is_zero()

    def components(self) -> List[sympy.Expr]:
        return self.X.components() + self.xi.components()

    def swap(self) -> "DoubleSection":
        return DoubleSection(self.xi, self.X)

    def format(self, ring: ScalarRing) -> str:
        return f"A: {self.X.format(ring)} | A*: {self.xi.format(ring)}"


@dataclass(frozen=True)
class AnomalyReport:
    """Parts of the Jacobiator decomposition J = D T - (J1 + J2 + c.p.)."""
    J: DoubleSection
    DT: DoubleSection
    J1_cp: DoubleSection
    J2_cp: DoubleSection
    residual: DoubleSection

    @property
    def certified(self) -> bool:
        return self.residual.is_zero()

    def recomputed_residual(self) -> DoubleSection:
        return self.J - self.DT + (self.J1_cp + self.J2_cp)


@dataclass(frozen=True)
class DoubleStructure:
    """A pair (A, A*) over a common base, with A* relabelled as the dual of A.

    Attributes:
        A: Algebroid structure on the first factor
        Astar: Algebroid structure on the dual bundle (frame = dual frame of A)
        name: Label used in reports
    """
    A: LieAlgebroid
    Astar: LieAlgebroid
    name: str = "D"

    def __post_init__(self):
        if self.A.rank != self.Astar.rank:
            raise ShapeError(f"Ranks differ: {self.A.rank} vs {self.Astar.rank}")
        if self.A.ring != self.Astar.ring:
            raise ShapeError("Both algebroids must share the same coefficient ring")
        if self.Astar.name != self.A.dual_name:
            object.__setattr__(self, 'Astar', self.Astar.relabel(self.A.dual_name))

    @property
    def ring(self) -> ScalarRing:
        return self.A.ring

    @property
    def rank(self) -> int:
        return self.A.rank

    def flip(self) -> "DoubleStructure":
        """(A*, A), whose double is the same bundle with the factors exchanged."""
        return DoubleStructure(self.Astar, self.A, f"{self.name}^flip")

    # ------------------------------------------------------------------
    # Sections

    def section(self, X=None, xi=None) -> DoubleSection:
        """Build X + xi from component lists or sections (missing parts are zero)."""
        r = self.rank
        if X is None:
            X = self.A.zero_multivector(1)
        elif not isinstance(X, GradedSection):
            X = self.A.vector(X)
        if xi is None:
            xi = self.Astar.zero_multivector(1)
        elif not isinstance(xi, GradedSection):
            xi = self.Astar.vector(xi)
        if X.rank != r or xi.rank != r:
            raise ShapeError("Section rank does not match the double")
        return DoubleSection(X.with_host(self.A.name), xi.with_host(self.Astar.name))

    def from_components(self, components: Sequence) -> DoubleSection:
        r = self.rank
        return self.section(list(components[:r]), list(components[r:]))

    def frame(self) -> List[DoubleSection]:
        """e_1..e_r followed by eps^1..eps^r."""
        r = self.rank
        return (
            [self.section(X=self.A.frame_section(i)) for i in range(r)]
            + [self.section(xi=self.Astar.frame_section(i)) for i in range(r)]
        )

    def frame_labels(self) -> List[str]:
        r = self.rank
        return [f"e{i + 1}" for i in range(r)] + [f"eps{i + 1}" for i in range(r)]

    def zero_section(self) -> DoubleSection:
        return self.section()

    # ------------------------------------------------------------------
    # Pairings

    def _duality(self, xi: GradedSection, X: GradedSection) -> sympy.Expr:
        return self.A.pairing(xi.with_host(self.Astar.name), X.with_host(self.A.name))

    def pairing(self, e1: DoubleSection, e2: DoubleSection, sign: int = 1) -> sympy.Expr:
        """(e1, e2)_+ for sign=+1, (e1, e2)_- for sign=-1."""
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return canonical(HALF * (self._duality(e1.xi, e2.X) + sign * self._duality(e2.xi, e1.X)))

    def plus(self, e1: DoubleSection, e2: DoubleSection) -> sympy.Expr:
        return self.pairing(e1, e2, 1)

    def minus(self, e1: DoubleSection, e2: DoubleSection) -> sympy.Expr:
        return self.pairing(e1, e2, -1)

    # ------------------------------------------------------------------
    # Bracket, anchor, D

    def courant_bracket(self, e1: DoubleSection, e2: DoubleSection) -> DoubleSection:
        A, B = self.A, self.Astar
        m = GradedSection.scalar(self.rank, self.minus(e1, e2))
        X = (
            A.bracket(e1.X, e2.X)
            + B.lie_derivative(e1.xi, e2.X)
            - B.lie_derivative(e2.xi, e1.X)
            - B.differential(m)
        )
        xi = (
            B.bracket(e1.xi, e2.xi)
            + A.lie_derivative(e1.X, e2.xi)
            - A.lie_derivative(e2.X, e1.xi)
            + A.differential(m)
        )
        return DoubleSection(X.with_host(A.name), xi.with_host(B.name))

    def rho(self, e: DoubleSection) -> Tuple[sympy.Expr, ...]:
        a = self.A.anchor_vector(e.X)
        b = self.Astar.anchor_vector(e.xi)
        return tuple(canonical(u + v) for u, v in zip(a, b))

    def rho_apply(self, e: DoubleSection, f) -> sympy.Expr:
        return canonical(self.A.anchor_apply(e.X, f) + self.Astar.anchor_apply(e.xi, f))

    def vector_field_apply(self, v: Sequence, f) -> sympy.Expr:
        return canonical(sum(
            (c * sympy.diff(f, x) for c, x in zip(v, self.ring.symbols) if c != 0), ZERO,
        ))

    def script_D(self, f) -> DoubleSection:
        """D f = d_* f + d f."""
        g = GradedSection.scalar(self.rank, f)
        return DoubleSection(
            self.Astar.differential(g).with_host(self.A.name),
            self.A.differential(g).with_host(self.Astar.name),
        )

    def twisted_bracket(self, e: DoubleSection, h: DoubleSection) -> DoubleSection:
        """[e, h] + D (e, h)_+ (not antisymmetric)."""
        return self.courant_bracket(e, h) + self.script_D(self.plus(e, h))

    # ------------------------------------------------------------------
    # The function T

    def T_function(self, e1: DoubleSection, e2: DoubleSection, e3: DoubleSection) -> sympy.Expr:
        """(1/3) ([e1, e2], e3)_+ + c.p."""
        total = ZERO
        for a, b, c in ((e1, e2, e3), (e2, e3, e1), (e3, e1, e2)):
            total += self.plus(self.courant_bracket(a, b), c)
        return canonical(total / 3)

    def T_closed_form(self, e1: DoubleSection, e2: DoubleSection, e3: DoubleSection) -> sympy.Expr:
        """Closed form in terms of the constituent brackets and anchors."""
        A, B = self.A, self.Astar
        total = ZERO
        for a, b, c in ((e1, e2, e3), (e2, e3, e1), (e3, e1, e2)):
            m = self.minus(a, b)
            total += (
                self._duality(c.xi, A.bracket(a.X, b.X))
                + self._duality(B.bracket(a.xi, b.xi), c.X)
                + A.anchor_apply(c.X, m)
                - B.anchor_apply(c.xi, m)
            )
        return canonical(HALF * total)

    # ------------------------------------------------------------------
    # Jacobi anomaly

    def jacobiator(self, e1: DoubleSection, e2: DoubleSection, e3: DoubleSection) -> DoubleSection:
        br = self.courant_bracket
        return br(br(e1, e2), e3) + br(br(e2, e3), e1) + br(br(e3, e1), e2)

    def J1(self, e1: DoubleSection, e2: DoubleSection, e3: DoubleSection) -> DoubleSection:
        A, B = self.A, self.Astar
        form_part = (
            A.differential(B.bracket(e1.xi, e2.xi))
            - B.schouten(e1.xi, A.differential(e2.xi))
            + B.schouten(e2.xi, A.differential(e1.xi))
        )
        vector_part = (
            B.differential(A.bracket(e1.X, e2.X))
            - A.schouten(e1.X, B.differential(e2.X))
            + A.schouten(e2.X, B.differential(e1.X))
        )
        return DoubleSection(
            contract(e3.xi, vector_part.with_host(A.name)).with_host(A.name),
            contract(e3.X, form_part.with_host(B.name)).with_host(B.name),
        )

    def J2(self, e1: DoubleSection, e2: DoubleSection, e3: DoubleSection) -> DoubleSection:
        A, B = self.A, self.Astar
        m = GradedSection.scalar(self.rank, self.minus(e1, e2))
        dstar_m = B.differential(m).with_host(A.name)
        d_m = A.differential(m).with_host(B.name)
        xi = A.lie_derivative(dstar_m, e3.xi) + B.bracket(d_m, e3.xi)
        X = B.lie_derivative(d_m, e3.X) + A.bracket(dstar_m, e3.X)
        return DoubleSection(X.with_host(A.name), xi.with_host(B.name))

    def require_algebroids(self) -> None:
        for alg in (self.A, self.Astar):
            if not alg.is_valid():
                raise HypothesisFailure(f"{alg.name} is not a Lie algebroid", alg.report)

    def require_bialgebroid(self) -> None:
        """Raises HypothesisFailure unless (A, A*) is a Lie bialgebroid."""
        if not self.bialgebroid_report.passed:
            raise HypothesisFailure(f"{self.name} is not a Lie bialgebroid", self.bialgebroid_report)

    def jacobi_anomaly(self, e1: DoubleSection, e2: DoubleSection, e3: DoubleSection) -> AnomalyReport:
        """Decompose the Jacobiator as D T - (J1 + J2 + c.p.).

        Raises:
            HypothesisFailure: if either constituent fails the algebroid axioms
        """
        self.require_algebroids()
        J = self.jacobiator(e1, e2, e3)
        DT = self.script_D(self.T_function(e1, e2, e3))
        cyclic = ((e1, e2, e3), (e2, e3, e1), (e3, e1, e2))
        J1 = self.zero_section()
        J2 = self.zero_section()
        for a, b, c in cyclic:
            J1 = J1 + self.J1(a, b, c)
            J2 = J2 + self.J2(a, b, c)
        residual = J - DT + (J1 + J2)
        return AnomalyReport(J, DT, J1, J2, residual)

    # ------------------------------------------------------------------
    # Base tensor

    def base_tensor_matrix(self) -> List[List[sympy.Expr]]:
        """P^{ij} = <d x^i, d_* x^j> = sum_k a(e_k)^i a_*(eps^k)^j."""
        n, r = self.ring.dim, self.rank
        return [
            [canonical(sum((self.A.anchor[k][i] * self.Astar.anchor[k][j] for k in range(r)), ZERO))
             for j in range(n)]
            for i in range(n)
        ]

    def base_poisson_tensor(self) -> Optional[GradedSection]:
        """The base bivector, or None when a a_*^T is not skew."""
        P = self.base_tensor_matrix()
        if not is_antisymmetric(P):
            return None
        return GradedSection.from_matrix(P, "TM")

    # ------------------------------------------------------------------
    # Recovery from a pair of transverse Dirac subbundles

    def recover_bialgebroid(self, L1, L2) -> "DoubleStructure":
        """Induced pair of algebroids on two transverse Dirac subbundles.

        The pairing between L2 and L1 is <xi, X> = 2 (xi, X)_+; the dual
        frame of L2 is chosen so that this pairing is the identity.

        Raises:
            NotIsotropic: if either subbundle is not isotropic
            NotIntegrable: if either subbundle is not closed under the bracket
            NotTransverse: if L1 + L2 is not all of E at generic rank
        """
        from .dirac import require_dirac

        r = self.rank
        for L in (L1, L2):
            if len(L.spanning) != r:
                raise NotIsotropic(f"{L.name} has rank {len(L.spanning)}, a Dirac subbundle needs {r}")
            require_dirac(L)
        rows = [s.components() for s in list(L1.spanning) + list(L2.spanning)]
        if is_zero(determinant(rows)):
            raise NotTransverse(f"{L1.name} and {L2.name} are not transverse")

        u = list(L1.spanning)
        v = list(L2.spanning)
        G = [[canonical(2 * self.plus(v[j], u[i])) for j in range(r)] for i in range(r)]
        M = invert_matrix(transpose(G))
        eps = []
        for i in range(r):
            total = self.zero_section()
            for j in range(r):
                if M[i][j] != 0:
                    total = total + v[j].scale(M[i][j])
            eps.append(total)

        A1 = self._induced_algebroid(u, f"{L1.name}")
        A2 = self._induced_algebroid(eps, dual_label(L1.name))
        return DoubleStructure(A1, A2, f"{L1.name}+{L2.name}")

    def _induced_algebroid(self, frame: List[DoubleSection], name: str) -> LieAlgebroid:
        r = len(frame)
        anchor = [self.rho(s) for s in frame]
        span = [s.components() for s in frame]
        brackets = {}
        for i in range(r):
            for j in range(i + 1, r):
                b = self.courant_bracket(frame[i], frame[j])
                try:
                    brackets[(i, j)] = solve_in_span(b.components(), span)
                except NotInSpan:
                    raise NotIntegrable(f"[{i + 1},{j + 1}] escapes {name}")
        return LieAlgebroid.from_brackets(self.ring, r, anchor, brackets, name)

    def same_structure(self, other: "DoubleStructure") -> bool:
        """Equal anchors and structure tables on both factors."""
        return all(
            a.anchor == b.anchor and a.structure == b.structure
            for a, b in ((self.A, other.A), (self.Astar, other.Astar))
        )

    # ------------------------------------------------------------------
    # Verification entry points

    def check_courant_axioms(self, **kwargs):
        from .checks.courant_axioms import check_courant_axioms
        return check_courant_axioms(self, **kwargs)

    @cached_property
    def bialgebroid_report(self):
        from .checks.bialgebroid import check_bialgebroid
        return check_bialgebroid(self)

    def check_bialgebroid(self, **kwargs):
        from .checks.bialgebroid import check_bialgebroid
        return check_bialgebroid(self, **kwargs)

