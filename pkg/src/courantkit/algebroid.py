"""Lie algebroids over a trivialized polynomial base.

A ``LieAlgebroid`` fixes a global frame e_1..e_r; sections are ``GradedSection``
objects whose ``host`` is the algebroid name (multivectors) or the dual label
``name*`` (forms). Indices are 0-based in this API.
"""

import logging
from dataclasses import dataclass, replace
from functools import cached_property
from itertools import combinations
from typing import Dict, Mapping, Optional, Sequence, Tuple

import sympy

from .errors import HostMismatch, ShapeError
from .scalars import ZERO, ScalarRing, canonical
from .sections import GradedSection, contract, dual_label, pair

logger = logging.getLogger(__name__)

Table = Tuple[Tuple[Tuple[sympy.Expr, ...], ...], ...]


def _structure_from_brackets(rank: int, brackets: Mapping[Tuple[int, int], Sequence]) -> Table:
    table = [[[ZERO] * rank for _ in range(rank)] for _ in range(rank)]
    for (i, j), values in brackets.items():
        if i == j:
            raise ShapeError(f"Bracket [e{i + 1}, e{i + 1}] must not be given")
        if len(values) != rank:
            raise ShapeError(f"Bracket [e{i + 1}, e{j + 1}] needs {rank} components, got {len(values)}")
        for k, value in enumerate(values):
            table[i][j][k] = canonical(value)
            table[j][i][k] = canonical(-value)
    return tuple(tuple(tuple(row) for row in plane) for plane in table)


@dataclass(frozen=True)
class LieAlgebroid:
    """Anchor rows and structure functions of a framed algebroid.

    Attributes:
        ring: Coefficient ring (its coordinates are the base coordinates)
        rank: Number of frame sections
        anchor: ``anchor[i][mu]`` is the mu-th component of a(e_i)
        structure: ``structure[i][j][k]`` is the coefficient of e_k in [e_i, e_j]
        name: Bundle label used as section host
    """
    ring: ScalarRing
    rank: int
    anchor: Tuple[Tuple[sympy.Expr, ...], ...]
    structure: Table
    name: str = "A"

    def __post_init__(self):
        n, r = self.ring.dim, self.rank
        if r < 0:
            raise ShapeError("rank must be non-negative")
        if len(self.anchor) != r or any(len(row) != n for row in self.anchor):
            raise ShapeError(f"{self.name}: anchor must be {r}x{n}")
        if len(self.structure) != r or any(
            len(plane) != r or any(len(row) != r for row in plane) for plane in self.structure
        ):
            raise ShapeError(f"{self.name}: structure table must be {r}x{r}x{r}")
        object.__setattr__(self, 'anchor', tuple(tuple(canonical(a) for a in row) for row in self.anchor))
        object.__setattr__(self, 'structure', tuple(
            tuple(tuple(canonical(c) for c in row) for row in plane) for plane in self.structure
        ))
        for i in range(r):
            for j in range(i, r):
                for k in range(r):
                    if canonical(self.structure[i][j][k] + self.structure[j][i][k]) != 0:
                        raise ShapeError(
                            f"{self.name}: structure table is not antisymmetric at "
                            f"({i + 1},{j + 1};{k + 1})"
                        )

    # ------------------------------------------------------------------
    # Constructors

    @classmethod
    def from_brackets(cls, ring: ScalarRing, rank: int, anchor: Sequence[Sequence],
                      brackets: Mapping[Tuple[int, int], Sequence], name: str = "A") -> "LieAlgebroid":
        """Build from anchor rows and the brackets [e_i, e_j] listed for some pairs."""
        return cls(ring, rank, tuple(tuple(row) for row in anchor),
                   _structure_from_brackets(rank, brackets), name)

    @classmethod
    def tangent(cls, ring: ScalarRing, name: str = "TM") -> "LieAlgebroid":
        n = ring.dim
        anchor = [[1 if i == mu else 0 for mu in range(n)] for i in range(n)]
        return cls.from_brackets(ring, n, anchor, {}, name)

    @classmethod
    def zero(cls, ring: ScalarRing, rank: int, name: str = "A") -> "LieAlgebroid":
        return cls.from_brackets(ring, rank, [[0] * ring.dim for _ in range(rank)], {}, name)

    @classmethod
    def lie_algebra(cls, ring: ScalarRing, rank: int, brackets: Mapping[Tuple[int, int], Sequence],
                    name: str = "g") -> "LieAlgebroid":
        """Constant structure constants with zero anchor (a Lie algebra when the base is a point)."""
        return cls.from_brackets(ring, rank, [[0] * ring.dim for _ in range(rank)], brackets, name)

    def relabel(self, name: str) -> "LieAlgebroid":
        return replace(self, name=name)

    # ------------------------------------------------------------------
    # Sections

    @property
    def base_dim(self) -> int:
        return self.ring.dim

    @property
    def dual_name(self) -> str:
        return dual_label(self.name)

    def vector(self, components: Sequence) -> GradedSection:
        self._check_length(components)
        return GradedSection.from_components(components, self.name)

    def covector(self, components: Sequence) -> GradedSection:
        self._check_length(components)
        return GradedSection.from_components(components, self.dual_name)

    def frame_section(self, i: int) -> GradedSection:
        return GradedSection.basis(self.rank, i, self.name)

    def dual_frame_section(self, i: int) -> GradedSection:
        return GradedSection.basis(self.rank, i, self.dual_name)

    def function(self, value) -> GradedSection:
        return GradedSection.scalar(self.rank, value)

    def multivector(self, degree: int, coefficients: Mapping) -> GradedSection:
        return GradedSection.from_terms(self.rank, degree, coefficients.items(), self.name)

    def form(self, degree: int, coefficients: Mapping) -> GradedSection:
        return GradedSection.from_terms(self.rank, degree, coefficients.items(), self.dual_name)

    def zero_multivector(self, degree: int) -> GradedSection:
        return GradedSection.zero(self.rank, degree, self.name)

    def zero_form(self, degree: int) -> GradedSection:
        return GradedSection.zero(self.rank, degree, self.dual_name)

    def _check_length(self, components: Sequence) -> None:
        if len(components) != self.rank:
            raise ShapeError(f"{self.name}: expected {self.rank} components, got {len(components)}")

    def _check_host(self, section: GradedSection, host: str) -> None:
        if section.rank != self.rank:
            raise ShapeError(f"{self.name}: section has rank {section.rank}, expected {self.rank}")
        if section.host is not None and section.degree > 0 and section.host != host:
            raise HostMismatch(f"Section on {section.host} used where {host} is expected")

    # ------------------------------------------------------------------
    # Anchor

    def anchor_vector(self, X: GradedSection) -> Tuple[sympy.Expr, ...]:
        """Components of a(X) in the coordinate frame."""
        self._check_host(X, self.name)
        return tuple(
            canonical(sum((c * self.anchor[i][mu] for (i,), c in X.coefficients.items()), ZERO))
            for mu in range(self.base_dim)
        )

    def frame_apply(self, i: int, f) -> sympy.Expr:
        return canonical(sum(
            (a * sympy.diff(f, x) for a, x in zip(self.anchor[i], self.ring.symbols) if a != 0),
            ZERO,
        ))

    def anchor_apply(self, X: GradedSection, f) -> sympy.Expr:
        """The derivative a(X) f."""
        vec = self.anchor_vector(X)
        return canonical(sum(
            (v * sympy.diff(f, x) for v, x in zip(vec, self.ring.symbols) if v != 0), ZERO,
        ))

    # ------------------------------------------------------------------
    # Bracket on sections

    def bracket_frame(self, i: int, j: int) -> GradedSection:
        return GradedSection.from_components(self.structure[i][j], self.name)

    def bracket(self, X: GradedSection, Y: GradedSection) -> GradedSection:
        """Leibniz extension of the frame bracket to degree-1 sections."""
        self._check_host(X, self.name)
        self._check_host(Y, self.name)
        if X.degree != 1 or Y.degree != 1:
            raise ShapeError("bracket() needs degree-1 sections; use schouten() otherwise")
        terms = []
        for (i,), xi in X.coefficients.items():
            for (j,), yj in Y.coefficients.items():
                for k, c in enumerate(self.structure[i][j]):
                    if c != 0:
                        terms.append(((k,), xi * yj * c))
        for (j,), yj in Y.coefficients.items():
            terms.append(((j,), self.anchor_apply(X, yj)))
        for (i,), xi in X.coefficients.items():
            terms.append(((i,), -self.anchor_apply(Y, xi)))
        return GradedSection.from_terms(self.rank, 1, terms, self.name)

    # ------------------------------------------------------------------
    # Cartan calculus on forms

    def differential(self, omega: GradedSection) -> GradedSection:
        """Chevalley-Eilenberg differential of a form on the dual bundle."""
        self._check_host(omega, self.dual_name)
        k = omega.degree
        if k >= self.rank:
            return self.zero_form(k + 1)
        terms = []
        for I in combinations(range(self.rank), k + 1):
            value = ZERO
            for p, ip in enumerate(I):
                rest = I[:p] + I[p + 1:]
                coeff = omega.coefficient(rest)
                if coeff != 0:
                    value += (-1) ** p * self.frame_apply(ip, coeff)
            for p, q in combinations(range(k + 1), 2):
                rest = I[:p] + I[p + 1:q] + I[q + 1:]
                for m, c in enumerate(self.structure[I[p]][I[q]]):
                    if c != 0:
                        value += (-1) ** (p + q) * c * omega.coefficient((m,) + rest)
            terms.append((I, value))
        return GradedSection.from_terms(self.rank, k + 1, terms, self.dual_name)

    def interior(self, X: GradedSection, omega: GradedSection) -> GradedSection:
        """i_X omega, inserting X into the leading slot."""
        self._check_host(X, self.name)
        self._check_host(omega, self.dual_name)
        if omega.degree == 0:
            raise ShapeError("Cannot contract into a function")
        return contract(X, omega.with_host(self.dual_name))

    def pairing(self, xi: GradedSection, X: GradedSection) -> sympy.Expr:
        self._check_host(xi, self.dual_name)
        self._check_host(X, self.name)
        return pair(xi.with_host(self.dual_name), X.with_host(self.name))

    def lie_derivative(self, X: GradedSection, omega: GradedSection) -> GradedSection:
        """L_X = i_X d + d i_X; on functions L_X f = a(X) f."""
        if omega.degree == 0:
            return GradedSection.scalar(self.rank, self.anchor_apply(X, omega.value()))
        result = self.interior(X, self.differential(omega))
        return result + self.differential(self.interior(X, omega))

    # ------------------------------------------------------------------
    # Schouten bracket on multivectors

    def ad(self, j: int, P: GradedSection) -> GradedSection:
        """[e_j, P] as a derivation of the wedge product."""
        terms = []
        for I, f in P.coefficients.items():
            terms.append((I, self.frame_apply(j, f)))
            for s, i_s in enumerate(I):
                for m, c in enumerate(self.structure[j][i_s]):
                    if c != 0:
                        terms.append((I[:s] + (m,) + I[s + 1:], f * c))
        return GradedSection.from_terms(self.rank, P.degree, terms, self.name)

    def _bracket_with_function(self, P: GradedSection, g) -> GradedSection:
        # [P, g] = (-1)^(p+1) i_{dg} P
        dg = self.differential(GradedSection.scalar(self.rank, g))
        return contract(dg, P.with_host(self.name)).scale((-1) ** (P.degree + 1))

    def _bracket_with_frame_wedge(self, P: GradedSection, J: Tuple[int, ...]) -> GradedSection:
        p = P.degree
        terms = []
        for t, jt in enumerate(J):
            sign = (-1) ** ((p - 1) * t)
            R = self.ad(jt, P)
            for K, coeff in R.coefficients.items():
                terms.append((J[:t] + K + J[t + 1:], -sign * coeff))
        return GradedSection.from_terms(self.rank, p + len(J) - 1, terms, self.name)

    def schouten(self, P: GradedSection, Q: GradedSection) -> GradedSection:
        """Graded biderivation extending the section bracket.

        [X, f] = a(X) f, [P, Q] = -(-1)^((p-1)(q-1)) [Q, P] and
        [P, Q^R] = [P, Q]^R + (-1)^((p-1)q) Q^[P, R].

        Two functions have no bracket (its degree would be -1); [f, g] comes
        back as the zero function, so callers summing graded Jacobi terms
        must drop the terms whose inner bracket pairs two functions.
        """
        self._check_host(P, self.name)
        self._check_host(Q, self.name)
        p, q = P.degree, Q.degree
        if p == 0 and q == 0:
            return self.zero_multivector(0)
        if p == 0:
            return self.schouten(Q, P).scale((-1) ** q)
        P = P.with_host(self.name)
        result = self.zero_multivector(p + q - 1)
        for J, g in Q.coefficients.items():
            frame_wedge = GradedSection(self.rank, len(J), {J: sympy.Integer(1)}, self.name)
            result = result + self._bracket_with_function(P, g).wedge(frame_wedge)
            result = result + self._bracket_with_frame_wedge(P, J).scale(g)
        return result

    def lie_derivative_multivector(self, X: GradedSection, P: GradedSection) -> GradedSection:
        """L_X P = [X, P] for a degree-1 X."""
        if X.degree != 1:
            raise ShapeError("lie_derivative_multivector() needs a degree-1 section")
        return self.schouten(X, P)

    # ------------------------------------------------------------------
    # Verification

    @cached_property
    def report(self):
        from .checks.algebroid_checks import check_lie_algebroid
        return check_lie_algebroid(self)

    def is_valid(self) -> bool:
        return self.report.passed


@dataclass(frozen=True)
class AlgebroidMorphismToAlgebra:
    """A bundle map from an algebroid to a Lie algebra, given on the source frame.

    ``phi[i][a]`` is the a-th component (in the algebra's basis) of phi(e_i).
    """
    source: LieAlgebroid
    target: LieAlgebroid
    phi: Tuple[Tuple[sympy.Expr, ...], ...]
    name: str = "phi"

    def __post_init__(self):
        if self.target.base_dim != 0:
            raise ShapeError("Morphism target must be a Lie algebra (base dimension 0)")
        if len(self.phi) != self.source.rank or any(len(row) != self.target.rank for row in self.phi):
            raise ShapeError(f"phi must be {self.source.rank}x{self.target.rank}")
        object.__setattr__(self, 'phi', tuple(tuple(canonical(v) for v in row) for row in self.phi))

    def apply(self, X: GradedSection) -> Tuple[sympy.Expr, ...]:
        comps = X.components()
        return tuple(
            canonical(sum((comps[i] * self.phi[i][a] for i in range(self.source.rank)), ZERO))
            for a in range(self.target.rank)
        )

    def algebra_bracket(self, u: Sequence, v: Sequence) -> Tuple[sympy.Expr, ...]:
        """Pointwise bracket of two algebra-valued functions."""
        structure = self.target.structure
        r = self.target.rank
        return tuple(
            canonical(sum(
                (u[a] * v[b] * structure[a][b][m] for a in range(r) for b in range(r)
                 if structure[a][b][m] != 0),
                ZERO,
            ))
            for m in range(r)
        )

    def defect(self, i: int, j: int) -> Tuple[sympy.Expr, ...]:
        """phi[e_i,e_j] - a(e_i)(phi e_j) + a(e_j)(phi e_i) - [phi e_i, phi e_j]."""
        src = self.source
        lhs = self.apply(src.bracket_frame(i, j))
        mixed = self.algebra_bracket(self.phi[i], self.phi[j])
        return tuple(
            canonical(
                lhs[a] - src.frame_apply(i, self.phi[j][a]) + src.frame_apply(j, self.phi[i][a]) - mixed[a]
            )
            for a in range(self.target.rank)
        )

    def check(self):
        from .checks.algebroid_checks import check_morphism_to_algebra
        return check_morphism_to_algebra(self)
