"""Dirac subbundles of a double: graphs, null structures and hamiltonian operators.

Sharp/flat convention for operators between the two factors:
<beta, H# alpha> = H(alpha, beta), so (H# alpha)^j = sum_i alpha_i H^{ij},
and I_flat e_i = sum_j I(e_i, e_j) eps^j.
"""

import logging
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy

from .algebroid import LieAlgebroid
from .checks.algebroid_checks import check_subalgebroid
from .checks.base import residual
from .double import DoubleSection, DoubleStructure
from .errors import (NotHamiltonian, NotInSpan, NotIntegrable, NotIsotropic,
                     NotNullDirac, RankDeficient, ShapeError)
from .linalg import (generic_rank, invert_matrix, kernel, matmul, same_span,
                     solve_in_span, span_basis, transpose)
from .poisson import PoissonTensor, cotangent_double
from .reports import CheckReport
from .scalars import ZERO, as_fraction, canonical
from .sections import GradedSection, contract_trailing

logger = logging.getLogger(__name__)

HALF = sympy.Rational(1, 2)


@dataclass(frozen=True)
class SubbundleSpec:
    """A subbundle of a double given by a spanning set of sections.

    Attributes:
        host: The double the sections live in
        spanning: Sections spanning the subbundle at generic points
        expected_rank: Generic rank the spanning set must have (defaults to its length)
        name: Label used in reports
    """
    host: DoubleStructure
    spanning: Tuple[DoubleSection, ...]
    expected_rank: Optional[int] = None
    name: str = "L"

    def __post_init__(self):
        object.__setattr__(self, 'spanning', tuple(self.spanning))
        if self.expected_rank is None:
            object.__setattr__(self, 'expected_rank', len(self.spanning))
        rank = generic_rank([s.components() for s in self.spanning])
        if rank != self.expected_rank:
            raise RankDeficient(f"{self.name}: spanning set has generic rank {rank}, expected {self.expected_rank}")

    @property
    def rank(self) -> int:
        return self.expected_rank

    def rows(self) -> List[List[sympy.Expr]]:
        return [s.components() for s in self.spanning]

    def tangent_part(self) -> List[GradedSection]:
        """Members with no A* component (the h of a null structure h + h^perp)."""
        return [s.X for s in self.spanning if s.xi.is_zero() and not s.X.is_zero()]

    def format(self) -> str:
        ring = self.host.ring
        return "\n".join(f"S{i + 1} = {s.format(ring)}" for i, s in enumerate(self.spanning))


@dataclass(frozen=True)
class BivectorOperator:
    """H in the second exterior power of A, acting as A* -> A."""
    H: GradedSection

    def __post_init__(self):
        if self.H.degree != 2:
            raise ShapeError(f"A bivector operator needs a degree-2 section, got degree {self.H.degree}")

    def matrix(self):
        return self.H.matrix()

    def sharp(self, xi) -> List[sympy.Expr]:
        if isinstance(xi, GradedSection):
            xi = xi.components()
        r = self.H.rank
        return [
            canonical(sum((xi[i] * self.H.coefficient((i, j)) for i in range(r) if xi[i] != 0), ZERO))
            for j in range(r)
        ]


@dataclass(frozen=True)
class TwoFormOperator:
    """I in the second exterior power of A*, acting as A -> A*."""
    I: GradedSection

    def __post_init__(self):
        if self.I.degree != 2:
            raise ShapeError(f"A 2-form operator needs a degree-2 section, got degree {self.I.degree}")

    def matrix(self):
        return self.I.matrix()

    def flat(self, X) -> List[sympy.Expr]:
        if isinstance(X, GradedSection):
            X = X.components()
        r = self.I.rank
        return [
            canonical(sum((X[i] * self.I.coefficient((i, j)) for i in range(r) if X[i] != 0), ZERO))
            for j in range(r)
        ]


Operator = Union[BivectorOperator, TwoFormOperator]


# ----------------------------------------------------------------------
# Subbundles and the direct integrability test


def graph_subbundle(D: DoubleStructure, op: Operator, name: Optional[str] = None) -> SubbundleSpec:
    """{H eps^i + eps^i} for a bivector, {e_i + I e_i} for a 2-form."""
    r = D.rank
    if isinstance(op, BivectorOperator):
        if op.H.rank != r:
            raise ShapeError(f"Operator rank {op.H.rank} does not match the double (rank {r})")
        frame = [D.Astar.frame_section(i) for i in range(r)]
        spanning = [D.section(X=op.sharp(eps), xi=eps) for eps in frame]
        label = name or "graph(H)"
    elif isinstance(op, TwoFormOperator):
        if op.I.rank != r:
            raise ShapeError(f"Operator rank {op.I.rank} does not match the double (rank {r})")
        frame = [D.A.frame_section(i) for i in range(r)]
        spanning = [D.section(X=e, xi=op.flat(e)) for e in frame]
        label = name or "graph(I)"
    else:
        raise TypeError(f"Unsupported operator type: {type(op).__name__}")
    L = SubbundleSpec(D, spanning, r, label)
    if not is_isotropic(L):
        raise NotIsotropic(f"{label} is not isotropic; the operator is not skew")
    return L


def null_subbundle(D: DoubleStructure, h: Sequence, name: str = "h+h^perp") -> SubbundleSpec:
    """h + h^perp, with the annihilator computed over rational functions.

    Raises:
        RankDeficient: if the members of h are generically dependent
    """
    r = D.rank
    h_sections = [x if isinstance(x, GradedSection) else D.A.vector(list(x)) for x in h]
    rows = [x.components() for x in h_sections]
    if generic_rank(rows) != len(rows):
        raise RankDeficient(f"{name}: h is not of constant rank {len(rows)}")
    perp = kernel(rows, r)
    spanning = [D.section(X=x) for x in h_sections] + [D.section(xi=k) for k in perp]
    return SubbundleSpec(D, spanning, r, name)


def is_isotropic(L: SubbundleSpec) -> bool:
    D = L.host
    return all(
        D.plus(a, b) == 0 for a, b in combinations_with_replacement(L.spanning, 2)
    )


def integrability_oracle(L: SubbundleSpec) -> CheckReport:
    """Closure of L under the Courant bracket, over rational functions.

    Raises:
        NotIsotropic: if (.,.)_+ does not vanish on L
        RankDeficient: if the spanning set is generically dependent
    """
    if not is_isotropic(L):
        raise NotIsotropic(f"{L.name} is not isotropic")
    D = L.host
    report = CheckReport("dirac", L.name)
    span = L.rows()
    escaping = []
    for i, j in combinations(range(len(L.spanning)), 2):
        b = D.courant_bracket(L.spanning[i], L.spanning[j])
        if b.is_zero():
            continue
        try:
            solve_in_span(b.components(), span)
        except NotInSpan:
            escaping.append(residual(D.ring, f"[S{i + 1},S{j + 1}]", b))
    report.add_clause("closure", escaping)
    return report


def require_dirac(L: SubbundleSpec) -> None:
    """Raises NotIsotropic or NotIntegrable unless L is isotropic and closed."""
    report = integrability_oracle(L)
    if not report.passed:
        raise NotIntegrable(f"{L.name} is not closed under the bracket", report)


# ----------------------------------------------------------------------
# Maurer-Cartan residuals and hamiltonian operators


def _bivector_on_A(D: DoubleStructure, H: GradedSection) -> GradedSection:
    if H.degree != 2 or H.rank != D.rank:
        raise ShapeError(f"Expected a bivector of rank {D.rank}")
    return H.with_host(D.A.name)


def _sharp(D: DoubleStructure, H: GradedSection, xi: GradedSection) -> GradedSection:
    return D.A.vector(BivectorOperator(H).sharp(xi))


def _two_slot(HH: GradedSection, xi: GradedSection, eta: GradedSection) -> GradedSection:
    """[H,H](xi, eta): xi, then eta, into the trailing slots."""
    return contract_trailing(eta, contract_trailing(xi, HH))


def mc_residual_H(D: DoubleStructure, H: GradedSection) -> GradedSection:
    """d_* H + 1/2 [H, H], a section of the third exterior power of A.

    Raises:
        HypothesisFailure: if (A, A*) is not a Lie bialgebroid
    """
    D.require_bialgebroid()
    H = _bivector_on_A(D, H)
    return D.Astar.differential(H) + D.A.schouten(H, H).scale(HALF)


def mc_residual_I(D: DoubleStructure, I: GradedSection) -> GradedSection:
    """d I + 1/2 [I, I]_*, a section of the third exterior power of A*."""
    D.require_bialgebroid()
    if I.degree != 2 or I.rank != D.rank:
        raise ShapeError(f"Expected a 2-form of rank {D.rank}")
    I = I.with_host(D.Astar.name)
    return D.A.differential(I) + D.Astar.schouten(I, I).scale(HALF)


def lambda_family_residual(D: DoubleStructure, H: GradedSection) -> Dict[int, GradedSection]:
    """Coefficients of mc_residual_H(lambda H) by powers of a formal parameter lambda."""
    lam = D.ring.fresh_parameter()
    total = mc_residual_H(D, H.scale(lam))
    by_power: Dict[int, list] = {1: [], 2: []}
    for key, value in total.coefficients.items():
        num, den = as_fraction(value)
        for (k,), c in sympy.Poly(num, lam).terms():
            by_power.setdefault(k, []).append((key, c / den))
    return {
        k: GradedSection.from_terms(D.rank, 3, terms, D.A.name)
        for k, terms in sorted(by_power.items())
    }


def is_hamiltonian(D: DoubleStructure, H: GradedSection) -> bool:
    return mc_residual_H(D, H).is_zero()


def is_strong_hamiltonian(D: DoubleStructure, H: GradedSection) -> bool:
    """d_* H = 0 and [H, H] = 0 separately."""
    D.require_bialgebroid()
    H = _bivector_on_A(D, H)
    return D.Astar.differential(H).is_zero() and D.A.schouten(H, H).is_zero()


def bracket_H(D: DoubleStructure, H: GradedSection, xi: GradedSection, eta: GradedSection) -> GradedSection:
    """[xi, eta]_H = L_{H xi} eta - L_{H eta} xi + d <xi, H eta>."""
    A = D.A
    H = _bivector_on_A(D, H)
    xi, eta = xi.with_host(D.Astar.name), eta.with_host(D.Astar.name)
    Hxi, Heta = _sharp(D, H, xi), _sharp(D, H, eta)
    g = GradedSection.scalar(D.rank, A.pairing(xi, Heta))
    return (A.lie_derivative(Hxi, eta) - A.lie_derivative(Heta, xi) + A.differential(g)).with_host(D.Astar.name)


def induced_dual_algebroid(D: DoubleStructure, H: GradedSection, name: Optional[str] = None) -> LieAlgebroid:
    """The algebroid on A* transported from the graph of H.

    Anchor a_* + a o H#, bracket [xi, eta]_* + [xi, eta]_H.

    Raises:
        NotHamiltonian: if the graph of H is not a Dirac structure
    """
    if not is_hamiltonian(D, H):
        raise NotHamiltonian(f"{D.name}: the operator does not satisfy the Maurer-Cartan equation")
    H = _bivector_on_A(D, H)
    A, B = D.A, D.Astar
    r, n = D.rank, D.ring.dim
    op = BivectorOperator(H)
    anchor = []
    for i in range(r):
        image = A.anchor_vector(A.vector(op.sharp(B.frame_section(i))))
        anchor.append([canonical(B.anchor[i][mu] + image[mu]) for mu in range(n)])
    brackets = {}
    for i in range(r):
        for j in range(i + 1, r):
            b = B.bracket_frame(i, j) + bracket_H(D, H, B.frame_section(i), B.frame_section(j))
            brackets[(i, j)] = b.components()
    return LieAlgebroid.from_brackets(D.ring, r, anchor, brackets, name or f"{B.name}_H")


def graph_defect(D: DoubleStructure, H: GradedSection, xi: GradedSection, eta: GradedSection) -> GradedSection:
    """[H xi, H eta] - H [xi, eta]_H + 1/2 [H, H](xi, eta)."""
    A = D.A
    H = _bivector_on_A(D, H)
    xi, eta = xi.with_host(D.Astar.name), eta.with_host(D.Astar.name)
    HH = A.schouten(H, H)
    return (
        A.bracket(_sharp(D, H, xi), _sharp(D, H, eta))
        - _sharp(D, H, bracket_H(D, H, xi, eta))
        + _two_slot(HH, xi, eta).scale(HALF)
    )


def dual_bracket_residual(D: DoubleStructure, H: GradedSection, xi: GradedSection, eta: GradedSection) -> GradedSection:
    """H[xi, eta]_* - (L_xi H eta - L_eta H xi + d_* <eta, H xi> - 1/2 [H, H](xi, eta))."""
    A, B = D.A, D.Astar
    H = _bivector_on_A(D, H)
    xi, eta = xi.with_host(B.name), eta.with_host(B.name)
    Hxi, Heta = _sharp(D, H, xi), _sharp(D, H, eta)
    g = GradedSection.scalar(D.rank, A.pairing(eta, Hxi))
    rhs = (
        B.lie_derivative(xi, Heta)
        - B.lie_derivative(eta, Hxi)
        + B.differential(g)
        - _two_slot(A.schouten(H, H), xi, eta).scale(HALF)
    )
    return _sharp(D, H, B.bracket(xi, eta)) - rhs.with_host(A.name)


def check_hamiltonian(D: DoubleStructure, H: GradedSection, name: str = "H") -> CheckReport:
    """Maurer-Cartan, strong-hamiltonian and oracle clauses for one bivector."""
    ring = D.ring
    report = CheckReport("hamiltonian", f"{D.name}:{name}")
    H = _bivector_on_A(D, H)
    mc = mc_residual_H(D, H)
    report.add_clause("maurer-cartan", [] if mc.is_zero() else [residual(ring, name, mc)])

    dstar = D.Astar.differential(H)
    square = D.A.schouten(H, H)
    report.add_clause("d_*H", [] if dstar.is_zero() else [residual(ring, name, dstar)],
                      detail="strong hamiltonian needs this and [H,H] to vanish")
    report.add_clause("[H,H]", [] if square.is_zero() else [residual(ring, name, square)])

    family = lambda_family_residual(D, H)
    report.add_clause("lambda-family", [
        residual(ring, f"lambda^{k}", section) for k, section in family.items() if not section.is_zero()
    ])
    report.extend(integrability_oracle(graph_subbundle(D, BivectorOperator(H), f"graph({name})")),
                  prefix="graph ")
    return report


# ----------------------------------------------------------------------
# Null Dirac structures, reduction and dual pairs


def _pairing_clause(report: CheckReport, L: SubbundleSpec, sign: int, name: str) -> None:
    D = L.host
    residuals = []
    for i, j in combinations_with_replacement(range(len(L.spanning)), 2):
        value = D.pairing(L.spanning[i], L.spanning[j], sign)
        if value != 0:
            residuals.append(residual(D.ring, f"(S{i + 1},S{j + 1})", value))
    report.add_clause(name, residuals)


def null_dirac_check(D: DoubleStructure, h: Sequence, name: str = "h") -> CheckReport:
    """h + h^perp is Dirac iff h and h^perp are subalgebroids of A and A*.

    Raises:
        RankDeficient: if h is not of constant rank
    """
    L = null_subbundle(D, h, f"{name}+{name}^perp")
    report = CheckReport("null-dirac", L.name)
    h_sections = [s.X for s in L.spanning[:len(h)]]
    perp = [s.xi for s in L.spanning[len(h):]]
    logger.debug("%s: h has rank %d, annihilator rank %d", L.name, len(h_sections), len(perp))
    report.extend(check_subalgebroid(D.A, h_sections), prefix=f"{name} ")
    report.extend(check_subalgebroid(D.Astar, perp), prefix=f"{name}^perp ")
    _pairing_clause(report, L, -1, "minus-pairing")
    _pairing_clause(report, L, 1, "plus-pairing")
    return report


def reduction_check(pi: PoissonTensor, Dspec: Sequence, name: str = "D") -> CheckReport:
    """Dspec involutive and its annihilator closed in the cotangent algebroid of pi.

    Raises:
        RankDeficient: if Dspec is not of constant rank
    """
    double = cotangent_double(pi)
    L = null_subbundle(double, Dspec, f"{name}+{name}^perp")
    report = CheckReport("reduction", f"{pi.name}:{name}")
    k = len(Dspec)
    report.extend(check_subalgebroid(double.A, [s.X for s in L.spanning[:k]]), prefix="involutive ")
    report.extend(check_subalgebroid(double.Astar, [s.xi for s in L.spanning[k:]]), prefix="annihilator ")
    return report


def dual_pair(pi: PoissonTensor, Dspec: Sequence, name: str = "D") -> SubbundleSpec:
    """The orthogonal null structure Dbar + Dbar^perp with Dbar = pi#(D^perp).

    Raises:
        SingularMatrix: if pi is degenerate
        NotNullDirac: if D + D^perp (or the result) is not a null Dirac structure
    """
    n = pi.base_dim
    P = pi.matrix()
    Pt_inv = invert_matrix(transpose(P))
    double = cotangent_double(pi)
    rows = [list(x.components()) if isinstance(x, GradedSection) else list(x) for x in Dspec]

    report = null_dirac_check(double, rows, name)
    if not report.passed:
        raise NotNullDirac(f"{name} + {name}^perp is not a null Dirac structure", report)

    perp = kernel(rows, n)
    image = span_basis([pi.sharp(alpha) for alpha in perp], n)
    preimage = [[row[0] for row in matmul(Pt_inv, [[v] for v in x])] for x in rows]
    if not same_span(kernel(image, n), preimage):
        raise NotNullDirac(f"annihilator of pi#({name}^perp) differs from the preimage of {name}")

    bar = f"{name}bar"
    result = null_subbundle(double, image, f"{bar}+{bar}^perp")
    check = null_dirac_check(double, image, bar)
    if not check.passed:
        raise NotNullDirac(f"{bar} + {bar}^perp is not a null Dirac structure", check)
    return result
