"""Poisson tensors on a coordinate base and the structures built from them.

Bivectors live on the tangent algebroid ``TM`` of the base; 2-forms are forms
of ``TM``, i.e. sections hosted on ``TM*``, which is also the name of the
cotangent algebroid of a Poisson tensor. A bivector's frame matrix acts on
covector components: (pi# alpha)^j = sum_i alpha_i pi^{ij}.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import sympy

from .algebroid import LieAlgebroid
from .checks.base import residual
from .double import DoubleStructure
from .errors import NotPoisson, ShapeError
from .linalg import (Matrix, invert_matrix, is_antisymmetric, matadd, matmul,
                     scale, transpose)
from .reports import CheckReport
from .scalars import ZERO, ScalarRing, canonical
from .sections import GradedSection

logger = logging.getLogger(__name__)

TANGENT = "TM"
COTANGENT = "TM*"


def tangent_algebroid(ring: ScalarRing) -> LieAlgebroid:
    return LieAlgebroid.tangent(ring, TANGENT)


def bivector_from_matrix(matrix: Sequence[Sequence], host: str = TANGENT) -> GradedSection:
    if not is_antisymmetric(matrix):
        raise ShapeError("Bivector matrix must be antisymmetric")
    return GradedSection.from_matrix(matrix, host)


def poisson_residual(ring: ScalarRing, W: GradedSection) -> GradedSection:
    """The Schouten square [W, W] on the tangent algebroid."""
    if W.degree != 2 or W.rank != ring.dim:
        raise ShapeError(f"Expected a bivector on a {ring.dim}-dimensional base")
    TM = tangent_algebroid(ring)
    W = W.with_host(TANGENT)
    return TM.schouten(W, W)


def is_poisson(ring: ScalarRing, W: GradedSection, name: str = "W") -> CheckReport:
    """Verdict on [W, W] = 0, with the 3-vector as residual when it fails."""
    report = CheckReport("poisson", name)
    value = poisson_residual(ring, W)
    residuals = []
    if not value.is_zero():
        residuals.append(residual(ring, f"[{name},{name}]", value))
    report.add_clause("jacobi", residuals)
    return report


@dataclass(frozen=True)
class PoissonTensor:
    """A bivector on the base whose Schouten square vanishes.

    Attributes:
        ring: Coordinates of the base
        pi: Degree-2 section of the tangent algebroid
        name: Label used in reports
    """
    ring: ScalarRing
    pi: GradedSection
    name: str = "pi"

    def __post_init__(self):
        object.__setattr__(self, 'pi', self.pi.with_host(TANGENT))
        value = poisson_residual(self.ring, self.pi)
        if not value.is_zero():
            raise NotPoisson(f"[{self.name},{self.name}] = {value.format(self.ring)}",
                             is_poisson(self.ring, self.pi, self.name))

    @classmethod
    def from_matrix(cls, ring: ScalarRing, matrix: Sequence[Sequence], name: str = "pi") -> "PoissonTensor":
        return cls(ring, bivector_from_matrix(matrix), name)

    @classmethod
    def zero(cls, ring: ScalarRing, name: str = "pi") -> "PoissonTensor":
        return cls(ring, GradedSection.zero(ring.dim, 2, TANGENT), name)

    @property
    def base_dim(self) -> int:
        return self.ring.dim

    def matrix(self) -> Matrix:
        return self.pi.matrix()

    def sharp(self, alpha: Sequence) -> List[sympy.Expr]:
        """Components of pi#(alpha) in the coordinate frame."""
        if isinstance(alpha, GradedSection):
            alpha = alpha.components()
        P = self.matrix()
        n = self.base_dim
        return [canonical(sum((alpha[i] * P[i][j] for i in range(n)), ZERO)) for j in range(n)]

    def format(self) -> str:
        return self.pi.format(self.ring)


# ----------------------------------------------------------------------
# Cotangent algebroid and the doubles built on it


def cotangent_algebroid(pi: PoissonTensor, name: str = COTANGENT) -> LieAlgebroid:
    """Anchor pi#, frame brackets [dx^i, dx^j] = d(pi^{ij})."""
    P = pi.matrix()
    ring = pi.ring
    n = pi.base_dim
    brackets = {
        (i, j): list(ring.gradient(P[i][j]))
        for i in range(n) for j in range(i + 1, n)
    }
    return LieAlgebroid.from_brackets(ring, n, P, brackets, name)


def cotangent_double(pi: PoissonTensor, name: Optional[str] = None) -> DoubleStructure:
    """The double of (TM, T*M_pi)."""
    return DoubleStructure(tangent_algebroid(pi.ring), cotangent_algebroid(pi), name or f"T+T*_{pi.name}")


def flipped_cotangent_double(pi: PoissonTensor, name: Optional[str] = None) -> DoubleStructure:
    """The double of (T*M_pi, TM), where hamiltonian operators are 2-forms."""
    return DoubleStructure(cotangent_algebroid(pi), tangent_algebroid(pi.ring), name or f"T*_{pi.name}+T")


# ----------------------------------------------------------------------
# Composition of Poisson tensors


def _check_same_base(U: PoissonTensor, V: PoissonTensor) -> None:
    if U.ring != V.ring:
        raise ShapeError(f"{U.name} and {V.name} live on different bases")


def compose_plus(U: PoissonTensor, V: PoissonTensor, name: str = "W") -> PoissonTensor:
    """W = U (U + V)^-1 V over rational functions.

    Raises:
        SingularMatrix: if det(U + V) vanishes identically
        NotPoisson: if the composite fails the Jacobi identity
    """
    _check_same_base(U, V)
    Um, Vm = U.matrix(), V.matrix()
    W = matmul(matmul(Um, invert_matrix(matadd(Um, Vm))), Vm)
    if not is_antisymmetric(W):
        raise NotPoisson(f"{U.name}({U.name}+{V.name})^-1{V.name} is not antisymmetric")
    logger.debug("compose_plus(%s, %s) computed", U.name, V.name)
    return PoissonTensor.from_matrix(U.ring, W, name)


@dataclass(frozen=True)
class MinusComposition:
    """Output of the minus composition law.

    Attributes:
        double: The pair (T*M_U, T*M_V) with the pairing given by U - V
        base: The double's own base tensor <df, d_* g> = U (U-V)^-1 V
        induced: The induced Poisson tensor -2 U (U-V)^-1 V
    """
    double: DoubleStructure
    base: GradedSection
    induced: PoissonTensor


def compose_minus(U: PoissonTensor, V: PoissonTensor, name: str = "UV") -> MinusComposition:
    """The bialgebroid (T*M_U, T*M_V) paired through U - V and its base tensor.

    The dual frame of A = T*M_U is eps^j = sum_k (W^-1)_{kj} dx^k, W = U - V,
    carrying the cotangent structure of V.

    Raises:
        SingularMatrix: if det(U - V) vanishes identically
        NotPoisson: if the induced tensor fails the Jacobi identity
    """
    _check_same_base(U, V)
    ring = U.ring
    n = U.base_dim
    Um, Vm = U.matrix(), V.matrix()
    W = matadd(Um, Vm, -1)
    Winv = invert_matrix(W)
    M = transpose(Winv)

    A = cotangent_algebroid(U, f"T*M_{U.name}")
    cotV = cotangent_algebroid(V)
    columns = [cotV.vector([Winv[k][i] for k in range(n)]) for i in range(n)]
    brackets = {}
    for i in range(n):
        for j in range(i + 1, n):
            b = cotV.bracket(columns[i], columns[j]).components()
            brackets[(i, j)] = [
                canonical(sum((b[k] * W[m][k] for k in range(n)), ZERO)) for m in range(n)
            ]
    Astar = LieAlgebroid.from_brackets(ring, n, matmul(M, Vm), brackets, f"T*M_{V.name}")

    D = DoubleStructure(A, Astar, name)
    base = D.base_tensor_matrix()
    induced = PoissonTensor.from_matrix(ring, scale(-2, base), f"{name}_induced")
    return MinusComposition(D, bivector_from_matrix(base), induced)


# ----------------------------------------------------------------------
# 2-forms over a Poisson structure


def _as_form(ring: ScalarRing, omega: GradedSection) -> GradedSection:
    if omega.degree != 2 or omega.rank != ring.dim:
        raise ShapeError(f"Expected a 2-form on a {ring.dim}-dimensional base")
    return omega.with_host(COTANGENT)


def form_differential(pi: PoissonTensor, omega: GradedSection) -> GradedSection:
    return tangent_algebroid(pi.ring).differential(_as_form(pi.ring, omega))


def form_bracket(pi: PoissonTensor, omega: GradedSection) -> GradedSection:
    """[omega, omega]_pi, the Schouten square in the cotangent algebroid."""
    omega = _as_form(pi.ring, omega)
    return cotangent_algebroid(pi).schouten(omega, omega)


def hamiltonian_2form_residual(pi: PoissonTensor, omega: GradedSection) -> GradedSection:
    """d omega + 1/2 [omega, omega]_pi."""
    return form_differential(pi, omega) + form_bracket(pi, omega).scale(sympy.Rational(1, 2))


@dataclass(frozen=True)
class NijenhuisData:
    """N = pi# o omega_flat and the bivector N pi#.

    ``tensor_poisson`` and ``compatible`` are evaluated only when omega is a
    strong hamiltonian operator; otherwise they are None.
    """
    N: Tuple[Tuple[sympy.Expr, ...], ...]
    source_form: GradedSection
    source_tensor: PoissonTensor
    tensor: GradedSection
    closed: bool
    complementary: bool
    tensor_poisson: Optional[bool] = None
    compatible: Optional[bool] = None

    @property
    def strong_hamiltonian(self) -> bool:
        return self.closed and self.complementary

    def get_summary(self) -> dict:
        ring = self.source_tensor.ring
        return {
            'N': [[ring.format(v) for v in row] for row in self.N],
            'tensor': self.tensor.format(ring),
            'closed': self.closed,
            'complementary': self.complementary,
            'strong_hamiltonian': self.strong_hamiltonian,
            'tensor_poisson': self.tensor_poisson,
            'compatible': self.compatible,
        }


def nijenhuis_tensor(pi: PoissonTensor, omega: GradedSection) -> Tuple[NijenhuisData, GradedSection]:
    """Nijenhuis data of (pi, omega) and the induced tensor -2(pi# + N pi#)."""
    omega = _as_form(pi.ring, omega)
    P = pi.matrix()
    O = omega.matrix()
    N = matmul(transpose(P), transpose(O))
    NP = matmul(matmul(P, O), P)
    tensor = bivector_from_matrix(NP)
    induced = bivector_from_matrix(scale(-2, matadd(P, NP)))

    closed = form_differential(pi, omega).is_zero()
    complementary = form_bracket(pi, omega).is_zero()
    tensor_poisson = compatible = None
    if closed and complementary:
        tensor_poisson = poisson_residual(pi.ring, tensor).is_zero()
        compatible = tangent_algebroid(pi.ring).schouten(pi.pi, tensor).is_zero()
    data = NijenhuisData(
        tuple(tuple(row) for row in N), omega, pi, tensor,
        closed, complementary, tensor_poisson, compatible,
    )
    return data, induced
