"""Standard structures used by the suites, the scripts and the tests."""

from typing import List, Tuple

from .algebroid import LieAlgebroid
from .double import DoubleStructure
from .poisson import (PoissonTensor, compose_minus, cotangent_double,
                      flipped_cotangent_double)
from .scalars import ScalarRing


def real_space(n: int) -> ScalarRing:
    """Coordinates x, y, z for n <= 3 and x1..xn otherwise."""
    if n <= 3:
        return ScalarRing(("x", "y", "z")[:n])
    return ScalarRing(tuple(f"x{i + 1}" for i in range(n)))


def point() -> ScalarRing:
    return ScalarRing()


def zero_poisson(n: int) -> PoissonTensor:
    return PoissonTensor.zero(real_space(n), "zero")


def standard_double(n: int) -> DoubleStructure:
    """(TM, T*M) with the zero Poisson structure."""
    return cotangent_double(zero_poisson(n), f"std{n}")


def symplectic_r2() -> PoissonTensor:
    """dx^dy dual: pi = d/dx ^ d/dy."""
    return PoissonTensor.from_matrix(real_space(2), [[0, 1], [-1, 0]], "omega2")


def symplectic_r4() -> PoissonTensor:
    """pi = d1 ^ d2 + d3 ^ d4."""
    return PoissonTensor.from_matrix(real_space(4), _blocks(1, 1), "omega4")


def linear_poisson_r3() -> PoissonTensor:
    """pi = z dx^dy + x dy^dz + y dz^dx, the Lie-Poisson structure of so(3)."""
    ring = real_space(3)
    x, y, z = ring.symbols
    return PoissonTensor.from_matrix(ring, [[0, z, -y], [-z, 0, x], [y, -x, 0]], "lin3")


def _blocks(a, b):
    return [[0, a, 0, 0], [-a, 0, 0, 0], [0, 0, 0, b], [0, 0, -b, 0]]


def r4_pair() -> Tuple[PoissonTensor, PoissonTensor]:
    """U = d1^d2 + d3^d4 and V = x1 d1^d2 + x3 d3^d4."""
    ring = real_space(4)
    x1, _, x3, _ = ring.symbols
    return (
        PoissonTensor.from_matrix(ring, _blocks(1, 1), "U"),
        PoissonTensor.from_matrix(ring, _blocks(x1, x3), "V"),
    )


def linear_poisson_double() -> DoubleStructure:
    return cotangent_double(linear_poisson_r3(), "lin3")


def symplectic_double(n: int = 2) -> DoubleStructure:
    pi = symplectic_r2() if n == 2 else symplectic_r4()
    return cotangent_double(pi, f"symp{n}")


def algebra_pair() -> DoubleStructure:
    """Over a point: [e1, e2] = e2 and [eps1, eps2] = eps1."""
    ring = point()
    g = LieAlgebroid.lie_algebra(ring, 2, {(0, 1): [0, 1]}, "g")
    gstar = LieAlgebroid.lie_algebra(ring, 2, {(0, 1): [1, 0]}, "g*")
    return DoubleStructure(g, gstar, "g-pair")


def heisenberg_pair() -> DoubleStructure:
    """Over a point: [e1, e2] = e3 and [eps1, eps2] = eps3; not a Lie bialgebra."""
    ring = point()
    h = LieAlgebroid.lie_algebra(ring, 3, {(0, 1): [0, 0, 1]}, "h")
    hstar = LieAlgebroid.lie_algebra(ring, 3, {(0, 1): [0, 0, 1]}, "h*")
    return DoubleStructure(h, hstar, "heis-pair")


def bialgebroid_fixtures() -> List[Tuple[str, DoubleStructure]]:
    """Named doubles, all Lie bialgebroids except the Heisenberg pair."""
    U, V = r4_pair()
    return [
        ("std2", standard_double(2)),
        ("lin3", linear_poisson_double()),
        ("lin3-flip", flipped_cotangent_double(linear_poisson_r3(), "lin3-flip")),
        ("symp2", symplectic_double(2)),
        ("g-pair", algebra_pair()),
        ("heis-pair", heisenberg_pair()),
        ("UV", compose_minus(U, V).double),
    ]
