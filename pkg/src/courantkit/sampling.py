"""Seeded random polynomial data for randomized suites."""

from itertools import combinations, combinations_with_replacement
from typing import List, Optional

import numpy as np
import sympy

from .scalars import ZERO, ScalarRing, canonical
from .sections import GradedSection


def make_rng(seed: Optional[int] = 0) -> np.random.Generator:
    return np.random.default_rng(seed)


def monomials(ring: ScalarRing, max_degree: int) -> List[sympy.Expr]:
    result = [sympy.Integer(1)]
    for degree in range(1, max_degree + 1):
        for combo in combinations_with_replacement(ring.symbols, degree):
            result.append(sympy.Mul(*combo))
    return result


def random_polynomial(ring: ScalarRing, rng: np.random.Generator, max_degree: int = 1,
                      density: float = 0.5, bound: int = 2) -> sympy.Expr:
    """Sparse polynomial with small integer coefficients."""
    total = ZERO
    for mono in monomials(ring, max_degree):
        if rng.random() < density:
            total += int(rng.integers(-bound, bound + 1)) * mono
    return canonical(total)


def random_section(ring: ScalarRing, rank: int, degree: int, rng: np.random.Generator,
                   max_degree: int = 1, host: Optional[str] = None, density: float = 0.5) -> GradedSection:
    terms = [
        (I, random_polynomial(ring, rng, max_degree, density))
        for I in combinations(range(rank), degree)
    ]
    return GradedSection.from_terms(rank, degree, terms, host)


def random_double_section(D, rng: np.random.Generator, max_degree: int = 1):
    X = random_section(D.ring, D.rank, 1, rng, max_degree, D.A.name)
    xi = random_section(D.ring, D.rank, 1, rng, max_degree, D.Astar.name)
    return D.section(X, xi)
