"""Exact linear algebra over rational functions."""

import pytest
import sympy
from hypothesis import assume, given, strategies as st

from courantkit.errors import NotInSpan, RankDeficient, SingularMatrix
from courantkit.linalg import (determinant, generic_rank, identity, invert_matrix, kernel,
                               matmul, matrices_equal, same_span, solve_in_span, span_basis)

x, y = sympy.symbols("x y")

small_matrices = st.integers(1, 3).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)
)


class TestDeterminant:
    def test_symbolic(self):
        assert determinant([[x, 1], [1, x]]) == x**2 - 1

    def test_needs_pivot_swap(self):
        assert determinant([[0, 1, 0], [1, 0, 0], [0, 0, x]]) == -x

    @given(small_matrices)
    def test_agrees_with_sympy(self, rows):
        assert determinant(rows) == sympy.Matrix(rows).det()


class TestInverse:
    def test_unipotent(self):
        assert matrices_equal(invert_matrix([[1, x], [0, 1]]), [[1, -x], [0, 1]])

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            invert_matrix([[x, x], [1, 1]])

    def test_rational_entries(self):
        M = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1 + x, 0], [0, 0, 0, 1 - y]]
        assert matrices_equal(matmul(M, invert_matrix(M)), identity(4))

    @given(small_matrices, st.integers(-3, 3))
    def test_inverse_times_matrix(self, rows, shift):
        M = [[c + (shift * x if i == j else 0) for j, c in enumerate(row)] for i, row in enumerate(rows)]
        assume(determinant(M) != 0)
        assert matrices_equal(matmul(invert_matrix(M), M), identity(len(M)))


class TestSpans:
    def test_solve_in_span(self):
        assert solve_in_span([x, x**2], [[1, x]]) == [x]

    def test_not_in_span(self):
        with pytest.raises(NotInSpan):
            solve_in_span([1, 0], [[1, x]])

    def test_dependent_spanning_set(self):
        with pytest.raises(RankDeficient):
            solve_in_span([1, x], [[1, x], [2, 2 * x]])

    def test_generic_rank(self):
        assert generic_rank([[x, 1], [x**2, x]]) == 1
        assert generic_rank([[x, 1], [1, x]]) == 2

    def test_kernel(self):
        assert kernel([[1, x, 0]], 3) == [[-x, 1, 0], [0, 0, 1]]

    def test_kernel_clears_denominators(self):
        (vec,) = kernel([[x, 1]], 2)
        assert vec == [-1, x]

    def test_span_basis_and_same_span(self):
        basis = span_basis([[1, x], [2, 2 * x]])
        assert basis == [[1, x]]
        assert same_span([[1, 0], [0, 1]], [[1, x], [0, y]])
        assert not same_span([[1, 0]], [[0, 1]])
