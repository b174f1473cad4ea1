"""Framed algebroids: brackets, Cartan calculus, Schouten bracket and their checks."""

from itertools import combinations

import pytest
from hypothesis import assume, given, settings, strategies as st

from courantkit import catalog
from courantkit.algebroid import AlgebroidMorphismToAlgebra, LieAlgebroid
from courantkit.checks import check_subalgebroid
from courantkit.errors import HostMismatch, RankDeficient, ShapeError
from courantkit.poisson import cotangent_algebroid
from courantkit.scalars import ScalarRing
from courantkit.sections import GradedSection

small = st.integers(-2, 2)


def linear(ring, coeffs):
    """c0 + c1 x + c2 y + ... over the ring's coordinates."""
    return coeffs[0] + sum(c * s for c, s in zip(coeffs[1:], ring.symbols))


@st.composite
def linear_forms(draw, degree=1):
    ring = catalog.real_space(3)
    TM = LieAlgebroid.tangent(ring)
    terms = [(I, linear(ring, draw(st.lists(small, min_size=4, max_size=4))))
             for I in combinations(range(3), degree)]
    return TM, GradedSection.from_terms(3, degree, terms, TM.dual_name)


def broken_jacobi():
    """[e1,e2] = e2, [e2,e3] = e1: the cyclic sum on (1,2,3) is e1."""
    return LieAlgebroid.lie_algebra(catalog.point(), 3, {(0, 1): [0, 1, 0], (1, 2): [1, 0, 0]}, "bad")


class TestConstruction:
    def test_tangent_is_valid(self, ring2):
        TM = LieAlgebroid.tangent(ring2)
        assert TM.is_valid()
        assert TM.bracket_frame(0, 1).is_zero()

    def test_structure_must_be_antisymmetric(self, ring2):
        structure = (((0, 0), (1, 0)), ((1, 0), (0, 0)))
        with pytest.raises(ShapeError):
            LieAlgebroid(ring2, 2, ((0, 0), (0, 0)), structure)

    def test_anchor_shape(self, ring2):
        with pytest.raises(ShapeError):
            LieAlgebroid.from_brackets(ring2, 2, [[1], [0]], {})

    def test_relabel(self, ring2):
        assert LieAlgebroid.tangent(ring2).relabel("T").name == "T"


class TestCotangent:
    def test_linear_poisson_brackets(self):
        C = cotangent_algebroid(catalog.linear_poisson_r3())
        x, y, z = C.ring.symbols
        assert C.bracket_frame(0, 1).components() == [0, 0, 1]
        assert C.anchor[0] == (0, z, -y)
        assert C.is_valid()

    def test_symplectic_r4_valid(self):
        assert cotangent_algebroid(catalog.symplectic_r4()).is_valid()


class TestBracket:
    def test_leibniz_rule(self, ring2):
        TM = LieAlgebroid.tangent(ring2)
        x, y = ring2.symbols
        f = ring2.formal("f")
        X = TM.vector([y, 0])
        Y = TM.vector([0, x])
        lhs = TM.bracket(X, Y.scale(f))
        rhs = TM.bracket(X, Y).scale(f) + Y.scale(TM.anchor_apply(X, f))
        assert lhs == rhs

    def test_coordinate_vector_fields(self, ring2):
        TM = LieAlgebroid.tangent(ring2)
        x, _ = ring2.symbols
        assert TM.bracket(TM.vector([1, 0]), TM.vector([0, x])) == TM.vector([0, 1])

    def test_wrong_host(self, ring2):
        TM = LieAlgebroid.tangent(ring2)
        with pytest.raises(HostMismatch):
            TM.bracket(TM.covector([1, 0]), TM.vector([0, 1]))

    def test_schouten_on_vectors_is_bracket(self, ring2):
        TM = LieAlgebroid.tangent(ring2)
        x, y = ring2.symbols
        X, Y = TM.vector([x * y, 1]), TM.vector([y, x**2])
        assert TM.schouten(X, Y) == TM.bracket(X, Y)


class TestCartanCalculus:
    @given(linear_forms(degree=0))
    def test_d_squared_on_functions(self, data):
        TM, f = data
        assert TM.differential(TM.differential(f)).is_zero()

    @given(linear_forms(degree=1))
    def test_d_squared_on_one_forms(self, data):
        TM, omega = data
        assert TM.differential(TM.differential(omega)).is_zero()

    def test_d_squared_on_cotangent(self):
        C = cotangent_algebroid(catalog.linear_poisson_r3())
        f = GradedSection.scalar(3, C.ring.formal("f"))
        assert C.differential(C.differential(f)).is_zero()

    def test_lie_derivative_on_functions(self, ring2):
        TM = LieAlgebroid.tangent(ring2)
        x, y = ring2.symbols
        f = GradedSection.scalar(2, x * y)
        assert TM.lie_derivative(TM.vector([1, 0]), f).value() == y

    def test_interior_then_pairing(self, ring2):
        TM = LieAlgebroid.tangent(ring2)
        x, y = ring2.symbols
        assert TM.pairing(TM.covector([x, y]), TM.vector([1, 1])) == x + y


def graded_jacobiator(A, P, Q, R):
    """Sum over cyclic (a, b, c) of (-1)^((|a|-1)(|c|-1)) [a, [b, c]]."""
    total = None
    for a, b, c in ((P, Q, R), (Q, R, P), (R, P, Q)):
        if b.degree == 0 and c.degree == 0:
            continue
        sign = -1 if ((a.degree - 1) * (c.degree - 1)) % 2 else 1
        term = A.schouten(a, A.schouten(b, c)).scale(sign)
        total = term if total is None else total + term
    return total


@st.composite
def multivectors(draw, A, min_degree=0, max_degree=2):
    degree = draw(st.integers(min_degree, max_degree))
    terms = {I: linear(A.ring, draw(st.lists(small, min_size=4, max_size=4)))
             for I in combinations(range(A.rank), degree)}
    return A.function(terms[()]) if degree == 0 else A.multivector(degree, terms)


class TestSchoutenJacobi:
    @given(st.data())
    def test_tangent(self, data):
        TM = LieAlgebroid.tangent(catalog.real_space(3))
        P, Q, R = (data.draw(multivectors(TM)) for _ in range(3))
        assume(P.degree + Q.degree + R.degree >= 2)
        assert graded_jacobiator(TM, P, Q, R).is_zero()

    @settings(max_examples=10)
    @given(st.data())
    def test_linear_poisson_cotangent(self, data):
        C = cotangent_algebroid(catalog.linear_poisson_r3())
        P, Q, R = (data.draw(multivectors(C)) for _ in range(3))
        assume(P.degree + Q.degree + R.degree >= 2)
        assert graded_jacobiator(C, P, Q, R).is_zero()

    def test_functions_and_bivector(self):
        C = cotangent_algebroid(catalog.linear_poisson_r3())
        x, y, z = C.ring.symbols
        f, g = C.function(x * y), C.function(z + 1)
        P = C.multivector(2, {(0, 1): x, (0, 2): 1, (1, 2): y})
        assert graded_jacobiator(C, f, g, P).is_zero()


class TestLieDerivativeCommutator:
    @given(st.data())
    def test_on_two_forms(self, data):
        TM, omega = data.draw(linear_forms(degree=2))
        X, Y = (data.draw(multivectors(TM, 1, 1)) for _ in range(2))
        lhs = TM.lie_derivative(TM.bracket(X, Y), omega)
        rhs = TM.lie_derivative(X, TM.lie_derivative(Y, omega)) - TM.lie_derivative(Y, TM.lie_derivative(X, omega))
        assert (lhs - rhs).is_zero()

    @given(st.data())
    def test_on_bivectors(self, data):
        TM = LieAlgebroid.tangent(catalog.real_space(3))
        X, Y = (data.draw(multivectors(TM, 1, 1)) for _ in range(2))
        P = data.draw(multivectors(TM, 2, 2))
        L = TM.lie_derivative_multivector
        lhs = L(TM.bracket(X, Y), P)
        rhs = L(X, L(Y, P)) - L(Y, L(X, P))
        assert (lhs - rhs).is_zero()

    def test_cotangent_two_form(self):
        C = cotangent_algebroid(catalog.linear_poisson_r3())
        x, y, z = C.ring.symbols
        X, Y = C.vector([y, 1, x]), C.vector([0, z, x * y])
        omega = C.form(2, {(0, 1): z, (1, 2): x})
        lhs = C.lie_derivative(C.bracket(X, Y), omega)
        rhs = C.lie_derivative(X, C.lie_derivative(Y, omega)) - C.lie_derivative(Y, C.lie_derivative(X, omega))
        assert (lhs - rhs).is_zero()

    def test_needs_a_vector(self):
        TM = LieAlgebroid.tangent(catalog.real_space(2))
        with pytest.raises(ShapeError):
            TM.lie_derivative_multivector(TM.multivector(2, {(0, 1): 1}), TM.vector([1, 0]))


class TestChecks:
    def test_jacobi_failure_is_reported(self):
        report = broken_jacobi().report
        assert not report.clause("jacobi").passed
        assert report.clause("jacobi").residuals[0].witness == "e1,e2,e3"

    def test_anchor_morphism_failure(self):
        ring = ScalarRing(("x",))
        A = LieAlgebroid.from_brackets(ring, 2, [[1], [0]], {(0, 1): [1, 0]}, "A")
        report = A.report
        assert report.clause("jacobi").passed
        assert not report.clause("anchor-morphism").passed

    def test_subalgebroid_closure(self, ring2):
        TM = LieAlgebroid.tangent(ring2)
        assert check_subalgebroid(TM, [TM.vector([1, 0])]).passed
        assert check_subalgebroid(TM, [TM.vector([1, 0]), TM.vector([0, 1])]).passed

    def test_subalgebroid_escape(self, ring3):
        TM = LieAlgebroid.tangent(ring3)
        x, _, _ = ring3.symbols
        report = check_subalgebroid(TM, [TM.vector([1, 0, 0]), TM.vector([0, 1, x])])
        assert [r.witness for r in report.clause("closure").residuals] == ["[S1,S2]"]

    def test_subalgebroid_rank_deficient(self, ring2):
        TM = LieAlgebroid.tangent(ring2)
        with pytest.raises(RankDeficient):
            check_subalgebroid(TM, [TM.vector([1, 0]), TM.vector([2, 0])])


class TestMorphismToAlgebra:
    def setup_method(self):
        self.g = catalog.algebra_pair().A

    def test_identity(self):
        m = AlgebroidMorphismToAlgebra(self.g, self.g, ((1, 0), (0, 1)), "id")
        assert m.check().passed

    def test_swap_fails(self):
        m = AlgebroidMorphismToAlgebra(self.g, self.g, ((0, 1), (1, 0)), "swap")
        report = m.check()
        assert not report.passed
        assert report.clause("bracket-compatibility").residuals[0].witness == "e1,e2"

    def test_target_must_be_over_a_point(self, ring2):
        TM = LieAlgebroid.tangent(ring2)
        with pytest.raises(ShapeError):
            AlgebroidMorphismToAlgebra(TM, TM, ((1, 0), (0, 1)))

    def test_flat_connection_form(self):
        """A map TR -> R is a morphism iff it is a closed 1-form."""
        ring = ScalarRing(("x", "y"))
        x, y = ring.symbols
        TM = LieAlgebroid.tangent(ring)
        line = LieAlgebroid.lie_algebra(catalog.point(), 1, {}, "R")
        assert AlgebroidMorphismToAlgebra(TM, line, ((y,), (x,))).check().passed
        assert not AlgebroidMorphismToAlgebra(TM, line, ((y,), (0,))).check().passed
