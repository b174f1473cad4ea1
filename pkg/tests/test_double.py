"""The double of a pair: pairings, bracket, the function T and the anomaly decomposition."""

from itertools import combinations

import pytest
import sympy

from courantkit import catalog
from courantkit.checks import check_courant_axioms, check_identities
from courantkit.checks.base import formal_multipliers
from courantkit.dirac import BivectorOperator, SubbundleSpec, graph_subbundle, induced_dual_algebroid
from courantkit.double import DoubleStructure
from courantkit.errors import NotIsotropic, NotTransverse, ShapeError


def tangent_subbundle(D):
    return SubbundleSpec(D, [D.section(X=D.A.frame_section(i)) for i in range(D.rank)], D.rank, "A")


class TestPairings:
    def test_plus_and_minus(self, std2):
        e = std2.section(X=[1, 0])
        eps = std2.section(xi=[1, 0])
        assert std2.plus(e, eps) == sympy.Rational(1, 2)
        assert std2.minus(e, eps) == sympy.Rational(-1, 2)
        assert std2.minus(eps, e) == sympy.Rational(1, 2)

    def test_factors_are_isotropic(self, std2):
        e1, e2, eps1, eps2 = std2.frame()
        assert std2.plus(e1, e2) == 0
        assert std2.plus(eps1, eps2) == 0

    def test_bad_sign(self, std2):
        e = std2.section(X=[1, 0])
        with pytest.raises(ValueError):
            std2.pairing(e, e, 0)

    def test_rank_mismatch(self, ring2):
        from courantkit.algebroid import LieAlgebroid
        with pytest.raises(ShapeError):
            DoubleStructure(LieAlgebroid.tangent(ring2), LieAlgebroid.zero(ring2, 3))

    def test_dual_factor_is_relabelled(self, g_pair):
        assert g_pair.Astar.name == "g*"
        assert g_pair.flip().A.name == "g*"


class TestBracket:
    def test_standard_bracket_of_vector_and_form(self, std2):
        x, y = std2.ring.symbols
        bracket = std2.courant_bracket(std2.section(X=[1, 0]), std2.section(xi=[x, 0]))
        # L_{d/dx}(x dx) - 1/2 dx
        assert bracket.xi.components() == [sympy.Rational(1, 2), 0]
        assert bracket.X.is_zero()

    def test_bracket_is_antisymmetric(self, lin3):
        x, y, z = lin3.ring.symbols
        a = lin3.section(X=[y, 0, 1], xi=[0, z, 0])
        b = lin3.section(X=[0, x, 0], xi=[1, 0, x * y])
        assert (lin3.courant_bracket(a, b) + lin3.courant_bracket(b, a)).is_zero()

    def test_script_d_on_standard_double(self, std2):
        x, y = std2.ring.symbols
        Df = std2.script_D(x * y)
        assert Df.X.is_zero()
        assert Df.xi.components() == [y, x]


class TestTFunction:
    def test_value(self, std2):
        x, _ = std2.ring.symbols
        e1 = std2.section(X=[1, 0])
        e2 = std2.section(xi=[0, x])
        e3 = std2.section(X=[0, 1])
        assert std2.T_function(e1, e2, e3) == sympy.Rational(1, 4)
        assert std2.T_closed_form(e1, e2, e3) == sympy.Rational(1, 4)

    @pytest.mark.parametrize("fixture", ["std2", "lin3", "g_pair"])
    def test_closed_form_agrees(self, fixture, request):
        D = request.getfixturevalue(fixture)
        frame = D.frame()
        multipliers = formal_multipliers(D.ring, 3)
        for idx in list(combinations(range(2 * D.rank), 3))[:6]:
            a, b, c = (frame[i].scale(f) for i, f in zip(idx, multipliers))
            assert sympy.simplify(D.T_function(a, b, c) - D.T_closed_form(a, b, c)) == 0


class TestCourantAxioms:
    def test_standard_double(self, std2):
        report = check_courant_axioms(std2)
        assert report.passed
        assert [c.name for c in report.clauses] == [
            "(i) jacobi", "(ii) anchor", "(iii) leibniz", "(iv) rho-D", "(v) invariance",
        ]

    def test_algebra_pair(self, g_pair):
        assert check_courant_axioms(g_pair).passed

    @pytest.mark.slow
    def test_linear_poisson_double(self, lin3):
        assert check_courant_axioms(lin3).passed

    def test_unknown_triple_mode(self, std2):
        with pytest.raises(ValueError):
            check_courant_axioms(std2, triples="some")


class TestJacobiAnomaly:
    def test_heisenberg_residual_vanishes(self, heis_pair):
        frame = heis_pair.frame()
        triples = list(combinations(range(6), 3))
        assert len(triples) == 20
        for i, j, k in triples:
            assert heis_pair.jacobi_anomaly(frame[i], frame[j], frame[k]).certified

    def test_parts_recombine(self, heis_pair):
        e1, e2, e3, eps1, eps2, eps3 = heis_pair.frame()
        anomaly = heis_pair.jacobi_anomaly(e1, eps1, eps2)
        assert anomaly.recomputed_residual().is_zero()

    def test_standard_double_with_multipliers(self, std2):
        frame = std2.frame()
        f1, f2, f3 = formal_multipliers(std2.ring, 3)
        for i, j, k in combinations(range(4), 3):
            anomaly = std2.jacobi_anomaly(frame[i].scale(f1), frame[j].scale(f2), frame[k].scale(f3))
            assert anomaly.certified


class TestIdentitySuite:
    def test_standard_double(self, std2):
        report = check_identities(std2)
        assert report.passed, [c.name for c in report.failures()]

    def test_heisenberg_pair(self, heis_pair):
        report = check_identities(heis_pair)
        assert report.clause("T-closed-form").passed
        assert report.clause("jacobi-anomaly").passed


class TestBaseTensor:
    def test_cotangent_double_recovers_pi(self, lin3):
        assert lin3.base_poisson_tensor() == catalog.linear_poisson_r3().pi

    def test_standard_double_is_zero(self, std2):
        assert std2.base_poisson_tensor().is_zero()


class TestRecovery:
    def test_graph_and_tangent(self, std2):
        x, _ = std2.ring.symbols
        H = std2.A.multivector(2, {(0, 1): x})
        L1 = graph_subbundle(std2, BivectorOperator(H), "L")
        recovered = std2.recover_bialgebroid(L1, tangent_subbundle(std2))
        expected = induced_dual_algebroid(std2, H)
        assert recovered.A.anchor == expected.anchor
        assert recovered.A.structure == expected.structure
        assert recovered.Astar.anchor == std2.A.anchor
        assert recovered.Astar.name == "L*"

    def test_factors_round_trip(self, lin3):
        L1 = SubbundleSpec(lin3, [lin3.section(xi=lin3.Astar.frame_section(i)) for i in range(3)], 3, "B")
        recovered = lin3.recover_bialgebroid(L1, tangent_subbundle(lin3))
        assert recovered.same_structure(lin3.flip())

    def test_not_transverse(self, std2):
        L = tangent_subbundle(std2)
        with pytest.raises(NotTransverse):
            std2.recover_bialgebroid(L, L)

    def test_wrong_rank(self, std2):
        L = SubbundleSpec(std2, [std2.section(X=[1, 0])], 1, "short")
        with pytest.raises(NotIsotropic):
            std2.recover_bialgebroid(L, tangent_subbundle(std2))
