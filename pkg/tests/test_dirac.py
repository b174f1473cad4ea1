"""Graphs of operators, Maurer-Cartan criteria and null Dirac structures."""

from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from courantkit import catalog
from courantkit.dirac import (SubbundleSpec, TwoFormOperator, check_hamiltonian,
                              dual_bracket_residual, dual_pair, graph_defect,
                              graph_subbundle, induced_dual_algebroid, integrability_oracle,
                              is_hamiltonian, is_strong_hamiltonian, lambda_family_residual,
                              mc_residual_H, null_dirac_check, null_subbundle, reduction_check)
from courantkit.errors import (HypothesisFailure, NotHamiltonian, NotIsotropic,
                               NotNullDirac, RankDeficient)
from courantkit.linalg import same_span
from courantkit.sampling import make_rng, random_section
from courantkit.sections import GradedSection
from courantkit.suites import form_oracle_equivalence, oracle_equivalence

X1 = catalog.real_space(4).symbols[0]


def bad_bivector(D):
    """y d1^d2 + x d2^d3, which fails the Jacobi identity."""
    x, y, _ = D.ring.symbols
    return D.A.multivector(2, {(0, 1): y, (1, 2): x})


class TestGraphIdentities:
    @given(st.integers(0, 2**16))
    def test_graph_defect_vanishes(self, seed):
        std3 = catalog.standard_double(3)
        H = random_section(std3.ring, 3, 2, make_rng(seed), 1, std3.A.name)
        for i, j in combinations(range(3), 2):
            xi, eta = std3.Astar.frame_section(i), std3.Astar.frame_section(j)
            assert graph_defect(std3, H, xi, eta).is_zero()

    def test_dual_bracket_residual_for_poisson_bivector(self, std3):
        H = catalog.linear_poisson_r3().pi
        for i, j in combinations(range(3), 2):
            xi, eta = std3.Astar.frame_section(i), std3.Astar.frame_section(j)
            assert dual_bracket_residual(std3, H, xi, eta).is_zero()

    def test_isotropy(self, std2):
        I = GradedSection.from_matrix([[0, 1], [-1, 0]], std2.Astar.name)
        L = graph_subbundle(std2, TwoFormOperator(I))
        assert L.rank == 2
        with pytest.raises(NotIsotropic):
            integrability_oracle(SubbundleSpec(std2, [std2.section(X=[1, 0], xi=[1, 0])], 1, "diag"))


class TestOracleEquivalence:
    def test_plane_bivectors(self, std2):
        summary = oracle_equivalence(std2, "H", instances=6, seed=3)
        assert summary.agreement_rate == 1.0
        assert summary.dirac == 6

    def test_algebra_pair_forms(self, g_pair):
        summary = oracle_equivalence(g_pair, "I", instances=6)
        assert summary.agreement_rate == 1.0
        assert summary.get_summary()['disagreements'] == []

    def test_symplectic_forms(self):
        summary = form_oracle_equivalence(catalog.symplectic_r2(), instances=4)
        assert summary.agreement_rate == 1.0

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("kind", ["H", "I"])
    def test_twenty_random_operators(self, n, kind):
        summary = oracle_equivalence(catalog.standard_double(n), kind, instances=20, seed=n)
        assert summary.instances == 20
        assert summary.agreement_rate == 1.0

    @pytest.mark.slow
    @pytest.mark.parametrize("pi", [catalog.symplectic_r2(), catalog.linear_poisson_r3()],
                             ids=["symplectic-r2", "linear-r3"])
    def test_twenty_random_forms(self, pi):
        summary = form_oracle_equivalence(pi, instances=20, seed=5)
        assert summary.instances == 20
        assert summary.agreement_rate == 1.0

    def test_unknown_kind(self, std2):
        with pytest.raises(ValueError):
            oracle_equivalence(std2, "K")


class TestHamiltonian:
    def test_plane_bivector(self, std2):
        x, _ = std2.ring.symbols
        H = std2.A.multivector(2, {(0, 1): x})
        report = check_hamiltonian(std2, H)
        assert report.passed
        assert is_strong_hamiltonian(std2, H)

    def test_non_poisson_bivector(self, std3):
        H = bad_bivector(std3)
        report = check_hamiltonian(std3, H)
        assert not report.clause("maurer-cartan").passed
        assert report.clause("d_*H").passed
        assert not report.clause("[H,H]").passed
        assert [r.witness for r in report.clause("lambda-family").residuals] == ["lambda^2"]
        assert not report.clause("graph closure").passed

    def test_lambda_family(self, std3):
        family = lambda_family_residual(std3, bad_bivector(std3))
        assert family[1].is_zero()
        assert not family[2].is_zero()

    def test_induced_dual_requires_hamiltonian(self, std3):
        with pytest.raises(NotHamiltonian):
            induced_dual_algebroid(std3, bad_bivector(std3))

    def test_induced_dual_of_poisson_tensor(self, std3):
        pi = catalog.linear_poisson_r3()
        induced = induced_dual_algebroid(std3, pi.pi.with_host(std3.A.name))
        assert induced.is_valid()
        assert induced.anchor == tuple(tuple(row) for row in pi.matrix())

    def test_linear_poisson_constant_bivector(self, lin3):
        H = lin3.A.multivector(2, {(0, 1): 1})
        assert is_hamiltonian(lin3, H)

    def test_requires_bialgebroid(self, heis_pair):
        H = heis_pair.A.multivector(2, {(0, 1): 1})
        with pytest.raises(HypothesisFailure):
            mc_residual_H(heis_pair, H)


class TestNullDirac:
    def setup_method(self):
        self.pi = catalog.symplectic_r4()
        self.D = catalog.symplectic_double(4)
        x1 = self.D.ring.symbols[0]
        self.d1 = [1, 0, 0, 0]
        self.d3x = [0, 0, 1, x1]

    def test_annihilator(self):
        x1 = self.D.ring.symbols[0]
        L = null_subbundle(self.D, [self.d1, self.d3x])
        perp = [s.xi.components() for s in L.spanning[2:]]
        assert perp == [[0, 1, 0, 0], [0, 0, -x1, 1]]

    def test_failure_witnesses(self):
        report = null_dirac_check(self.D, [self.d1, self.d3x])
        h, perp = report.clause("h closure"), report.clause("h^perp closure")
        assert [(r.witness, r.value) for r in h.residuals] == [("[S1,S2]", "[4]: 1")]
        assert [(r.witness, r.value) for r in perp.residuals] == [("[S1,S2]", "[3]: 1")]
        assert report.clause("minus-pairing").passed
        assert report.clause("plus-pairing").passed

    def test_single_direction(self):
        assert null_dirac_check(self.D, [self.d1]).passed

    def test_dependent_h(self):
        with pytest.raises(RankDeficient):
            null_dirac_check(self.D, [self.d1, [2, 0, 0, 0]])

    @pytest.mark.parametrize("h", [[[1, 0, 0, 0]], [[1, 0, 0, 0], [0, 0, 1, X1]]])
    def test_reduction_agrees(self, h):
        assert reduction_check(self.pi, h).passed == null_dirac_check(self.D, h).passed


class TestDualPair:
    def test_symplectic_r4(self):
        L = dual_pair(catalog.symplectic_r4(), [[1, 0, 0, 0]])
        bar = [X.components() for X in L.tangent_part()]
        assert same_span(bar, [[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])

    def test_plane(self):
        L = dual_pair(catalog.symplectic_r2(), [[1, 0]])
        assert same_span([X.components() for X in L.tangent_part()], [[1, 0]])

    def test_not_null_dirac(self):
        x1 = catalog.real_space(4).symbols[0]
        with pytest.raises(NotNullDirac) as info:
            dual_pair(catalog.symplectic_r4(), [[1, 0, 0, 0], [0, 0, 1, x1]])
        assert not info.value.report.passed
