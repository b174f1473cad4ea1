"""Bialgebroid compatibility and its invariance under exchanging the factors."""

import pytest

from courantkit import catalog
from courantkit.algebroid import LieAlgebroid
from courantkit.checks import check_bialgebroid, is_bialgebroid
from courantkit.checks.bialgebroid import derivation_residual
from courantkit.double import DoubleStructure
from courantkit.errors import HypothesisFailure


def broken_pair():
    ring = catalog.point()
    bad = LieAlgebroid.lie_algebra(ring, 3, {(0, 1): [0, 1, 0], (1, 2): [1, 0, 0]}, "bad")
    return DoubleStructure(bad, LieAlgebroid.lie_algebra(ring, 3, {}, "bad*"), "broken")


class TestBialgebroid:
    @pytest.mark.parametrize("fixture", ["std2", "g_pair"])
    def test_passes(self, fixture, request):
        report = check_bialgebroid(request.getfixturevalue(fixture))
        assert report.passed
        assert [c.name for c in report.clauses] == ["derivation"]

    def test_symplectic_plane(self):
        assert is_bialgebroid(catalog.symplectic_double(2)) is True

    def test_heisenberg_pair_fails(self, heis_pair):
        report = check_bialgebroid(heis_pair)
        assert not report.passed
        assert report.clause("derivation").residuals
        assert is_bialgebroid(heis_pair) is False

    def test_derivation_residual_on_frame(self, heis_pair):
        e1, e2 = heis_pair.A.frame_section(0), heis_pair.A.frame_section(1)
        assert not derivation_residual(heis_pair, e1, e2).is_zero()
        assert derivation_residual(heis_pair, e1, e1).is_zero()

    def test_broken_constituent(self):
        D = broken_pair()
        with pytest.raises(HypothesisFailure) as info:
            check_bialgebroid(D)
        assert info.value.report is not None
        assert is_bialgebroid(D) is None

    def test_require_bialgebroid(self, heis_pair):
        with pytest.raises(HypothesisFailure):
            heis_pair.require_bialgebroid()


class TestFlipAgreement:
    @pytest.mark.parametrize("name", ["std2", "symp2", "g-pair", "heis-pair"])
    def test_light_fixtures(self, name):
        D = dict(catalog.bialgebroid_fixtures())[name]
        assert check_bialgebroid(D).passed == check_bialgebroid(D.flip()).passed

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["lin3", "lin3-flip", "UV"])
    def test_heavy_fixtures(self, name):
        D = dict(catalog.bialgebroid_fixtures())[name]
        assert check_bialgebroid(D).passed
        assert check_bialgebroid(D.flip()).passed
