"""Tests for additivity checks, counting certificates, chains and dichotomy."""

import pytest

from entrolab.models.element import PolyHeisElem
from entrolab.models.endo import Shift, TScale
from entrolab.models.entropy import LadderReport, TrajectoryTable
from entrolab.models.errors import NotCentral, NotStabilized
from entrolab.models.group import DirectSumFamily
from entrolab.models.harness import Verdict
from entrolab.services.arithmetic import ball_generators
from entrolab.services.config import Settings
from entrolab.services.endo import (
    build_endo,
    coordinatewise,
    direct_sum_center,
    direct_sum_torsion,
    half_line,
    heis_center,
)
from entrolab.services.entropy import h_estimate, support_ball_ladder
from entrolab.services.fingen import closure
from entrolab.services.harness import (
    build_at_scenario,
    check_at,
    check_central,
    check_chain_sup,
    check_dagger,
    check_dichotomy,
    check_fekete,
    fekete_violations,
)
from entrolab.services.tables import builtin

SAMPLES = 200
BUDGET = 10_000_000


def ladder_of(*sizes):
    """A one-rung ladder report from a trajectory table."""
    estimate = h_estimate(TrajectoryTable(tuple(sizes), len(sizes)))
    return LadderReport((estimate,), (estimate.stabilized_ratio,), True)


@pytest.fixture
def ut3_center_scenario(ds_ut3):
    phi = build_endo(ds_ut3, Shift(1), SAMPLES)
    ladder = support_ball_ladder(ds_ut3, [0])
    return build_at_scenario("ut3-center", phi, direct_sum_center(ds_ut3), ladder, 4, samples=SAMPLES)


class TestCheckAT:
    """Tests for the additivity check."""

    def test_shift_over_ut3_center(self, ut3_center_scenario):
        """Test 8 = 2 * 4 for the shift on DirectSum(UT3) modulo its center."""
        report = check_at(ut3_center_scenario, BUDGET)
        assert report.verdict is Verdict.EXACT_EQUALITY
        assert report.alphas == {"G": 8, "H": 2, "Q": 4}
        assert report.to_dict()["verdict"] == "exact_equality"

    @pytest.mark.slow
    def test_heisenberg_t_scaling(self, heis):
        """Test 16 = 4 * 4 for t-scaling over the center."""
        phi = build_endo(heis, TScale(), SAMPLES)
        f = closure(
            heis,
            [PolyHeisElem(a=((0, 1),)), PolyHeisElem(b=((0, 1),)), PolyHeisElem(c=((1, 1),))],
        )
        scenario = build_at_scenario("heis", phi, heis_center(heis), [f], 4, samples=SAMPLES)
        report = check_at(scenario, BUDGET)
        assert report.verdict is Verdict.EXACT_EQUALITY
        assert report.alphas == {"G": 16, "H": 4, "Q": 4}

    def test_violation(self, ut3_center_scenario, mocker):
        """Test stabilized alphas that do not multiply are a violation."""
        mocker.patch(
            "entrolab.services.harness.h_ladder",
            side_effect=[ladder_of(4, 16, 64, 256), ladder_of(2, 4, 8, 16), ladder_of(1, 1, 1, 1)],
        )
        report = check_at(ut3_center_scenario, BUDGET)
        assert report.verdict is Verdict.VIOLATION
        assert report.reason == "4 != 2 * 1"

    def test_bounds_consistent(self, ut3_center_scenario, mocker):
        """Test unstabilized tables with overlapping bounds."""
        mocker.patch(
            "entrolab.services.harness.h_ladder",
            side_effect=[ladder_of(4, 16, 64, 256), ladder_of(2, 4, 8, 16), ladder_of(2, 4, 7, 14)],
        )
        report = check_at(ut3_center_scenario, BUDGET)
        assert report.verdict is Verdict.BOUNDS_CONSISTENT

    def test_budget_is_inconclusive(self, ut3_center_scenario):
        """Test a truncated trajectory never yields a verdict on additivity."""
        report = check_at(ut3_center_scenario, budget=50)
        assert report.verdict is Verdict.INCONCLUSIVE
        assert report.group.truncated


class TestCheckDagger:
    """Tests for the central-extension counting certificate."""

    def test_direct_sum_center(self, ds_ut3, settings):
        """Test the inequality holds with equality at n = 1."""
        phi = build_endo(ds_ut3, Shift(1), SAMPLES)
        f = closure(ds_ut3, ball_generators(ds_ut3, 0))
        cert = check_dagger("ds-ut3", phi, direct_sum_center(ds_ut3), f, 3, settings)
        assert cert.holds
        assert not cert.truncated
        assert [step.trajectory for step in cert.steps] == [8, 64, 512]
        assert [step.quotient_trajectory for step in cert.steps] == [4, 16, 64]
        assert cert.steps[0].slack == 0
        assert all(step.in_kernel for step in cert.steps)

    def test_trivial_kernel(self, ds_z2, settings):
        """Test a trivial kernel gives K_n = 1 and zero slack."""
        phi = build_endo(ds_z2, Shift(1), SAMPLES)
        f = closure(ds_z2, ball_generators(ds_z2, 0))
        kernel = coordinatewise(ds_z2, [0], "trivial")
        cert = check_dagger("trivial", phi, kernel, f, 4, settings)
        assert [step.kernel_trajectory for step in cert.steps] == [1, 1, 1, 1]
        assert all(step.slack == 0 for step in cert.steps)

    def test_heisenberg(self, heis, settings):
        """Test the certificate over the center of PolyHeisenberg(2)."""
        phi = build_endo(heis, TScale(), SAMPLES)
        f = closure(heis, [PolyHeisElem(a=((0, 1),)), PolyHeisElem(b=((0, 1),))])
        cert = check_dagger("heis", phi, heis_center(heis), f, 3, settings)
        assert cert.holds
        assert cert.quotient_order == 4
        assert [step.trajectory for step in cert.steps] == [8, 64, 512]

    def test_record_eta(self, ds_ut3, settings):
        """Test every eta(t) lands in K_n."""
        phi = build_endo(ds_ut3, Shift(1), SAMPLES)
        f = closure(ds_ut3, ball_generators(ds_ut3, 0))
        cert = check_dagger(
            "eta", phi, direct_sum_center(ds_ut3), f, 2, settings.merged(record_eta=True)
        )
        for step in cert.steps:
            assert step.eta_verified == step.trajectory
            assert 0 < len(step.eta_sample) <= 5
        assert "eta_verified" in cert.to_dict()["steps"][0]

    def test_budget_truncates(self, ds_ut3):
        """Test a small product budget cuts the certificate short."""
        phi = build_endo(ds_ut3, Shift(1), SAMPLES)
        f = closure(ds_ut3, ball_generators(ds_ut3, 0))
        settings = Settings(homomorphism_samples=SAMPLES, product_budget=100)
        cert = check_dagger("cut", phi, direct_sum_center(ds_ut3), f, 4, settings)
        assert cert.truncated
        assert len(cert.steps) < 4

    def test_non_central_kernel(self, ds_ut3):
        """Test a non-abelian half line is rejected."""
        with pytest.raises(NotCentral):
            check_central(half_line(ds_ut3), samples=SAMPLES)

    def test_central_kernel(self, heis):
        """Test the Heisenberg center passes the sampled check."""
        check_central(heis_center(heis), samples=SAMPLES)


class TestSubadditivity:
    """Tests for Fekete subadditivity."""

    def test_geometric_table(self):
        """Test an exact geometric table is subadditive."""
        table = TrajectoryTable((2, 4, 8, 16), 4)
        assert fekete_violations(table) == []
        assert check_fekete(table)

    def test_violating_table(self):
        """Test |T_3| > |T_1| |T_2| is reported both ways."""
        table = TrajectoryTable((2, 3, 10), 3)
        assert fekete_violations(table) == [(1, 2), (2, 1)]
        assert not check_fekete(table)


class TestChains:
    """Tests for entropy along chains of invariant subgroups."""

    def test_torsion_chain(self, settings):
        """Test Z6[1] < Z6[2] < Z6[6] gives alphas 1, 2, 6."""
        family = DirectSumFamily(builtin("z2xz3"))
        phi = build_endo(family, Shift(1), SAMPLES)
        chain = [direct_sum_torsion(family, n) for n in (1, 2, 6)]
        ladder = support_ball_ladder(family, [0])
        report = check_chain_sup("z6", phi, chain, ladder, 5, settings=settings)
        assert report.alphas == [1, 2, 6]
        assert report.ascending
        assert report.monotone
        assert report.sup_alpha == 6
        assert report.sup_matches_full
        assert report.terms == ("torsion[1]", "torsion[2]", "torsion[6]")


class TestDichotomy:
    """Tests for the integer-ratio check."""

    def test_integer_ratio(self):
        """Test alpha = 3 passes."""
        assert check_dichotomy(h_estimate(TrajectoryTable((3, 9, 27, 81), 4)))

    def test_not_stabilized(self):
        """Test a table without a common ratio raises."""
        with pytest.raises(NotStabilized):
            check_dichotomy(h_estimate(TrajectoryTable((1, 2, 3, 5, 8), 5)))
