"""Tests for closures, set products, normality and quotient tables."""

import itertools

import pytest

from entrolab.models.element import BaseElem, DirectSumElem, PolyHeisElem
from entrolab.models.errors import (
    ClosureBudgetExceeded,
    FamilyMismatch,
    NotContained,
    NotNormal,
    ProductBudgetExceeded,
)
from entrolab.models.group import FiniteFamily
from entrolab.services.arithmetic import ball_generators, mul
from entrolab.services.fingen import (
    closure,
    commuting_closure,
    element_set,
    factored_product,
    is_normal_in,
    is_subgroup,
    quotient_table,
    set_product,
)
from entrolab.services.series import center
from entrolab.services.tables import symmetric, whole_group


def brute_product(family, left, right):
    return {mul(family, a, b) for a, b in itertools.product(left, right)}


class TestClosure:
    """Tests for subgroup closure."""

    def test_direct_sum_ball(self, ds_z2):
        """Test the radius-2 ball of DirectSum(Z2) has 2^3 elements."""
        k = closure(ds_z2, ball_generators(ds_z2, 2))
        assert k.order == 8
        assert k.elements[0] == DirectSumElem()
        assert is_subgroup(k)

    def test_heisenberg_constant_subgroup(self, heis):
        """Test <a, b> at coordinate 0 has order 8."""
        gens = [PolyHeisElem(a=((0, 1),)), PolyHeisElem(b=((0, 1),))]
        k = closure(heis, gens)
        assert k.order == 8
        assert PolyHeisElem(c=((0, 1),)) in k

    def test_unitriangular_corner(self, finitary):
        """Test the radius-2 ball generates UT4(F2)."""
        assert closure(finitary, ball_generators(finitary, 2)).order == 64

    def test_deterministic_order(self, ds_ut3):
        """Test enumeration order does not depend on the run."""
        gens = ball_generators(ds_ut3, 0)
        assert closure(ds_ut3, gens).elements == closure(ds_ut3, gens).elements

    def test_budget(self, ds_z2):
        """Test the closure budget stops saturation."""
        with pytest.raises(ClosureBudgetExceeded) as exc:
            closure(ds_z2, ball_generators(ds_z2, 5), budget=10)
        assert exc.value.budget == 10

    def test_budget_checked_per_element(self, ds_z2):
        """Test saturation stops at the first element past the budget, not at the end of a layer."""
        with pytest.raises(ClosureBudgetExceeded) as exc:
            closure(ds_z2, ball_generators(ds_z2, 5), budget=10)
        assert exc.value.reached == 11

    def test_family_mismatch(self, ds_z2):
        """Test generators must belong to the family."""
        with pytest.raises(FamilyMismatch):
            closure(ds_z2, [BaseElem(1)])

    def test_commuting_closure_matches_closure(self, ds_z2):
        """Test the coset construction agrees with breadth-first closure."""
        gens = ball_generators(ds_z2, 3)
        fast = commuting_closure(ds_z2, gens)
        assert fast.same_elements(closure(ds_z2, gens))
        assert fast.order == 16


class TestSetProduct:
    """Tests for set products."""

    def test_matches_brute_force(self, ds_ut3):
        """Test against a direct double loop."""
        f = closure(ds_ut3, ball_generators(ds_ut3, 0))
        g = closure(ds_ut3, [DirectSumElem(((1, 1),)), DirectSumElem(((1, 3),))])
        product = set_product(f, g)
        assert set(product) == brute_product(ds_ut3, f, g)

    def test_parallel_matches_sequential(self, ds_ut3):
        """Test chunked products keep the sequential enumeration order."""
        f = closure(ds_ut3, ball_generators(ds_ut3, 1))
        g = closure(ds_ut3, ball_generators(ds_ut3, 0))
        assert set_product(f, g, workers=4).elements == set_product(f, g).elements

    def test_budget(self, ds_z2):
        """Test the product budget."""
        f = closure(ds_z2, ball_generators(ds_z2, 3))
        g = closure(ds_z2, [DirectSumElem(((i, 1),)) for i in range(4, 8)])
        with pytest.raises(ProductBudgetExceeded):
            set_product(f, g, budget=100)

    def test_factored_product_witnesses(self, finite_ut3):
        """Test each witness multiplies back to its product."""
        k = whole_group(finite_ut3.table)
        s = element_set(finite_ut3, [BaseElem(0), BaseElem(1)])
        product, witness = factored_product(s, k)
        assert set(product) == brute_product(finite_ut3, s, k)
        for t, (a, b) in witness.items():
            assert mul(finite_ut3, a, b) == t


class TestNormality:
    """Tests for normality and quotients."""

    def test_center_is_normal(self, finite_ut3):
        """Test the center of UT3(F2) is normal with quotient of order 4."""
        k = whole_group(finite_ut3.table)
        z = center(k)
        assert is_normal_in(z, k)
        q = quotient_table(k, z)
        assert q.table.order == 4
        assert q.table.is_abelian
        assert q.representatives[0] == BaseElem(0)
        assert all(q.project(x) == 0 for x in z)

    def test_non_normal_subgroup(self):
        """Test a transposition subgroup of S3 is not normal."""
        family = FiniteFamily(symmetric(3))
        k = whole_group(family.table)
        involution = next(
            x for x in k if x != BaseElem(0) and mul(family, x, x) == BaseElem(0)
        )
        h = closure(family, [involution])
        assert not is_normal_in(h, k)
        with pytest.raises(NotNormal):
            quotient_table(k, h)

    def test_not_contained(self, finite_ut3):
        """Test normality needs containment."""
        k = whole_group(finite_ut3.table)
        small = closure(finite_ut3, [BaseElem(1)])
        with pytest.raises(NotContained):
            is_normal_in(k, small)
