"""Tests for element arithmetic."""

import numpy as np
import pytest

from entrolab.models.element import BaseElem, DirectSumElem, FinitaryUTElem, PolyHeisElem
from entrolab.models.endo import Inner
from entrolab.models.errors import FamilyMismatch, InvalidElement, OrderBudgetExceeded
from entrolab.models.group import FinitaryUTFamily, PolyHeisenbergFamily
from entrolab.services.arithmetic import (
    ball_generators,
    check_element,
    commutator,
    conjugate,
    element_order,
    identity,
    inverse,
    mul,
    poly_add,
    poly_mul,
    poly_neg,
    poly_shift,
    power,
    random_element,
    sort_key,
)
from entrolab.services.endo import apply, build_endo

E12 = FinitaryUTElem(((1, 2, 1),))
E23 = FinitaryUTElem(((2, 3, 1),))

ONE, ZERO = {0: 1}, {}


def laurent_sum(p, *polys):
    out = {}
    for f in polys:
        for e, v in f.items():
            out[e] = (out.get(e, 0) + v) % p
    return {e: v for e, v in out.items() if v}


def laurent_product(p, f, g):
    out = {}
    for e1, v1 in f.items():
        for e2, v2 in g.items():
            out[e1 + e2] = (out.get(e1 + e2, 0) + v1 * v2) % p
    return {e: v for e, v in out.items() if v}


def heis_matrix(x):
    """[[1, a, c], [0, 1, b], [0, 0, 1]] with Laurent polynomial entries."""
    return [[ONE, dict(x.a), dict(x.c)], [ZERO, ONE, dict(x.b)], [ZERO, ZERO, ONE]]


def matrix_product(p, m, n):
    return [
        [laurent_sum(p, *(laurent_product(p, m[i][k], n[k][j]) for k in range(3))) for j in range(3)]
        for i in range(3)
    ]


class TestPolynomials:
    """Tests for Laurent polynomial helpers."""

    def test_add_cancels(self):
        """Test coefficients summing to zero are dropped."""
        assert poly_add(((0, 1),), ((0, 1),), 2) == ()
        assert poly_add(((0, 1),), ((2, 1),), 2) == ((0, 1), (2, 1))

    def test_mul_frobenius(self):
        """Test (1 + t)^2 = 1 + t^2 over F2."""
        one_plus_t = ((0, 1), (1, 1))
        assert poly_mul(one_plus_t, one_plus_t, 2) == ((0, 1), (2, 1))

    def test_negative_exponents(self):
        """Test Laurent terms multiply across zero."""
        assert poly_mul(((-1, 1),), ((1, 1),), 3) == ((0, 1),)

    def test_neg_and_shift(self):
        """Test negation and index shift."""
        assert poly_neg(((0, 1), (1, 2)), 3) == ((0, 2), (1, 1))
        assert poly_shift(((0, 1),), 3) == ((3, 1),)


class TestFamilyArithmetic:
    """Tests for products and inverses in each family."""

    def test_direct_sum_product(self, ds_z2):
        """Test coordinatewise product."""
        x = DirectSumElem(((0, 1),))
        y = DirectSumElem(((1, 1),))
        assert mul(ds_z2, x, y) == DirectSumElem(((0, 1), (1, 1)))
        assert mul(ds_z2, x, x) == identity(ds_z2)

    def test_heisenberg_product(self, heis):
        """Test (a, b, c)(a', b', c') picks up a * b' in the center."""
        a = PolyHeisElem(a=((0, 1),))
        b = PolyHeisElem(b=((0, 1),))
        assert mul(heis, a, b) == PolyHeisElem(((0, 1),), ((0, 1),), ((0, 1),))
        assert mul(heis, b, a) == PolyHeisElem(((0, 1),), ((0, 1),), ())
        assert commutator(heis, a, b) == PolyHeisElem(c=((0, 1),))

    def test_unitriangular_product(self, finitary):
        """Test E12 E23 fills the (1, 3) entry and E23 E12 does not."""
        assert mul(finitary, E12, E23) == FinitaryUTElem(((1, 2, 1), (1, 3, 1), (2, 3, 1)))
        assert mul(finitary, E23, E12) == FinitaryUTElem(((1, 2, 1), (2, 3, 1)))

    def test_unitriangular_inverse(self):
        """Test the inverse of I + E12 + E23 over F3."""
        family = FinitaryUTFamily(3)
        x = FinitaryUTElem(((1, 2, 1), (2, 3, 1)))
        assert mul(family, x, inverse(family, x)) == identity(family)
        assert inverse(family, x) == FinitaryUTElem(((1, 2, 2), (1, 3, 1), (2, 3, 2)))

    def test_table_product(self, finite_ut3):
        """Test table lookups and the identity at index 0."""
        x = BaseElem(3)
        assert mul(finite_ut3, identity(finite_ut3), x) == x
        assert mul(finite_ut3, x, inverse(finite_ut3, x)) == BaseElem(0)

    @pytest.mark.parametrize("fixture", ["finite_ut3", "ds_ut3", "heis", "finitary"])
    def test_group_axioms_on_samples(self, request, fixture):
        """Test associativity and inverses on 10^4 random triples per family."""
        family = request.getfixturevalue(fixture)
        rng = np.random.default_rng(7)
        e = identity(family)
        for _ in range(10_000):
            x, y, z = (random_element(family, rng) for _ in range(3))
            assert mul(family, mul(family, x, y), z) == mul(family, x, mul(family, y, z))
            assert mul(family, x, inverse(family, x)) == e
            assert mul(family, inverse(family, x), x) == e

    def test_family_mismatch(self, ds_z2):
        """Test elements of another family are rejected."""
        with pytest.raises(FamilyMismatch):
            mul(ds_z2, BaseElem(1), DirectSumElem())


class TestHeisenbergMatrices:
    """Tests for PolyHeisenberg arithmetic against 3x3 unitriangular matrices over F_p[t, 1/t]."""

    def test_unit_generators(self, heis):
        """Test (1, 0, 0)(0, 1, 0) = (1, 1, 1) as matrices."""
        a = PolyHeisElem(a=((0, 1),))
        b = PolyHeisElem(b=((0, 1),))
        assert heis_matrix(mul(heis, a, b)) == matrix_product(2, heis_matrix(a), heis_matrix(b))
        assert mul(heis, a, b) == PolyHeisElem(((0, 1),), ((0, 1),), ((0, 1),))

    @pytest.mark.parametrize("p", [2, 3])
    def test_products_and_inverses(self, p):
        """Test products and inverses on random pairs agree with matrix arithmetic."""
        family = PolyHeisenbergFamily(p)
        rng = np.random.default_rng(p)
        unit = [[ONE, ZERO, ZERO], [ZERO, ONE, ZERO], [ZERO, ZERO, ONE]]
        for _ in range(500):
            x, y = random_element(family, rng), random_element(family, rng)
            assert heis_matrix(mul(family, x, y)) == matrix_product(p, heis_matrix(x), heis_matrix(y))
            assert matrix_product(p, heis_matrix(x), heis_matrix(inverse(family, x))) == unit


class TestPowersAndOrders:
    """Tests for power, element_order and conjugate."""

    def test_power(self, finitary):
        """Test E12^2 = I over F2 and negative powers."""
        assert power(finitary, E12, 2) == identity(finitary)
        assert power(finitary, E12, -1) == E12

    def test_element_order(self):
        """Test orders over F3."""
        family = FinitaryUTFamily(3)
        assert element_order(family, E12) == 3
        assert element_order(family, identity(family)) == 1

    def test_element_order_of_superdiagonal(self, finitary):
        """Test I + E12 + E23 has order 4 over F2."""
        x = FinitaryUTElem(((1, 2, 1), (2, 3, 1)))
        assert power(finitary, x, 2) == FinitaryUTElem(((1, 3, 1),))
        assert element_order(finitary, x) == 4

    def test_inner_preserves_order(self, finitary):
        """Test conjugation by a finitely supported g keeps element orders."""
        g = FinitaryUTElem(((1, 2, 1), (2, 4, 1), (3, 4, 1)))
        phi = build_endo(finitary, Inner(g), 200)
        rng = np.random.default_rng(11)
        for _ in range(300):
            x = random_element(finitary, rng)
            assert element_order(finitary, apply(phi, x)) == element_order(finitary, x)

    def test_inner_preserves_order_on_table(self, finite_ut3):
        """Test conjugation on UT3(F2) keeps the order of every element."""
        for i in range(1, 8):
            phi = build_endo(finite_ut3, Inner(BaseElem(i)))
            for j in range(8):
                x = BaseElem(j)
                assert element_order(finite_ut3, apply(phi, x)) == element_order(finite_ut3, x)

    def test_element_order_cap(self):
        """Test the order cap raises."""
        with pytest.raises(OrderBudgetExceeded):
            element_order(PolyHeisenbergFamily(5), PolyHeisElem(a=((0, 1),)), cap=3)

    def test_conjugate(self, heis):
        """Test g^-1 x g in the Heisenberg family."""
        g = PolyHeisElem(a=((0, 1),))
        x = PolyHeisElem(b=((0, 1),))
        assert conjugate(heis, x, g) == PolyHeisElem(b=((0, 1),), c=((0, 1),))


class TestValidation:
    """Tests for check_element and sort_key."""

    def test_valid_elements(self, ds_z2, finitary):
        """Test canonical elements pass."""
        assert check_element(ds_z2, DirectSumElem(((-1, 1), (2, 1))))
        assert check_element(finitary, E12)

    def test_unsorted_support(self, ds_z2):
        """Test supports must be strictly increasing."""
        with pytest.raises(InvalidElement):
            check_element(ds_z2, DirectSumElem(((1, 1), (0, 1))))

    def test_zero_value(self, ds_z2):
        """Test identity values may not be stored."""
        with pytest.raises(InvalidElement):
            check_element(ds_z2, DirectSumElem(((0, 0),)))

    def test_lower_triangular_entry(self, finitary):
        """Test entries must lie above the diagonal."""
        with pytest.raises(InvalidElement):
            check_element(finitary, FinitaryUTElem(((2, 1, 1),)))

    def test_table_index_range(self, finite_ut3):
        """Test table indices must be in range."""
        with pytest.raises(InvalidElement):
            check_element(finite_ut3, BaseElem(8))

    def test_identity_sorts_first(self, finitary):
        """Test the identity is shortlex-minimal."""
        assert sort_key(identity(finitary)) < sort_key(E12) < sort_key(E23)


class TestBallGenerators:
    """Tests for support-ball generators."""

    def test_direct_sum_symmetric(self, ds_z2):
        """Test a symmetric ball of radius 2 has five coordinates."""
        gens = ball_generators(ds_z2, 2, symmetric=True)
        assert [g.support[0][0] for g in gens] == [-2, -1, 0, 1, 2]

    def test_direct_sum_counts_base_elements(self, ds_ut3):
        """Test each coordinate contributes every nonidentity base element."""
        assert len(ball_generators(ds_ut3, 0)) == 7

    def test_heisenberg(self, heis):
        """Test three unit generators per coordinate."""
        assert len(ball_generators(heis, 1)) == 6

    def test_unitriangular_corner(self, finitary):
        """Test radius r gives the superdiagonal of UT_{r+2}."""
        assert ball_generators(finitary, 1) == [E12, E23]
