"""Tests for element and endomorphism literals."""

import pytest

from entrolab.models.element import BaseElem, DirectSumElem, FinitaryUTElem, PolyHeisElem
from entrolab.models.endo import Compose, Diagonal, Identity, Inner, Restricted, Shift, TScale
from entrolab.models.errors import FamilyMismatch, InvalidElement
from entrolab.services.endo import build_endo, direct_sum_center
from entrolab.utils.codec import encode_element, encode_endo, parse_element, parse_endo


class TestElements:
    """Tests for element literals."""

    def test_direct_sum_keys_are_strings(self):
        """Test support maps serialize with string keys."""
        x = DirectSumElem(((-1, 3), (2, 1)))
        assert encode_element(x) == {"family": "direct_sum", "support": {"-1": 3, "2": 1}}

    def test_parse_direct_sum(self, ds_ut3):
        """Test zero values are dropped and keys sorted."""
        x = parse_element(ds_ut3, {"family": "direct_sum", "support": {"3": 2, "1": 5, "7": 0}})
        assert x == DirectSumElem(((1, 5), (3, 2)))

    def test_parse_heisenberg(self, heis):
        """Test an element with all three coordinates."""
        data = {"family": "poly_heis", "a": {"0": 1}, "b": {}, "c": {"2": 1}}
        x = parse_element(heis, data)
        assert x == PolyHeisElem(a=((0, 1),), c=((2, 1),))
        assert encode_element(x) == data

    def test_parse_finitary(self, finitary):
        """Test matrix entries are sorted."""
        x = parse_element(finitary, {"family": "finitary_ut", "entries": [[2, 3, 1], [1, 2, 1]]})
        assert x == FinitaryUTElem(((1, 2, 1), (2, 3, 1)))

    def test_parse_finite(self, finite_ut3):
        """Test a table index."""
        assert parse_element(finite_ut3, {"family": "finite", "index": 5}) == BaseElem(5)

    def test_wrong_family(self, heis):
        """Test a literal of another family is rejected."""
        with pytest.raises(FamilyMismatch):
            parse_element(heis, {"family": "direct_sum", "support": {"0": 1}})

    def test_value_out_of_range(self, ds_z2):
        """Test coefficients must lie in the base group."""
        with pytest.raises(InvalidElement):
            parse_element(ds_z2, {"family": "direct_sum", "support": {"0": 2}})

    def test_lower_triangular_entry(self, finitary):
        """Test finitary entries must sit above the diagonal."""
        with pytest.raises(InvalidElement, match="upper triangular"):
            parse_element(finitary, {"family": "finitary_ut", "entries": [[3, 2, 1]]})

    def test_malformed(self, ds_z2):
        """Test unknown fields fail validation."""
        with pytest.raises(InvalidElement, match="Malformed"):
            parse_element(ds_z2, {"family": "direct_sum", "support": {}, "extra": 1})


class TestEndos:
    """Tests for endomorphism literals."""

    def test_parse_compose(self, ds_z2):
        """Test nested compositions keep their order."""
        kind = parse_endo(
            ds_z2,
            {"endo": "compose", "list": [{"endo": "shift", "k": 2}, {"endo": "identity"}]},
        )
        assert kind == Compose((Shift(2), Identity()))

    def test_parse_inner(self, heis):
        """Test inner automorphisms carry a parsed element."""
        kind = parse_endo(heis, {"endo": "inner", "g": {"family": "poly_heis", "b": {"1": 1}}})
        assert kind == Inner(PolyHeisElem(b=((1, 1),)))

    def test_diagonal_alias(self, ds_z2):
        """Test diagonal maps are written under 'map'."""
        kind = parse_endo(ds_z2, {"endo": "diagonal", "map": [0, 1]})
        assert kind == Diagonal((0, 1))
        assert encode_endo(kind) == {"endo": "diagonal", "map": [0, 1]}

    def test_encode_simple(self):
        """Test literals for kinds without parameters."""
        assert encode_endo(TScale()) == {"endo": "t_scale"}
        assert encode_endo(Shift(-1)) == {"endo": "shift", "k": -1}

    def test_encode_restricted(self, ds_ut3):
        """Test restricted maps are described by base and subgroup name."""
        phi = build_endo(ds_ut3, Shift(1), 50)
        kind = Restricted(phi, direct_sum_center(ds_ut3))
        assert encode_endo(kind) == {
            "endo": "restricted",
            "base": {"endo": "shift", "k": 1},
            "subgroup": "center",
        }

    def test_unknown_endo(self, ds_z2):
        """Test unknown endomorphism names are rejected."""
        with pytest.raises(InvalidElement):
            parse_endo(ds_z2, {"endo": "frobenius"})
