"""Tests for Cayley tables and built-in groups."""

import numpy as np
import pytest

from entrolab.models.errors import InvalidTable, ScenarioError
from entrolab.models.group import BaseGroupTable
from entrolab.services.tables import (
    builtin,
    cyclic,
    direct_product,
    from_elements,
    quaternion,
    subtable,
    symmetric,
    unitriangular,
    whole_group,
)

# a Latin square with identity 0 that is not associative: (1*2)*2 != 1*(2*2)
LOOP_5 = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


class TestBaseGroupTable:
    """Tests for group axiom validation."""

    def test_cyclic(self):
        """Test Z4 is a valid abelian table."""
        table = cyclic(4)
        assert table.order == 4
        assert table.is_abelian
        assert list(table.inv) == [0, 3, 2, 1]

    def test_rejects_non_associative(self):
        """Test a non-associative loop is rejected."""
        with pytest.raises(InvalidTable, match="associative"):
            BaseGroupTable("loop", np.array(LOOP_5))

    def test_rejects_missing_inverse(self):
        """Test a monoid without inverses is rejected."""
        with pytest.raises(InvalidTable, match="inverses"):
            BaseGroupTable("monoid", np.array([[0, 1], [1, 1]]))

    def test_rejects_bad_identity(self):
        """Test element 0 must be the identity."""
        with pytest.raises(InvalidTable, match="identity"):
            BaseGroupTable("swap", np.array([[1, 0], [0, 1]]))

    def test_rejects_out_of_range(self):
        """Test entries must index the table."""
        with pytest.raises(InvalidTable, match="range"):
            BaseGroupTable("bad", np.array([[0, 1], [1, 2]]))

    def test_rejects_large_tables(self):
        """Test the order cap."""
        with pytest.raises(InvalidTable, match="exceeds"):
            BaseGroupTable("big", np.zeros((257, 257), dtype=np.int64))

    def test_equality_by_content(self):
        """Test tables compare by multiplication, not by name."""
        assert builtin("z_2") == cyclic(2)
        assert hash(builtin("z2")) == hash(cyclic(2))
        assert cyclic(2) != cyclic(3)


class TestConstructions:
    """Tests for table constructions."""

    def test_direct_product_indexing(self):
        """Test (a, b) sits at index a * |right| + b."""
        table = direct_product(cyclic(2), cyclic(3))
        assert table.order == 6
        assert table.rows[3][3] == 0
        assert table.rows[1][2] == 0
        assert table.rows[4][1] == 5

    def test_symmetric(self):
        """Test S3 is non-abelian with the identity first."""
        table = symmetric(3)
        assert table.order == 6
        assert not table.is_abelian

    def test_quaternion(self):
        """Test i j = k, i^2 = -1 and that -1 is the only involution of Q8."""
        table = quaternion()
        minus_one, i, j, k = 1, 2, 4, 6
        assert table.rows[i][j] == k
        assert table.rows[j][i] == k + 1
        assert table.rows[i][i] == minus_one
        assert [x for x in range(1, 8) if table.rows[x][x] == 0] == [minus_one]

    def test_unitriangular_center(self):
        """Test E13 (index 2) is central in UT3(F2)."""
        table = unitriangular(3, 2)
        assert table.order == 8
        assert all(table.rows[2][j] == table.rows[j][2] for j in range(8))
        assert not table.is_abelian

    def test_from_elements_requires_closure(self):
        """Test tabulating a non-closed set fails."""
        with pytest.raises(InvalidTable, match="closed"):
            from_elements("open", [0, 1], lambda a, b: a + b)

    def test_subtable(self, ut3):
        """Test the center of UT3(F2) as its own table."""
        table, to_base = subtable(ut3, [2, 0])
        assert table.order == 2
        assert to_base == (0, 2)

    def test_subtable_requires_identity(self, ut3):
        """Test subgroup index lists must contain 0."""
        with pytest.raises(InvalidTable):
            subtable(ut3, [2])

    def test_whole_group(self, ut4):
        """Test the whole table as a subgroup."""
        assert whole_group(ut4).order == 64


class TestBuiltins:
    """Tests for named tables."""

    @pytest.mark.parametrize(
        ("name", "order", "abelian"),
        [
            ("z_5", 5, True),
            ("Z7", 7, True),
            ("ut3_f2", 8, False),
            ("ut4_f2", 64, False),
            ("s3", 6, False),
            ("q8", 8, False),
            ("z2xz4", 8, True),
            ("z2xz3", 6, True),
            ("z2xz2", 4, True),
        ],
    )
    def test_builtin_orders(self, name, order, abelian):
        """Test each builtin's order and commutativity."""
        table = builtin(name)
        assert table.order == order
        assert table.is_abelian is abelian

    def test_unknown_builtin(self):
        """Test unknown names list the choices."""
        with pytest.raises(ScenarioError) as exc:
            builtin("a5")
        assert "ut3_f2" in exc.value.details

    def test_cyclic_of_order_zero(self):
        """Test z_0 is rejected."""
        with pytest.raises(ScenarioError):
            builtin("z_0")
