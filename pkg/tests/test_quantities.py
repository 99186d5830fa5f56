"""Tests for quantities module."""

import pytest

from rsos.exceptions import MissingVariableError
from rsos.quantities import ONE, EntityMultiset, LinExpr, QuantContext, mset_union


class TestEntityMultiset:
    """Test entity multisets."""

    def test_of_drops_zeros(self):
        """Test that zero multiplicities vanish and order is canonical."""
        ms = EntityMultiset.of({"b": 2, "a": 1, "c": 0})
        assert ms.counts == (("a", 1), ("b", 2))
        assert ms["b"] == 2
        assert ms["c"] == 0
        assert ms.support() == frozenset({"a", "b"})

    def test_negative_rejected(self):
        """Test that multiplicities are natural numbers."""
        with pytest.raises(ValueError, match="negative"):
            EntityMultiset.of({"a": -1})

    def test_union_adds(self):
        """Test the pointwise sum."""
        left = EntityMultiset.of({"hsf": 1, "hsp": 1})
        right = EntityMultiset.of({"hsf": 2})
        assert mset_union(left, right) == EntityMultiset.of({"hsf": 3, "hsp": 1})
        assert left + right == mset_union(right, left)

    def test_rendering(self):
        """Test the formal sum notation."""
        assert str(EntityMultiset.of({"hsf": 3, "hsp": 1})) == "3*hsf,hsp"
        assert EntityMultiset.from_set({"a", "b"}).is_set()
        assert not EntityMultiset()


class TestLinExpr:
    """Test linear expressions over context variables."""

    def test_arithmetic(self):
        """Test adding expressions."""
        e = LinExpr.var("x") + LinExpr.var("x", 2) + LinExpr.const(1)
        assert e == LinExpr.of({"x": 3}, 1)
        assert e.variables == frozenset({"x"})
        assert not e.is_constant()

    def test_rendering(self):
        """Test the printed form."""
        assert str(LinExpr.of({"x": 2, "y": 1}, 3)) == "2*x+y+3"
        assert str(LinExpr()) == "0"
        assert str(ONE) == "1"

    def test_evaluate(self):
        """Test evaluation under a valuation."""
        e = LinExpr.of({"x": 2}, 1)
        assert e.evaluate({"x": 5}) == 11
        with pytest.raises(MissingVariableError):
            e.evaluate({"y": 1})

    def test_negative_rejected(self):
        """Test that coefficients and constants are natural."""
        with pytest.raises(ValueError):
            LinExpr.of({"x": -1})
        with pytest.raises(ValueError):
            LinExpr.const(-2)

    def test_zero(self):
        """Test that only the empty constant expression is zero."""
        assert LinExpr().is_zero()
        assert not LinExpr.var("x").is_zero()


class TestQuantContext:
    """Test amount-carrying context offers."""

    def test_union(self):
        """Test adding offers entity by entity."""
        left = QuantContext.of({"hsf": LinExpr.var("x"), "hsp": ONE})
        right = QuantContext.from_multiset(EntityMultiset.of({"hsf": 2}))
        total = left + right
        assert total["hsf"] == LinExpr.of({"x": 1}, 2)
        assert total["hsp"] == ONE
        assert total["d_I"] == LinExpr()
        assert total.support() == frozenset({"hsf", "hsp"})

    def test_rendering(self):
        """Test that compound amounts are parenthesized."""
        offer = QuantContext.of(
            {"hsf": LinExpr.var("x"), "hsp": ONE, "hsf3": LinExpr.of({"x": 1}, 1)}
        )
        assert str(offer) == "x*hsf,(x+1)*hsf3,hsp"
