"""Tests for utils module."""

import pytest

from rsos.exceptions import ValuationError
from rsos.utils import nonempty_splits, parse_valuation, powerset


class TestPowerset:
    """Test subset enumeration."""

    def test_sizes(self):
        """Test that subsets come smallest first."""
        subsets = powerset(["b", "a"])
        assert subsets == [
            frozenset(),
            frozenset({"a"}),
            frozenset({"b"}),
            frozenset({"a", "b"}),
        ]

    def test_duplicates_ignored(self):
        """Test that repeated items count once."""
        assert len(powerset("aab")) == 4


class TestNonemptySplits:
    """Test justification pairs."""

    @pytest.mark.parametrize(
        "left,right,count", [("c", "ab", 7), ("c", "a", 3), ("", "", 0)]
    )
    def test_counts(self, left, right, count):
        """Test that all pairs but the empty one are produced."""
        splits = nonempty_splits(frozenset(left), frozenset(right))
        assert len(splits) == count
        assert all(j or q for j, q in splits)


class TestParseValuation:
    """Test parsing variable assignments."""

    def test_parse(self):
        """Test a well-formed valuation."""
        assert parse_valuation("x=5, y = 2") == {"x": 5, "y": 2}
        assert parse_valuation("  ") == {}

    @pytest.mark.parametrize(
        "text,message",
        [
            ("x", "malformed"),
            ("x=1,x=2", "twice"),
            ("x=0", "positive"),
            ("x=-3", "positive"),
        ],
    )
    def test_rejected(self, text, message):
        """Test malformed, repeated and non-positive assignments."""
        with pytest.raises(ValuationError, match=message):
            parse_valuation(text)

    def test_is_value_error(self):
        """Test that valuation errors are value errors."""
        with pytest.raises(ValueError):
            parse_valuation("x=y")
