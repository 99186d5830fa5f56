"""
Utility functions for rsos.
"""

import itertools
import re
from typing import AbstractSet, Dict, FrozenSet, Iterable, List, Tuple, TypeVar

from rsos.exceptions import ValuationError

T = TypeVar("T")

_VALUATION_ITEM = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(-?\d+)\s*$")


def powerset(items: Iterable[T]) -> List[FrozenSet[T]]:
    """
    All subsets of a finite collection, smallest first.

    Args:
        items: Elements to combine

    Returns:
        List of frozensets, starting with the empty set
    """
    pool = sorted(set(items), key=str)
    return [
        frozenset(combo)
        for size in range(len(pool) + 1)
        for combo in itertools.combinations(pool, size)
    ]


def nonempty_splits(
    left: AbstractSet[T], right: AbstractSet[T]
) -> List[Tuple[FrozenSet[T], FrozenSet[T]]]:
    """
    Pairs ``(J, Q)`` with ``J ⊆ left``, ``Q ⊆ right`` and ``J ∪ Q`` non-empty.

    Args:
        left: Candidates for the first component
        right: Candidates for the second component

    Returns:
        The ``2^(|left|+|right|) - 1`` admissible pairs
    """
    return [(j, q) for j in powerset(left) for q in powerset(right) if j or q]


def parse_valuation(text: str) -> Dict[str, int]:
    """
    Parse a ``x=5,y=2`` valuation of context variables.

    Args:
        text: Comma separated ``name=value`` pairs

    Returns:
        Mapping from variable name to its positive value

    Raises:
        ValuationError: On malformed items, repeated names or non-positive values
    """
    valuation: Dict[str, int] = {}
    if not text.strip():
        return valuation

    for item in text.split(","):
        match = _VALUATION_ITEM.match(item)
        if not match:
            raise ValuationError(f"malformed valuation item '{item.strip()}'")
        name, value = match.group(1), int(match.group(2))
        if name in valuation:
            raise ValuationError(f"variable '{name}' assigned twice")
        if value <= 0:
            # Context variables range over positive values only.
            raise ValuationError(f"variable '{name}' must be positive, got {value}")
        valuation[name] = value

    return valuation
