"""
Multisets of entities and linear expressions over context variables.

These are the value types of the stoichiometric extension: reactions may
carry multiset reactants/products and contexts may offer an amount per
entity given by a linear expression ``k1*x1 + ... + kn*xn + h``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Tuple

from rsos.exceptions import MissingVariableError


@dataclass(frozen=True)
class EntityMultiset:
    """A finite multiset of entities, written as a formal sum ``n1*a ⊕ n2*b``."""

    counts: Tuple[Tuple[str, int], ...] = ()

    @classmethod
    def of(cls, mapping: Mapping[str, int]) -> "EntityMultiset":
        for name, n in mapping.items():
            if n < 0:
                raise ValueError(f"negative multiplicity {n} for '{name}'")
        return cls(tuple(sorted((a, n) for a, n in mapping.items() if n > 0)))

    @classmethod
    def from_set(cls, entities: Iterable[str]) -> "EntityMultiset":
        return cls.of({a: 1 for a in entities})

    def as_counter(self) -> Counter:
        return Counter(dict(self.counts))

    def support(self) -> FrozenSet[str]:
        return frozenset(a for a, _ in self.counts)

    def __getitem__(self, entity: str) -> int:
        return dict(self.counts).get(entity, 0)

    def __iter__(self) -> Iterator[Tuple[str, int]]:
        return iter(self.counts)

    def __len__(self) -> int:
        return len(self.counts)

    def __bool__(self) -> bool:
        return bool(self.counts)

    def is_set(self) -> bool:
        """True when every multiplicity is one."""
        return all(n == 1 for _, n in self.counts)

    def union(self, other: "EntityMultiset") -> "EntityMultiset":
        return mset_union(self, other)

    __add__ = union

    def __str__(self) -> str:
        return ",".join(a if n == 1 else f"{n}*{a}" for a, n in self.counts)


def mset_union(a: EntityMultiset, b: EntityMultiset) -> EntityMultiset:
    """Pointwise sum of multiplicities."""
    return EntityMultiset.of(a.as_counter() + b.as_counter())


@dataclass(frozen=True)
class LinExpr:
    """``sum(k_i * x_i) + h`` with natural coefficients over positive variables."""

    coefficients: Tuple[Tuple[str, int], ...] = ()
    constant: int = 0

    @classmethod
    def of(cls, coefficients: Mapping[str, int], constant: int = 0) -> "LinExpr":
        if constant < 0 or any(k < 0 for k in coefficients.values()):
            raise ValueError("linear expressions take natural coefficients only")
        terms = tuple(sorted((x, k) for x, k in coefficients.items() if k))
        return cls(terms, constant)

    @classmethod
    def const(cls, h: int) -> "LinExpr":
        return cls.of({}, h)

    @classmethod
    def var(cls, name: str, k: int = 1) -> "LinExpr":
        return cls.of({name: k})

    @property
    def variables(self) -> FrozenSet[str]:
        return frozenset(x for x, _ in self.coefficients)

    def is_zero(self) -> bool:
        # Variables are positive, so any non-zero coefficient makes the value positive.
        return not self.coefficients and self.constant == 0

    def is_constant(self) -> bool:
        return not self.coefficients

    def __add__(self, other: "LinExpr") -> "LinExpr":
        total = Counter(dict(self.coefficients))
        total.update(dict(other.coefficients))
        return LinExpr.of(total, self.constant + other.constant)

    def evaluate(self, valuation: Mapping[str, int]) -> int:
        value = self.constant
        for x, k in self.coefficients:
            if x not in valuation:
                raise MissingVariableError(x)
            value += k * valuation[x]
        return value

    def __str__(self) -> str:
        terms = [x if k == 1 else f"{k}*{x}" for x, k in self.coefficients]
        if self.constant or not terms:
            terms.append(str(self.constant))
        return "+".join(terms)

    def as_factor(self) -> str:
        """Rendering usable in front of ``*entity`` inside a context set."""
        text = str(self)
        if self.is_constant() or (self.coefficients == ((text, 1),)):
            return text
        return f"({text})"


ONE = LinExpr.const(1)


@dataclass(frozen=True)
class QuantContext:
    """A formal sum ``e_a*a ⊕ ...`` mapping entities to linear expressions."""

    terms: Tuple[Tuple[str, LinExpr], ...] = ()

    @classmethod
    def of(cls, mapping: Mapping[str, LinExpr]) -> "QuantContext":
        return cls(tuple(sorted((a, e) for a, e in mapping.items() if not e.is_zero())))

    @classmethod
    def from_multiset(cls, ms: EntityMultiset) -> "QuantContext":
        return cls.of({a: LinExpr.const(n) for a, n in ms})

    def as_dict(self) -> Dict[str, LinExpr]:
        return dict(self.terms)

    def support(self) -> FrozenSet[str]:
        return frozenset(a for a, _ in self.terms)

    def __getitem__(self, entity: str) -> LinExpr:
        return self.as_dict().get(entity, LinExpr())

    def __iter__(self) -> Iterator[Tuple[str, LinExpr]]:
        return iter(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def union(self, other: "QuantContext") -> "QuantContext":
        merged = self.as_dict()
        for a, e in other.terms:
            merged[a] = merged[a] + e if a in merged else e
        return QuantContext.of(merged)

    __add__ = union

    def __str__(self) -> str:
        return ",".join(
            a if e == ONE else f"{e.as_factor()}*{a}" for a, e in self.terms
        )
