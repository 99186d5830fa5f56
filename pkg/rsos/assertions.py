"""
Assertions over transition labels.

An assertion is a boolean query over one label ``<W |> R, I, P>`` built from
inclusion tests ``E subset Pos``, non-emptiness tests ``? in Pos`` and the
connectives ``!``, ``and``, ``xor``, ``or`` (binding in that order).
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet

from rsos.core import EntitySet, Label, format_set
from rsos.exceptions import UnknownPositionError

# Binding strength used when printing; higher binds tighter.
_ATOM, _NOT, _AND, _XOR, _OR = 5, 4, 3, 2, 1


class Position(str, Enum):
    W = "W"
    R = "R"
    I = "I"  # noqa: E741
    P = "P"

    @classmethod
    def parse(cls, name: str) -> "Position":
        """Position by name; ``E`` is accepted as another name for ``W``."""
        if name == "E":
            return cls.W
        try:
            return cls(name)
        except ValueError:
            raise UnknownPositionError(
                f"unknown label position '{name}' (expected W, R, I or P)"
            ) from None


def select(label: Label, pos: Position) -> EntitySet:
    """The component of ``label`` at ``pos``."""
    return {
        Position.W: label.w,
        Position.R: label.r,
        Position.I: label.i,
        Position.P: label.p,
    }[Position(pos)]


class Assertion(ABC):
    """Base class of assertion terms."""

    precedence = _ATOM

    @abstractmethod
    def holds(self, label: Label) -> bool:
        """Satisfaction of this assertion by ``label``."""

    @abstractmethod
    def entities(self) -> FrozenSet[str]:
        """Entities mentioned by the assertion."""

    def _operand(self, sub: "Assertion", strict: bool = False) -> str:
        text = str(sub)
        if strict:
            weaker = sub.precedence <= self.precedence
        else:
            weaker = sub.precedence < self.precedence
        return f"({text})" if weaker else text


@dataclass(frozen=True)
class SubsetOf(Assertion):
    subset: EntitySet
    pos: Position

    def holds(self, label: Label) -> bool:
        return self.subset <= select(label, self.pos)

    def entities(self) -> FrozenSet[str]:
        return self.subset

    def __str__(self) -> str:
        return "{" + format_set(self.subset) + "} subset " + self.pos.value


@dataclass(frozen=True)
class NonEmpty(Assertion):
    pos: Position

    def holds(self, label: Label) -> bool:
        return bool(select(label, self.pos))

    def entities(self) -> FrozenSet[str]:
        return frozenset()

    def __str__(self) -> str:
        return f"? in {self.pos.value}"


@dataclass(frozen=True)
class Not(Assertion):
    operand: Assertion
    precedence = _NOT

    def holds(self, label: Label) -> bool:
        return not self.operand.holds(label)

    def entities(self) -> FrozenSet[str]:
        return self.operand.entities()

    def __str__(self) -> str:
        return "!" + self._operand(self.operand)


@dataclass(frozen=True)
class _Binary(Assertion):
    left: Assertion
    right: Assertion
    keyword = ""

    def entities(self) -> FrozenSet[str]:
        return self.left.entities() | self.right.entities()

    def __str__(self) -> str:
        return (
            f"{self._operand(self.left)} {self.keyword} "
            f"{self._operand(self.right, strict=True)}"
        )


@dataclass(frozen=True)
class And(_Binary):
    precedence = _AND
    keyword = "and"

    def holds(self, label: Label) -> bool:
        return self.left.holds(label) and self.right.holds(label)


@dataclass(frozen=True)
class Xor(_Binary):
    precedence = _XOR
    keyword = "xor"

    def holds(self, label: Label) -> bool:
        return self.left.holds(label) != self.right.holds(label)


@dataclass(frozen=True)
class Or(_Binary):
    precedence = _OR
    keyword = "or"

    def holds(self, label: Label) -> bool:
        return self.left.holds(label) or self.right.holds(label)


def eval_assertion(label: Label, f: Assertion) -> bool:
    return f.holds(label)


def label_equiv(f: Assertion, v: Label, w: Label) -> bool:
    """``v ≡_F w``: both labels satisfy ``f`` or neither does."""
    return f.holds(v) == f.holds(w)
