"""
Custom exceptions for the rsos package.
"""

from dataclasses import dataclass
from typing import List, Optional


@dataclass(frozen=True)
class SourcePos:
    """1-based position of a token in a specification text."""

    line: int
    column: int

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}"


class RsosError(Exception):
    """Base exception for all rsos errors."""

    pass


class SpecError(RsosError):
    """Raised when a specification (or assertion/formula text) is invalid."""

    def __init__(self, message: str, pos: Optional[SourcePos] = None):
        self.message = message
        self.pos = pos
        self.diagnostics: List["SpecError"] = [self]
        super().__init__(f"{pos}: {message}" if pos else message)


class SpecSyntaxError(SpecError):
    """Raised when the text does not match the grammar."""

    def __init__(
        self,
        message: str,
        pos: Optional[SourcePos] = None,
        expected: Optional[List[str]] = None,
    ):
        super().__init__(message, pos)
        self.expected = sorted(expected or [])


class UnknownEntityError(SpecError):
    """Raised when an entity is used but never declared."""

    pass


class UnknownNameError(SpecError):
    """Raised when a declared name does not resolve."""

    pass


class DuplicateNameError(SpecError):
    """Raised when a name is declared twice for the same kind."""

    pass


class ReactionInvariantError(SpecError):
    """Raised when a reaction has an empty part or shares reactants and inhibitors."""

    pass


class UnknownPositionError(SpecError):
    """Raised when an assertion names a label position other than W, R, I or P."""

    pass


class UnguardedRecursionError(SpecError):
    """Raised when a recursion variable occurs outside every prefix of its body."""

    def __init__(self, variable: str, pos: Optional[SourcePos] = None):
        super().__init__(f"unguarded recursion on variable '{variable}'", pos)
        self.variable = variable


class IndexOutOfRangeError(RsosError, IndexError):
    """Raised when a step index lies outside the context sequence."""

    pass


class StateSpaceGuardError(RsosError):
    """Raised when raw justification enumeration would exceed its cap."""

    def __init__(self, combinations: int, cap: int):
        super().__init__(
            f"raw step needs {combinations} justification combinations "
            f"(cap {cap}); use dominant mode or raise the cap"
        )
        self.combinations = combinations
        self.cap = cap


class LimitExceededError(RsosError):
    """Raised when LTS construction hits max_states or max_depth."""

    def __init__(self, limit: str, value: int, frontier: int):
        super().__init__(
            f"{limit}={value} exceeded with {frontier} states still on the frontier"
        )
        self.limit = limit
        self.value = value
        self.frontier = frontier


class MissingVariableError(RsosError):
    """Raised when a valuation does not cover a variable used by a constraint."""

    def __init__(self, name: str):
        super().__init__(f"no value given for variable '{name}'")
        self.name = name


class ValuationError(RsosError, ValueError):
    """Raised when a valuation is malformed or assigns a non-positive value."""

    pass


class FormulaError(RsosError):
    """Raised when a bioHML formula is checked against the wrong assertion."""

    pass


class SpecLoadError(RsosError):
    """Raised when a specification file cannot be found or read."""

    pass
