"""
Terms of the Reaction Systems process algebra.

A system ``[M]`` wraps a mixture ``M`` built from reactions ``(R,I,P)``,
sets of currently present entities ``D`` and context processes ``K``::

    P ::= [M]
    M ::= (R,I,P) | D | K | M|M
    K ::= 0 | X | C.K | K+K | rec X. K

Structural congruence is made computable by keeping every term in a
canonical form: a mixture is one reaction set, one merged entity set and a
sorted multiset of contexts; a choice is a sorted, duplicate-free list of
summands with ``0`` dropped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import AbstractSet, FrozenSet, Iterable, List, Sequence, Set, Tuple, Union

from rsos.exceptions import (
    IndexOutOfRangeError,
    ReactionInvariantError,
    UnguardedRecursionError,
)
from rsos.quantities import ONE, EntityMultiset, QuantContext

Entity = str
EntitySet = FrozenSet[Entity]

EMPTY: EntitySet = frozenset()


def entities(*names: Union[str, Iterable[str]]) -> EntitySet:
    """Build an entity set; a string argument is one entity, not split."""
    result: Set[str] = set()
    for name in names:
        if isinstance(name, str):
            result.add(name)
        else:
            result.update(name)
    return frozenset(result)


def format_set(es: AbstractSet[str], empty: str = "") -> str:
    """Sorted comma list of an entity set."""
    return ",".join(sorted(es)) if es else empty


# ---------------------------------------------------------------------------
# Reactions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Reaction:
    """A reaction ``(R, I, P)``; amounts are kept only when some count is not 1."""

    reactants: EntitySet
    inhibitors: EntitySet
    products: EntitySet
    reactant_amounts: EntityMultiset = field(default_factory=EntityMultiset)
    product_amounts: EntityMultiset = field(default_factory=EntityMultiset)

    def __post_init__(self) -> None:
        for name, part in (
            ("reactants", self.reactants),
            ("inhibitors", self.inhibitors),
            ("products", self.products),
        ):
            if not part:
                raise ReactionInvariantError(f"reaction has no {name}")
        clash = self.reactants & self.inhibitors
        if clash:
            raise ReactionInvariantError(
                f"entities {format_set(clash)} are both reactants and inhibitors"
            )

    @classmethod
    def of(
        cls,
        reactants: Iterable[str],
        inhibitors: Iterable[str],
        products: Iterable[str],
    ) -> "Reaction":
        return cls(frozenset(reactants), frozenset(inhibitors), frozenset(products))

    @classmethod
    def from_multisets(
        cls,
        reactants: EntityMultiset,
        inhibitors: Iterable[str],
        products: EntityMultiset,
    ) -> "Reaction":
        return cls(
            reactants.support(),
            frozenset(inhibitors),
            products.support(),
            EntityMultiset() if reactants.is_set() else reactants,
            EntityMultiset() if products.is_set() else products,
        )

    @property
    def reactant_multiset(self) -> EntityMultiset:
        return self.reactant_amounts or EntityMultiset.from_set(self.reactants)

    @property
    def product_multiset(self) -> EntityMultiset:
        return self.product_amounts or EntityMultiset.from_set(self.products)

    def is_quantitative(self) -> bool:
        return bool(self.reactant_amounts or self.product_amounts)

    @cached_property
    def _text(self) -> str:
        return (
            f"([{self.reactant_multiset}] -| [{format_set(self.inhibitors)}] "
            f"-> [{self.product_multiset}])"
        )

    def __str__(self) -> str:
        return self._text


# ---------------------------------------------------------------------------
# Context processes
# ---------------------------------------------------------------------------


class ContextExpr:
    """Base class of context process terms; instances are immutable."""

    def __str__(self) -> str:
        return self._text  # type: ignore[attr-defined]

    def sort_key(self) -> str:
        return str(self)


@dataclass(frozen=True)
class Nil(ContextExpr):
    """The inactive context ``0``: it has no transition."""

    @cached_property
    def _text(self) -> str:
        return "0"


@dataclass(frozen=True)
class Var(ContextExpr):
    name: str

    @cached_property
    def _text(self) -> str:
        return self.name


@dataclass(frozen=True)
class Prefix(ContextExpr):
    """``C.K``: offer the entities of ``C`` now, behave as ``K`` at the next step."""

    entities: EntitySet
    tail: ContextExpr
    amounts: QuantContext = field(default_factory=QuantContext)

    @classmethod
    def quantitative(cls, offer: QuantContext, tail: ContextExpr) -> "Prefix":
        unit = all(e == ONE for _, e in offer)
        return cls(offer.support(), tail, QuantContext() if unit else offer)

    def offer(self) -> QuantContext:
        """Amount offered per entity (1 for plain set prefixes)."""
        return self.amounts or QuantContext.of({a: ONE for a in self.entities})

    @cached_property
    def _text(self) -> str:
        inner = str(self.amounts) if self.amounts else format_set(self.entities)
        return "{" + inner + "}." + _guarded_text(self.tail)


@dataclass(frozen=True)
class Choice(ContextExpr):
    """Nondeterministic choice; build it with :func:`choice` to stay canonical."""

    summands: Tuple[ContextExpr, ...]

    @cached_property
    def _text(self) -> str:
        return " + ".join(_guarded_text(k) for k in self.summands)


@dataclass(frozen=True)
class Rec(ContextExpr):
    variable: str
    body: ContextExpr

    @cached_property
    def _text(self) -> str:
        return f"rec {self.variable}. {_guarded_text(self.body)}"


NIL = Nil()


def _guarded_text(k: ContextExpr) -> str:
    return f"({k})" if isinstance(k, Choice) else str(k)


def prefix(offered: Iterable[str], tail: ContextExpr = NIL) -> Prefix:
    return Prefix(frozenset(offered), tail)


def choice(*summands: ContextExpr) -> ContextExpr:
    """Choice up to associativity, commutativity, idempotence and ``0`` as unit."""
    flat: Set[ContextExpr] = set()
    for k in summands:
        if isinstance(k, Choice):
            flat.update(k.summands)
        elif not isinstance(k, Nil):
            flat.add(k)
    if not flat:
        return NIL
    if len(flat) == 1:
        return next(iter(flat))
    return Choice(tuple(sorted(flat, key=ContextExpr.sort_key)))


def sequential_context(sets: Sequence[AbstractSet[str]]) -> ContextExpr:
    """``C_0.C_1. ... .C_n.0``."""
    k: ContextExpr = NIL
    for c in reversed(sets):
        k = Prefix(frozenset(c), k)
    return k


def normalize_context(k: ContextExpr) -> ContextExpr:
    if isinstance(k, Prefix):
        return Prefix(k.entities, normalize_context(k.tail), k.amounts)
    if isinstance(k, Choice):
        return choice(*(normalize_context(s) for s in k.summands))
    if isinstance(k, Rec):
        return Rec(k.variable, normalize_context(k.body))
    return k


def free_variables(k: ContextExpr) -> FrozenSet[str]:
    if isinstance(k, Var):
        return frozenset([k.name])
    if isinstance(k, Prefix):
        return free_variables(k.tail)
    if isinstance(k, Choice):
        return frozenset().union(*(free_variables(s) for s in k.summands))
    if isinstance(k, Rec):
        return free_variables(k.body) - {k.variable}
    return frozenset()


def _bound_variables(k: ContextExpr) -> Set[str]:
    if isinstance(k, Prefix):
        return _bound_variables(k.tail)
    if isinstance(k, Choice):
        return set().union(*(_bound_variables(s) for s in k.summands))
    if isinstance(k, Rec):
        return {k.variable} | _bound_variables(k.body)
    return set()


def _fresh(base: str, avoid: AbstractSet[str]) -> str:
    for n in itertools.count(1):
        candidate = f"{base}{n}"
        if candidate not in avoid:
            return candidate
    raise AssertionError("unreachable")


def substitute(k: ContextExpr, x: str, r: ContextExpr) -> ContextExpr:
    """Capture-avoiding ``k[r/x]``; a binder of ``x`` inside ``k`` shadows it."""
    if isinstance(k, Var):
        return r if k.name == x else k
    if isinstance(k, Prefix):
        return Prefix(k.entities, substitute(k.tail, x, r), k.amounts)
    if isinstance(k, Choice):
        return choice(*(substitute(s, x, r) for s in k.summands))
    if isinstance(k, Rec):
        if k.variable == x or x not in free_variables(k.body):
            return k
        body, var = k.body, k.variable
        r_free = free_variables(r)
        if var in r_free:
            var = _fresh(var, r_free | free_variables(body) | _bound_variables(body))
            body = substitute(body, k.variable, Var(var))
        return Rec(var, substitute(body, x, r))
    return k


def unfold(k: Rec) -> ContextExpr:
    """``K[rec X. K / X]``."""
    return substitute(k.body, k.variable, k)


def check_guarded(k: ContextExpr) -> None:
    """Raise :class:`UnguardedRecursionError` unless every recursion is guarded."""
    _check_guarded(k, frozenset())


def _check_guarded(k: ContextExpr, unguarded: FrozenSet[str]) -> None:
    if isinstance(k, Var):
        if k.name in unguarded:
            raise UnguardedRecursionError(k.name)
    elif isinstance(k, Prefix):
        _check_guarded(k.tail, frozenset())
    elif isinstance(k, Choice):
        for s in k.summands:
            _check_guarded(s, unguarded)
    elif isinstance(k, Rec):
        _check_guarded(k.body, unguarded | {k.variable})


def is_prefix_only(k: ContextExpr) -> bool:
    """True for ``C_0. ... .C_n.0`` chains, the contexts of interactive processes."""
    while isinstance(k, Prefix):
        k = k.tail
    return isinstance(k, Nil)


def prefix_sequence(k: ContextExpr) -> List[EntitySet]:
    """The offered sets of a prefix-only chain."""
    sets = []
    while isinstance(k, Prefix):
        sets.append(k.entities)
        k = k.tail
    return sets


# ---------------------------------------------------------------------------
# Mixtures and systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Mixture:
    """Canonical mixture: reactions, one merged entity set, sorted contexts."""

    reactions: FrozenSet[Reaction] = frozenset()
    state: EntitySet = EMPTY
    contexts: Tuple[ContextExpr, ...] = ()

    @cached_property
    def _text(self) -> str:
        parts = sorted(str(a) for a in self.reactions)
        if self.state:
            parts.append("{" + format_set(self.state) + "}")
        parts.extend(str(k) for k in self.contexts)
        return " | ".join(parts) if parts else "{}"

    def __str__(self) -> str:
        return self._text


Component = Union[Reaction, AbstractSet[str], ContextExpr, Mixture]


def normalize(*components: Component) -> Mixture:
    """Canonical form of the parallel composition of ``components``.

    Entity sets are merged (``D1 | D2 ≡ D1 ∪ D2``, ``∅`` is the unit),
    reactions deduplicated, contexts normalized and kept as a sorted multiset.
    """
    reactions: Set[Reaction] = set()
    state: Set[str] = set()
    contexts: List[ContextExpr] = []
    for c in components:
        if isinstance(c, Mixture):
            reactions.update(c.reactions)
            state.update(c.state)
            contexts.extend(normalize_context(k) for k in c.contexts)
        elif isinstance(c, Reaction):
            reactions.add(c)
        elif isinstance(c, ContextExpr):
            contexts.append(normalize_context(c))
        else:
            state.update(c)
    return Mixture(
        frozenset(reactions),
        frozenset(state),
        tuple(sorted(contexts, key=ContextExpr.sort_key)),
    )


@dataclass(frozen=True)
class Process:
    """A system ``[M]``; equality is equality of canonical mixtures."""

    mixture: Mixture

    @classmethod
    def of(cls, *components: Component) -> "Process":
        return cls(normalize(*components))

    @property
    def reactions(self) -> FrozenSet[Reaction]:
        return self.mixture.reactions

    @property
    def state(self) -> EntitySet:
        return self.mixture.state

    @property
    def contexts(self) -> Tuple[ContextExpr, ...]:
        return self.mixture.contexts

    def with_state(self, extra: AbstractSet[str]) -> "Process":
        """This system in parallel with the entity set ``extra``."""
        return Process(normalize(self.mixture, extra))

    def __str__(self) -> str:
        return f"[ {self.mixture} ]"


@dataclass(frozen=True)
class Label:
    """Transition label ``<W |> R, I, P>``."""

    w: EntitySet = EMPTY
    r: EntitySet = EMPTY
    i: EntitySet = EMPTY
    p: EntitySet = EMPTY

    @classmethod
    def of(
        cls,
        w: Iterable[str] = (),
        r: Iterable[str] = (),
        i: Iterable[str] = (),
        p: Iterable[str] = (),
    ) -> "Label":
        return cls(frozenset(w), frozenset(r), frozenset(i), frozenset(p))

    def is_well_formed(self) -> bool:
        """``(W ∪ R) ∩ I = ∅``."""
        return not ((self.w | self.r) & self.i)

    def sort_key(self) -> Tuple[List[str], ...]:
        return tuple(sorted(part) for part in (self.w, self.r, self.i, self.p))

    def __str__(self) -> str:
        return (
            f"{format_set(self.w, '-')} |> {format_set(self.r, '-')} ; "
            f"{format_set(self.i, '-')} ; {format_set(self.p, '-')}"
        )


def encode(
    reactions: Iterable[Reaction],
    gamma: Sequence[AbstractSet[str]],
    delta_i: AbstractSet[str],
    i: int,
) -> Process:
    """``[ prod a | D_i | C_i. ... .C_n.0 ]``, step ``i`` of an interactive process."""
    n = len(gamma) - 1
    if i < 0 or i > n:
        raise IndexOutOfRangeError(f"step index {i} outside 0..{n}")
    return Process.of(*reactions, frozenset(delta_i), sequential_context(gamma[i:]))
