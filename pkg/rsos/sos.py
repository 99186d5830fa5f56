"""
Single-step transition engine.

Two relations are computed from a system ``[M]``:

* the raw (single-arrow) relation: every derivation of the rules, one
  transition per admissible choice of context moves and, for each disabled
  reaction, of justification ``(J, Q)``;
* the dominant (double-arrow) relation: for each choice of context moves,
  the single transition whose ``R`` and ``I`` parts are maximal.

Given the set ``W`` of available entities, an enabled reaction can only use
rule (Pro) and a disabled one only (Inh); the top-level gate then leaves
exactly the justifications ``J ⊆ I ∩ W`` and ``Q ⊆ R \\ W``.
"""

import itertools
import logging
import os
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import (
    AbstractSet,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
)

from rsos.core import (
    EMPTY,
    Choice,
    ContextExpr,
    EntitySet,
    Label,
    Mixture,
    Prefix,
    Process,
    Reaction,
    Rec,
    normalize,
    unfold,
)
from rsos.exceptions import StateSpaceGuardError
from rsos.utils import nonempty_splits

logger = logging.getLogger(__name__)

Move = Tuple[EntitySet, ContextExpr]


@dataclass(frozen=True)
class StepLimits:
    """Caps on raw enumeration; exceeding one raises instead of truncating."""

    max_justifications: int = 10_000

    def __post_init__(self) -> None:
        if self.max_justifications <= 0:
            raise ValueError("max_justifications must be positive")

    @classmethod
    def from_env(cls) -> "StepLimits":
        """Read ``RSOS_MAX_JUSTIFICATIONS`` if set."""
        raw = os.environ.get("RSOS_MAX_JUSTIFICATIONS")
        if raw is None:
            return cls()
        try:
            return cls(max_justifications=int(raw))
        except ValueError as exc:
            raise ValueError(f"RSOS_MAX_JUSTIFICATIONS: {exc}") from exc


class Rule(str, Enum):
    PRO = "Pro"
    INH = "Inh"


@dataclass(frozen=True)
class Justification:
    """Why a reaction did not fire: inhibitors present (J), reactants missing (Q)."""

    present_inhibitors: EntitySet
    missing_reactants: EntitySet

    def __post_init__(self) -> None:
        if not (self.present_inhibitors or self.missing_reactants):
            raise ValueError("a justification needs J or Q non-empty")

    def admissible_for(self, reaction: Reaction) -> bool:
        return (
            self.present_inhibitors <= reaction.inhibitors
            and self.missing_reactants <= reaction.reactants
        )


@dataclass(frozen=True)
class Contribution:
    """The rule a reaction used in one derivation."""

    reaction: Reaction
    rule: Rule
    justification: Optional[Justification] = None

    def label_parts(self) -> Tuple[EntitySet, EntitySet, EntitySet]:
        """``(R, I, P)`` this reaction adds to the pooled label."""
        if self.rule is Rule.PRO:
            a = self.reaction
            return a.reactants, a.inhibitors, a.products
        assert self.justification is not None
        return (
            self.justification.present_inhibitors,
            self.justification.missing_reactants,
            EMPTY,
        )


@dataclass(frozen=True)
class Step:
    """A transition ``p --label--> target``; provenance is ignored by equality."""

    label: Label
    target: Process
    provenance: Tuple[Contribution, ...] = field(default=(), compare=False)

    def sort_key(self) -> Tuple:
        return (self.label.sort_key(), str(self.target))


def enabled(reaction: Reaction, w: AbstractSet[str]) -> bool:
    """``R ⊆ W`` and ``I ∩ W = ∅``."""
    return reaction.reactants <= w and not (reaction.inhibitors & w)


@lru_cache(maxsize=65536)
def context_offers(k: ContextExpr) -> FrozenSet[Prefix]:
    """Prefixes reachable through choice and recursion unfolding; each is one move."""
    if isinstance(k, Prefix):
        return frozenset([k])
    if isinstance(k, Choice):
        return frozenset().union(*(context_offers(s) for s in k.summands))
    if isinstance(k, Rec):
        return context_offers(unfold(k))
    return frozenset()


def context_moves(k: ContextExpr) -> FrozenSet[Move]:
    """Pairs ``(C, K')`` with ``k --<C |> ∅,∅,∅>--> K'``; ``0`` has none."""
    return frozenset((p.entities, p.tail) for p in context_offers(k))


def context_choices(contexts: Sequence[ContextExpr]) -> List[Tuple[Move, ...]]:
    """One move per context component; empty when some component cannot move."""
    per_context = [
        sorted(context_moves(k), key=lambda mv: (sorted(mv[0]), str(mv[1])))
        for k in contexts
    ]
    return list(itertools.product(*per_context))


def _pool(
    w: EntitySet,
    contributions: Sequence[Contribution],
    tails: Iterable[ContextExpr],
    reactions: Iterable[Reaction],
) -> Step:
    r: Set[str] = set()
    i: Set[str] = set()
    p: Set[str] = set()
    for c in contributions:
        cr, ci, cp = c.label_parts()
        r |= cr
        i |= ci
        p |= cp
    label = Label(w, frozenset(r), frozenset(i), frozenset(p))
    target = Process(normalize(*reactions, label.p, *tails))
    return Step(label, target, tuple(contributions))


def _merge(steps: Iterable[Step]) -> FrozenSet[Step]:
    # Coincident derivations collapse; the first provenance seen is kept.
    merged: Dict[Step, Step] = {}
    for s in steps:
        merged.setdefault(s, s)
    return frozenset(merged.values())


def _ordered_reactions(reactions: AbstractSet[Reaction]) -> List[Reaction]:
    return sorted(reactions, key=str)


def mixture_steps(
    m: Mixture, limits: Optional[StepLimits] = None
) -> FrozenSet[Tuple[Label, Mixture]]:
    """
    Transitions of a mixture, before the top-level gate of rule (Sys).

    Each reaction independently uses (Pro) or (Inh) with any justification
    ``J ⊆ I``, ``Q ⊆ R``; the pooled label must satisfy ``(W ∪ R) ∩ I = ∅``.

    Args:
        m: Canonical mixture
        limits: Enumeration cap

    Returns:
        Set of ``(label, target mixture)`` pairs

    Raises:
        StateSpaceGuardError: If the combinations exceed the cap
    """
    limits = limits or StepLimits()
    reactions = _ordered_reactions(m.reactions)
    options: List[List[Contribution]] = []
    total = 1
    for a in reactions:
        opts = [Contribution(a, Rule.PRO)]
        opts.extend(
            Contribution(a, Rule.INH, Justification(j, q))
            for j, q in nonempty_splits(a.inhibitors, a.reactants)
        )
        options.append(opts)
        total *= len(opts)
    if total > limits.max_justifications:
        raise StateSpaceGuardError(total, limits.max_justifications)

    result: Set[Tuple[Label, Mixture]] = set()
    for moves in context_choices(m.contexts):
        w = m.state.union(*(c for c, _ in moves))
        tails = [t for _, t in moves]
        for combo in itertools.product(*options):
            step = _pool(w, combo, tails, reactions)
            if step.label.is_well_formed():
                result.add((step.label, step.target.mixture))
    return frozenset(result)


def raw_step(p: Process, limits: Optional[StepLimits] = None) -> FrozenSet[Step]:
    """
    All single-arrow transitions of a system.

    Args:
        p: Canonical system
        limits: Cap on justification combinations per choice of context moves

    Returns:
        Set of steps, coincident derivations merged

    Raises:
        StateSpaceGuardError: If a choice of context moves needs more
            combinations than ``limits.max_justifications``
    """
    limits = limits or StepLimits()
    reactions = _ordered_reactions(p.reactions)
    steps: List[Step] = []
    for moves in context_choices(p.contexts):
        w = p.state.union(*(c for c, _ in moves))
        tails = [t for _, t in moves]
        options: List[List[Contribution]] = []
        total = 1
        for a in reactions:
            if enabled(a, w):
                options.append([Contribution(a, Rule.PRO)])
                continue
            opts = [
                Contribution(a, Rule.INH, Justification(j, q))
                for j, q in nonempty_splits(a.inhibitors & w, a.reactants - w)
            ]
            options.append(opts)
            total *= len(opts)
        if total > limits.max_justifications:
            raise StateSpaceGuardError(total, limits.max_justifications)
        logger.debug("W=%s: %d justification combinations", sorted(w), total)
        steps.extend(
            _pool(w, combo, tails, reactions) for combo in itertools.product(*options)
        )
    return _merge(steps)


def dominant_step(p: Process) -> FrozenSet[Step]:
    """
    Double-arrow transitions: one per choice of context moves.

    Every disabled reaction contributes its maximal justification
    ``J = I ∩ W``, ``Q = R \\ W``. An empty result means ``p`` is deadlocked.
    """
    reactions = _ordered_reactions(p.reactions)
    steps = []
    for moves in context_choices(p.contexts):
        w = p.state.union(*(c for c, _ in moves))
        contributions = [
            Contribution(a, Rule.PRO)
            if enabled(a, w)
            else Contribution(
                a, Rule.INH, Justification(a.inhibitors & w, a.reactants - w)
            )
            for a in reactions
        ]
        steps.append(_pool(w, contributions, (t for _, t in moves), reactions))
    return _merge(steps)


def dominates(upper: Label, lower: Label) -> bool:
    """``lower ⊑ upper``: same ``W`` and ``P``, ``R`` and ``I`` included."""
    return (
        upper.w == lower.w
        and upper.p == lower.p
        and lower.r <= upper.r
        and lower.i <= upper.i
    )


def dominant_of(steps: Iterable[Step]) -> FrozenSet[Step]:
    """The ⊑-maximal steps of each ``(W, P, target)`` group."""
    groups: Dict[Tuple[EntitySet, EntitySet, Process], List[Step]] = {}
    for s in steps:
        groups.setdefault((s.label.w, s.label.p, s.target), []).append(s)
    maxima = []
    for group in groups.values():
        for s in group:
            beaten = any(
                o.label != s.label and dominates(o.label, s.label) for o in group
            )
            if not beaten:
                maxima.append(s)
    return frozenset(maxima)


def is_deadlocked(p: Process) -> bool:
    return not dominant_step(p)
