"""
Extensions of the process semantics.

Stoichiometric systems let reactions consume and produce multisets and let
contexts offer amounts given by linear expressions over positive variables.
Enabling stays qualitative (it looks at supports only); each step emits the
constraints ``R(a) <= W(a)`` that make the step quantitatively possible.

Connected systems ``P1 <L> P2`` run two systems in lockstep and feed the
left products that belong to the link set ``L`` into the right system.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import (
    Deque,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from rsos.core import (
    Choice,
    ContextExpr,
    EntitySet,
    Label,
    Prefix,
    Process,
    Reaction,
    Rec,
    choice,
    format_set,
    normalize,
    normalize_context,
)
from rsos.exceptions import LimitExceededError, ValuationError
from rsos.lts import BuildLimits
from rsos.quantities import EntityMultiset, LinExpr, QuantContext, mset_union
from rsos.sos import context_offers, dominant_step, enabled

logger = logging.getLogger(__name__)

__all__ = [
    "EntityMultiset",
    "LinExpr",
    "QuantContext",
    "mset_union",
    "QuantProcess",
    "QuantLabel",
    "QuantStep",
    "Constraint",
    "ConstraintReport",
    "QuantExploration",
    "ConnectedSystem",
    "erase_amounts",
    "quant_step",
    "quant_explore",
    "evaluate_constraints",
    "connector_step",
]


# ---------------------------------------------------------------------------
# Stoichiometric systems
# ---------------------------------------------------------------------------


def erase_amounts(k: ContextExpr) -> ContextExpr:
    """The set context underlying a quantitative one."""
    if isinstance(k, Prefix):
        return Prefix(k.entities, erase_amounts(k.tail))
    if isinstance(k, Choice):
        return choice(*(erase_amounts(s) for s in k.summands))
    if isinstance(k, Rec):
        return Rec(k.variable, erase_amounts(k.body))
    return k


@dataclass(frozen=True)
class QuantProcess:
    """A system whose current entities form a multiset."""

    reactions: FrozenSet[Reaction]
    state: EntityMultiset
    contexts: Tuple[ContextExpr, ...]

    @classmethod
    def of(
        cls,
        reactions: Iterable[Reaction],
        state: EntityMultiset,
        contexts: Iterable[ContextExpr],
    ) -> "QuantProcess":
        normalized = (normalize_context(k) for k in contexts)
        return cls(
            frozenset(reactions),
            state,
            tuple(sorted(normalized, key=ContextExpr.sort_key)),
        )

    @classmethod
    def from_process(cls, p: Process) -> "QuantProcess":
        return cls.of(p.reactions, EntityMultiset.from_set(p.state), p.contexts)

    def support_process(self) -> Process:
        """The qualitative system obtained by forgetting all amounts."""
        return Process.of(
            *self.reactions,
            self.state.support(),
            *(erase_amounts(k) for k in self.contexts),
        )

    def is_quantitative(self) -> bool:
        return (
            not self.state.is_set()
            or any(a.is_quantitative() for a in self.reactions)
            or any(p.amounts for k in self.contexts for p in _all_prefixes(k))
        )

    def __str__(self) -> str:
        parts = sorted(str(a) for a in self.reactions)
        if self.state:
            parts.append("{" + str(self.state) + "}")
        parts.extend(str(k) for k in self.contexts)
        return "[ " + (" | ".join(parts) if parts else "{}") + " ]"


def _all_prefixes(k: ContextExpr) -> List[Prefix]:
    found: List[Prefix] = []
    stack = [k]
    while stack:
        node = stack.pop()
        if isinstance(node, Prefix):
            found.append(node)
            stack.append(node.tail)
        elif isinstance(node, Choice):
            stack.extend(node.summands)
        elif isinstance(node, Rec):
            stack.append(node.body)
    return found


@dataclass(frozen=True)
class QuantLabel:
    """``<W |> R, I, P>`` with multiset ``W``, ``R``, ``P`` and a plain set ``I``."""

    w: QuantContext
    r: EntityMultiset
    i: EntitySet
    p: EntityMultiset

    def support(self) -> Label:
        return Label(self.w.support(), self.r.support(), self.i, self.p.support())

    def __str__(self) -> str:
        return (
            f"{str(self.w) or '-'} |> {str(self.r) or '-'} ; "
            f"{format_set(self.i, '-')} ; {str(self.p) or '-'}"
        )


@dataclass(frozen=True)
class Constraint:
    """``lhs <= rhs`` for one entity at one step: consumption within availability."""

    entity: str
    lhs: int
    rhs: LinExpr
    step: int = 0

    def __post_init__(self) -> None:
        if self.lhs <= 0:
            raise ValueError("constraints are only emitted for consumed entities")

    def is_trivial(self) -> bool:
        """True for constant constraints that always hold, such as ``1 <= 1``."""
        return self.rhs.is_constant() and self.lhs <= self.rhs.constant

    def is_informative(self) -> bool:
        return not self.is_trivial()

    def holds(self, valuation: Mapping[str, int]) -> bool:
        return self.lhs <= self.rhs.evaluate(valuation)

    def __str__(self) -> str:
        return f"{self.entity}: {self.lhs} <= {self.rhs}"


@dataclass(frozen=True)
class QuantStep:
    label: QuantLabel
    target: QuantProcess
    constraints: Tuple[Constraint, ...]


def quant_step(p: QuantProcess, step_index: int = 0) -> FrozenSet[QuantStep]:
    """
    Dominant steps of a stoichiometric system.

    Enabling, disjointness and inclusion are checked on supports. The label
    ``R`` adds up the reactant multisets of fired reactions; present
    inhibitors of disabled reactions count once when not already there.

    Args:
        p: The system
        step_index: Step number recorded in the emitted constraints

    Returns:
        One step per choice of context moves, each with its constraints
    """
    reactions = sorted(p.reactions, key=str)
    available = QuantContext.from_multiset(p.state)
    offers = [sorted(context_offers(k), key=str) for k in p.contexts]
    steps = []
    for moves in _product(offers):
        w = available
        for prefix in moves:
            w = w + prefix.offer()
        support = w.support()

        consumed = EntityMultiset()
        produced = EntityMultiset()
        absent: Set[str] = set()
        present_inhibitors: Set[str] = set()
        for a in reactions:
            if enabled(a, support):
                consumed = mset_union(consumed, a.reactant_multiset)
                produced = mset_union(produced, a.product_multiset)
                absent |= a.inhibitors
            else:
                present_inhibitors |= a.inhibitors & support
                absent |= a.reactants - support
        extra = {e: 1 for e in present_inhibitors if consumed[e] == 0}
        consumed = mset_union(consumed, EntityMultiset.of(extra))

        label = QuantLabel(w, consumed, frozenset(absent), produced)
        constraints = tuple(
            Constraint(a, n, w[a], step_index) for a, n in consumed if n > 0
        )
        target = QuantProcess.of(p.reactions, produced, (pre.tail for pre in moves))
        steps.append(QuantStep(label, target, constraints))
    return frozenset(steps)


def _product(options: Sequence[List[Prefix]]) -> List[Tuple[Prefix, ...]]:
    combos: List[Tuple[Prefix, ...]] = [()]
    for opts in options:
        combos = [c + (o,) for c in combos for o in opts]
    return combos


@dataclass(frozen=True)
class QuantExploration:
    """Breadth-first unfolding of a stoichiometric system."""

    states: Tuple[QuantProcess, ...]
    depths: Tuple[int, ...]
    steps: Tuple[Tuple[int, QuantStep, int], ...]
    max_steps: Optional[int] = None

    def constraints(self) -> List[Constraint]:
        """All emitted constraints, ordered by step then entity."""
        seen: Dict[Constraint, None] = {}
        for _, step, _ in self.steps:
            for c in step.constraints:
                seen.setdefault(c, None)
        return sorted(seen, key=lambda c: (c.step, c.entity, c.lhs, str(c.rhs)))

    def deadlocks(self) -> List[int]:
        expanded = {source for source, _, _ in self.steps}
        return [
            i
            for i in range(len(self.states))
            if i not in expanded
            and (self.max_steps is None or self.depths[i] < self.max_steps)
        ]


def quant_explore(
    p: QuantProcess,
    max_steps: Optional[int] = None,
    limits: Optional[BuildLimits] = None,
) -> QuantExploration:
    """
    Explore distinct stoichiometric states breadth-first.

    Args:
        p: Initial system
        max_steps: Do not expand states this many steps away from ``p``
        limits: Bound on the number of distinct states

    Returns:
        The explored states with their depths and steps

    Raises:
        LimitExceededError: If more than ``limits.max_states`` states are found
    """
    limits = limits or BuildLimits.from_env()
    index: Dict[QuantProcess, int] = {p: 0}
    states: List[QuantProcess] = [p]
    depths: List[int] = [0]
    steps: List[Tuple[int, QuantStep, int]] = []
    frontier: Deque[int] = deque([0])

    while frontier:
        source = frontier.popleft()
        if max_steps is not None and depths[source] >= max_steps:
            continue
        successors = quant_step(states[source], depths[source])
        for step in sorted(successors, key=lambda s: (str(s.label), str(s.target))):
            target = index.get(step.target)
            if target is None:
                if len(states) >= limits.max_states:
                    raise LimitExceededError(
                        "max_states", limits.max_states, len(frontier) + 1
                    )
                target = len(states)
                index[step.target] = target
                states.append(step.target)
                depths.append(depths[source] + 1)
                frontier.append(target)
            steps.append((source, step, target))

    logger.debug(
        "quantitative exploration: %d states, %d steps", len(states), len(steps)
    )
    return QuantExploration(tuple(states), tuple(depths), tuple(steps), max_steps)


@dataclass(frozen=True)
class ConstraintReport:
    feasible: bool
    violated: Tuple[Constraint, ...] = ()

    def __bool__(self) -> bool:
        return self.feasible


def evaluate_constraints(
    constraints: Iterable[Constraint], valuation: Mapping[str, int]
) -> ConstraintReport:
    """
    Check constraints under a valuation of the context variables.

    Args:
        constraints: Constraints to check
        valuation: Positive value of every variable used

    Returns:
        A report listing the violated constraints

    Raises:
        ValuationError: If a value is not positive
        MissingVariableError: If a used variable has no value
    """
    for name, value in valuation.items():
        if value <= 0:
            raise ValuationError(f"variable '{name}' must be positive, got {value}")
    violated = tuple(c for c in constraints if not c.holds(valuation))
    return ConstraintReport(not violated, violated)


# ---------------------------------------------------------------------------
# Connected systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConnectedSystem:
    """``left <link> right``; ``left`` may itself be connected."""

    left: Union[Process, "ConnectedSystem"]
    link: EntitySet
    right: Process

    def __str__(self) -> str:
        return f"{self.left} <{format_set(self.link)}> {self.right}"


def _side_steps(
    side: Union[Process, ConnectedSystem]
) -> List[Tuple[Label, Union[Process, ConnectedSystem]]]:
    if isinstance(side, ConnectedSystem):
        return sorted(connector_step(side), key=lambda s: (str(s[0]), str(s[1])))
    steps = sorted(dominant_step(side), key=lambda s: s.sort_key())
    return [(s.label, s.target) for s in steps]


def connector_step(s: ConnectedSystem) -> FrozenSet[Tuple[Label, ConnectedSystem]]:
    """
    Lockstep moves of a connected system.

    Every dominant step of the left side pairs with every dominant step of
    the right side. The pooled label is the componentwise union, and the
    right target additionally receives the left products that lie in the
    link set.
    """
    moves = set()
    for l_label, l_target in _side_steps(s.left):
        injected = l_label.p & s.link
        for r_label, r_target in _side_steps(s.right):
            label = Label(
                l_label.w | r_label.w,
                l_label.r | r_label.r,
                l_label.i | r_label.i,
                l_label.p | r_label.p,
            )
            right = Process(normalize(r_target.mixture, injected))
            moves.add((label, ConnectedSystem(l_target, s.link, right)))
    return frozenset(moves)
