"""
Set-rewriting semantics of reaction systems.

An interactive process pairs a context sequence ``C_0..C_n`` with the result
sequence ``D_0 = ∅``, ``D_{i+1} = res_A(D_i ∪ C_i)``. It is computed here
independently of the transition engine and used to cross-check it.
"""

import logging
from dataclasses import dataclass
from typing import AbstractSet, Iterable, List, Optional, Sequence, Tuple

from rsos.core import (
    EMPTY,
    NIL,
    EntitySet,
    Process,
    Reaction,
    encode,
    is_prefix_only,
    prefix_sequence,
)
from rsos.exceptions import IndexOutOfRangeError
from rsos.sos import dominant_step, enabled

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InteractiveProcess:
    gamma: Tuple[EntitySet, ...]
    delta: Tuple[EntitySet, ...]

    def __post_init__(self) -> None:
        if len(self.gamma) != len(self.delta):
            raise ValueError("context and result sequences differ in length")
        if self.delta and self.delta[0]:
            raise ValueError("D_0 must be empty")


@dataclass(frozen=True)
class StateSequence:
    """``W_i = C_i ∪ D_i``."""

    tau: Tuple[EntitySet, ...]


@dataclass(frozen=True)
class CorrespondenceReport:
    """Outcome of replaying an interactive process through its encoding."""

    passed: bool
    steps_checked: int
    counterexample: Optional[int] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.passed


def res(reaction: Reaction, w: AbstractSet[str]) -> EntitySet:
    """Products of ``reaction`` if it is enabled by ``w``, else ∅."""
    return reaction.products if enabled(reaction, w) else EMPTY


def res_all(reactions: Iterable[Reaction], w: AbstractSet[str]) -> EntitySet:
    return frozenset().union(*(res(a, w) for a in reactions))


def shift(gamma: Sequence[AbstractSet[str]], k: int) -> Tuple[EntitySet, ...]:
    """The sequence shift ``C_k, ..., C_n``."""
    if k < 0 or k > len(gamma):
        raise IndexOutOfRangeError(f"shift {k} outside 0..{len(gamma)}")
    return tuple(frozenset(c) for c in gamma[k:])


def run_interactive(
    reactions: Iterable[Reaction], gamma: Sequence[AbstractSet[str]]
) -> Tuple[InteractiveProcess, StateSequence]:
    """
    Run the result recurrence over a context sequence.

    Args:
        reactions: The reaction set ``A``
        gamma: Context sequence ``C_0..C_n`` (non-empty)

    Returns:
        The interactive process and its state sequence
    """
    if not gamma:
        raise ValueError("the context sequence must not be empty")
    reactions = list(reactions)
    contexts = tuple(frozenset(c) for c in gamma)
    delta: List[EntitySet] = [EMPTY]
    for c in contexts[:-1]:
        delta.append(res_all(reactions, delta[-1] | c))
    tau = tuple(c | d for c, d in zip(contexts, delta))
    return InteractiveProcess(contexts, tuple(delta)), StateSequence(tau)


def correspondence_check(
    reactions: Iterable[Reaction], gamma: Sequence[AbstractSet[str]]
) -> CorrespondenceReport:
    """
    Replay an interactive process through the dominant steps of its encoding.

    For every ``i = 0..n`` the encoded system ``[A | D_i | C_i. ... .C_n.0]``
    must have exactly one dominant step, labelled with ``W = W_i`` and
    ``P = D_{i+1}``, into the encoding of step ``i+1``. The step after ``C_n``
    leads to ``[A | D_{n+1} | 0]``, which must be deadlocked.
    """
    reactions = frozenset(reactions)
    ip, seq = run_interactive(reactions, gamma)
    n = len(ip.gamma) - 1
    results = list(ip.delta) + [res_all(reactions, seq.tau[n])]

    def fail(i: int, reason: str) -> CorrespondenceReport:
        logger.info("correspondence failed at step %d: %s", i, reason)
        return CorrespondenceReport(False, i, i, reason)

    for i in range(n + 1):
        state = encode(reactions, ip.gamma, results[i], i)
        steps = dominant_step(state)
        if len(steps) != 1:
            return fail(i, f"{len(steps)} dominant steps from {state}")
        step = next(iter(steps))
        if step.label.w != seq.tau[i]:
            expected_w = sorted(seq.tau[i])
            return fail(i, f"W is {sorted(step.label.w)}, expected {expected_w}")
        if step.label.p != results[i + 1]:
            expected_p = sorted(results[i + 1])
            return fail(i, f"P is {sorted(step.label.p)}, expected {expected_p}")
        if i < n:
            expected = encode(reactions, ip.gamma, results[i + 1], i + 1)
        else:
            expected = Process.of(*reactions, results[n + 1], NIL)
        if step.target != expected:
            return fail(i, f"target is {step.target}, expected {expected}")

    final = Process.of(*reactions, results[n + 1], NIL)
    if dominant_step(final):
        return fail(n + 1, f"{final} is not deadlocked")

    logger.info("correspondence holds for %d steps", n + 1)
    return CorrespondenceReport(True, n + 2)


def interactive_view(
    p: Process,
) -> Optional[Tuple[Tuple[Reaction, ...], Tuple[EntitySet, ...]]]:
    """
    Reactions and context sequence of a system shaped like an encoded one.

    The state must be empty and every context a finite prefix chain; with
    several chains ``C_i`` is their pointwise union up to the shortest one.
    Returns ``None`` for other systems.
    """
    if p.state or not p.contexts or not all(is_prefix_only(k) for k in p.contexts):
        return None
    chains = [prefix_sequence(k) for k in p.contexts]
    length = min(len(c) for c in chains)
    if length == 0:
        return None
    gamma = tuple(frozenset().union(*(c[i] for c in chains)) for i in range(length))
    return tuple(sorted(p.reactions, key=str)), gamma
