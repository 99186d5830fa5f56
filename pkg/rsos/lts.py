"""
Reachable state spaces of RS processes.

States are canonical systems interned breadth-first, so the initial system
always has index 0 and equal builds give equal indices.
"""

import json
import logging
import os
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Deque, Dict, FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx

from rsos.core import Label, Process
from rsos.exceptions import LimitExceededError
from rsos.sos import Step, StepLimits, dominant_step, raw_step

logger = logging.getLogger(__name__)


class Mode(str, Enum):
    RAW = "raw"
    DOMINANT = "dominant"


@dataclass(frozen=True)
class BuildLimits:
    """Bounds on LTS construction; ``max_depth=None`` means unbounded."""

    max_states: int = 100_000
    max_depth: Optional[int] = None

    def __post_init__(self) -> None:
        if self.max_states <= 0:
            raise ValueError("max_states must be positive")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must not be negative")

    @classmethod
    def from_env(cls, max_depth: Optional[int] = None) -> "BuildLimits":
        """Defaults, with ``RSOS_MAX_STATES`` overriding ``max_states``."""
        raw = os.environ.get("RSOS_MAX_STATES")
        if raw is None:
            return cls(max_depth=max_depth)
        try:
            return cls(max_states=int(raw), max_depth=max_depth)
        except ValueError as exc:
            raise ValueError(f"RSOS_MAX_STATES: {exc}") from exc


@dataclass(frozen=True)
class Transition:
    source: int
    label: Label
    target: int

    def sort_key(self) -> Tuple:
        return (self.source, self.target, str(self.label))


@dataclass(frozen=True)
class Lts:
    """A finite labelled transition system over canonical systems."""

    states: Tuple[Process, ...]
    transitions: FrozenSet[Transition]
    mode: Mode = Mode.DOMINANT

    initial = 0

    def __post_init__(self) -> None:
        n = len(self.states)
        for t in self.transitions:
            if not (0 <= t.source < n and 0 <= t.target < n):
                raise ValueError(f"transition {t} leaves the state range 0..{n - 1}")

    def __len__(self) -> int:
        return len(self.states)

    def index(self, p: Process) -> int:
        return self.states.index(p)

    def sorted_transitions(self) -> List[Transition]:
        return sorted(self.transitions, key=Transition.sort_key)

    def successors(self, source: int) -> List[Transition]:
        return [t for t in self.sorted_transitions() if t.source == source]

    def out_degrees(self) -> List[int]:
        degrees = [0] * len(self.states)
        for t in self.transitions:
            degrees[t.source] += 1
        return degrees

    def deadlocks(self) -> List[int]:
        """Indices of states without outgoing transitions."""
        return [i for i, d in enumerate(self.out_degrees()) if d == 0]

    def to_networkx(self) -> nx.MultiDiGraph:
        """Graph view: nodes are state indices, edges carry their ``label``."""
        graph = nx.MultiDiGraph()
        for i, p in enumerate(self.states):
            graph.add_node(i, process=str(p))
        for t in self.sorted_transitions():
            graph.add_edge(t.source, t.target, label=t.label)
        return graph

    def has_cycle(self) -> bool:
        return not nx.is_directed_acyclic_graph(self.to_networkx())

    def reachable(self, source: int = 0) -> FrozenSet[int]:
        return frozenset(nx.descendants(self.to_networkx(), source)) | {source}


def build_lts(
    p: Process,
    mode: Mode = Mode.DOMINANT,
    limits: Optional[BuildLimits] = None,
    step_limits: Optional[StepLimits] = None,
) -> Lts:
    """
    Breadth-first closure of the step relation from ``p``.

    Args:
        p: Initial system (canonical)
        mode: ``Mode.DOMINANT`` (double arrow) or ``Mode.RAW`` (single arrow)
        limits: State and depth bounds, defaults read from the environment
        step_limits: Raw enumeration cap, only used in raw mode

    Returns:
        The reachable LTS, state 0 being ``p``

    Raises:
        LimitExceededError: If more than ``max_states`` states are found, or a
            new state lies deeper than ``max_depth``
        StateSpaceGuardError: If a raw step needs too many justifications
    """
    limits = limits or BuildLimits.from_env()
    mode = Mode(mode)
    step: Callable[[Process], Iterable[Step]]
    if mode is Mode.RAW:
        step_limits = step_limits or StepLimits.from_env()
        step = lambda q: raw_step(q, step_limits)  # noqa: E731
    else:
        step = dominant_step

    index: Dict[Process, int] = {p: 0}
    states: List[Process] = [p]
    depth: List[int] = [0]
    transitions = set()
    frontier: Deque[int] = deque([0])

    while frontier:
        source = frontier.popleft()
        successors = sorted(step(states[source]), key=Step.sort_key)
        logger.debug("state %d: %d successors", source, len(successors))
        for s in successors:
            target = index.get(s.target)
            if target is None:
                pending = len(frontier) + 1
                max_depth = limits.max_depth
                if max_depth is not None and depth[source] >= max_depth:
                    raise LimitExceededError("max_depth", max_depth, pending)
                if len(states) >= limits.max_states:
                    raise LimitExceededError("max_states", limits.max_states, pending)
                target = len(states)
                index[s.target] = target
                states.append(s.target)
                depth.append(depth[source] + 1)
                frontier.append(target)
            transitions.add(Transition(source, s.label, target))

    lts = Lts(tuple(states), frozenset(transitions), mode)
    logger.info(
        "built %s LTS: states=%d transitions=%d",
        mode.value,
        len(states),
        len(transitions),
    )
    return lts


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(lts: Lts) -> str:
    """Graphviz text; the initial state is drawn with a double border."""
    lines = ["digraph lts {", "  node [shape=box];"]
    for i, p in enumerate(lts.states):
        extra = ", peripheries=2" if i == lts.initial else ""
        lines.append(f'  s{i} [label="{_dot_escape(str(p))}"{extra}];')
    for t in lts.sorted_transitions():
        label = _dot_escape(str(t.label))
        lines.append(f'  s{t.source} -> s{t.target} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_json(lts: Lts) -> str:
    """
    Compact JSON with sorted entity arrays and a fixed field order.

    Besides ``states``, ``initial`` and ``transitions`` the document records
    the ``mode`` the LTS was built in, so raw LTSs reload as raw.
    """
    document = {
        "states": [str(p) for p in lts.states],
        "initial": lts.initial,
        "mode": lts.mode.value,
        "transitions": [
            {
                "from": t.source,
                "w": sorted(t.label.w),
                "r": sorted(t.label.r),
                "i": sorted(t.label.i),
                "p": sorted(t.label.p),
                "to": t.target,
            }
            for t in lts.sorted_transitions()
        ],
    }
    return json.dumps(document, separators=(",", ":"), ensure_ascii=False)


def import_json(text: str) -> Lts:
    """Rebuild an :class:`Lts` exported by :func:`export_json`; ``mode`` is optional."""
    from rsos.parser import parse_process

    document = json.loads(text)
    if document.get("initial", 0) != 0:
        raise ValueError("the initial state must have index 0")
    states = tuple(parse_process(s) for s in document["states"])
    transitions = frozenset(
        Transition(
            t["from"],
            Label.of(t["w"], t["r"], t["i"], t["p"]),
            t["to"],
        )
        for t in document["transitions"]
    )
    return Lts(states, transitions, Mode(document.get("mode", Mode.DOMINANT.value)))
