"""
Bio-similarity and bioHML.

Both are defined over the dominant LTS with every label replaced by its
polarity under an ambient assertion ``F``: ``True`` when the label satisfies
``F``, ``False`` otherwise.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from rsos.assertions import Assertion
from rsos.core import Process
from rsos.exceptions import FormulaError
from rsos.lts import BuildLimits, Lts, Mode, build_lts

logger = logging.getLogger(__name__)

Edge = Tuple[int, bool, int]


class BoxSemantics(str, Enum):
    """How ``[χ]G`` treats edges of the other polarity.

    ``STRICT`` lets any such edge falsify the box; ``STANDARD`` ignores them.
    """

    STRICT = "strict"
    STANDARD = "standard"


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------


class BioHML:
    """Base class of bioHML formulas."""

    def assertions(self) -> FrozenSet[str]:
        """Names of the assertions the modalities were written with."""
        return frozenset()

    def depth(self) -> int:
        """Modal depth."""
        return 0

    def has_box(self) -> bool:
        return False


@dataclass(frozen=True)
class TT(BioHML):
    def __str__(self) -> str:
        return "tt"


@dataclass(frozen=True)
class FF(BioHML):
    def __str__(self) -> str:
        return "ff"


@dataclass(frozen=True)
class _Junction(BioHML):
    left: BioHML
    right: BioHML
    keyword = ""

    def assertions(self) -> FrozenSet[str]:
        return self.left.assertions() | self.right.assertions()

    def depth(self) -> int:
        return max(self.left.depth(), self.right.depth())

    def has_box(self) -> bool:
        return self.left.has_box() or self.right.has_box()

    def _side(self, sub: BioHML, right: bool) -> str:
        # Junctions parse left-associatively and "and" binds tighter than "or".
        if isinstance(sub, Or):
            loose = right or isinstance(self, And)
        elif isinstance(sub, And):
            loose = right and isinstance(self, And)
        else:
            loose = False
        return f"({sub})" if loose else str(sub)

    def __str__(self) -> str:
        left = self._side(self.left, False)
        right = self._side(self.right, True)
        return f"{left} {self.keyword} {right}"


@dataclass(frozen=True)
class And(_Junction):
    keyword = "and"


@dataclass(frozen=True)
class Or(_Junction):
    keyword = "or"


@dataclass(frozen=True)
class _Modal(BioHML):
    positive: bool
    assertion: str
    body: BioHML

    def assertions(self) -> FrozenSet[str]:
        return self.body.assertions() | {self.assertion}

    def depth(self) -> int:
        return 1 + self.body.depth()

    def _chi(self) -> str:
        return self.assertion if self.positive else "!" + self.assertion

    def _body(self) -> str:
        return f"({self.body})" if isinstance(self.body, _Junction) else str(self.body)


@dataclass(frozen=True)
class Diamond(_Modal):
    def has_box(self) -> bool:
        return self.body.has_box()

    def __str__(self) -> str:
        return f"<{self._chi()}> {self._body()}"


@dataclass(frozen=True)
class Box(_Modal):
    def has_box(self) -> bool:
        return True

    def __str__(self) -> str:
        return f"[{self._chi()}] {self._body()}"


def conjunction(formulas: Iterable[BioHML]) -> BioHML:
    """Conjunction of distinct formulas, ``tt`` when empty."""
    distinct = sorted(set(formulas), key=str)
    if not distinct:
        return TT()
    result = distinct[0]
    for g in distinct[1:]:
        result = And(result, g)
    return result


def converse(g: BioHML, box: BoxSemantics = BoxSemantics.STRICT) -> BioHML:
    """
    A formula true exactly where ``g`` is false under the given box reading.

    Under the strict reading ``[χ]G`` fails where some edge has the other
    polarity or leads outside ``G``, so its converse is ``<¬χ> tt or <χ> Ḡ``.
    A diamond has no strict converse: "every χ-edge avoids G" is not
    expressible once edges of the other polarity may falsify a box.

    Args:
        g: The formula
        box: Box reading the converse must be complementary under

    Returns:
        The converse formula

    Raises:
        FormulaError: If ``box`` is strict and ``g`` contains a diamond
    """
    if isinstance(g, TT):
        return FF()
    if isinstance(g, FF):
        return TT()
    if isinstance(g, And):
        return Or(converse(g.left, box), converse(g.right, box))
    if isinstance(g, Or):
        return And(converse(g.left, box), converse(g.right, box))
    if isinstance(g, Diamond):
        if box is BoxSemantics.STRICT:
            raise FormulaError(
                f"{g} has no converse under the strict box reading; "
                "use the standard reading"
            )
        return Box(g.positive, g.assertion, converse(g.body, box))
    if isinstance(g, Box):
        dual = Diamond(g.positive, g.assertion, converse(g.body, box))
        if box is BoxSemantics.STRICT:
            return Or(Diamond(not g.positive, g.assertion, TT()), dual)
        return dual
    raise TypeError(f"not a bioHML formula: {g!r}")


# ---------------------------------------------------------------------------
# Abstract transition systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AbstractLts:
    """States ``0..size-1`` and edges ``(source, polarity, target)``."""

    size: int
    edges: FrozenSet[Edge]
    initial: int = 0

    def successors(self) -> List[Set[Tuple[bool, int]]]:
        succ: List[Set[Tuple[bool, int]]] = [set() for _ in range(self.size)]
        for s, pol, t in self.edges:
            succ[s].add((pol, t))
        return succ

    def union(self, other: "AbstractLts") -> Tuple["AbstractLts", int]:
        """Disjoint union; ``other``'s states are shifted by the returned offset."""
        offset = self.size
        shifted = {(s + offset, pol, t + offset) for s, pol, t in other.edges}
        joint = AbstractLts(self.size + other.size, self.edges | shifted, self.initial)
        return joint, offset


def abstract_lts(lts: Lts, f: Assertion) -> AbstractLts:
    """Relabel every edge with its polarity under ``f``; coinciding edges merge."""
    if lts.mode is not Mode.DOMINANT:
        logger.warning(
            "abstracting a %s LTS; bio-similarity is defined on dominant ones",
            lts.mode.value,
        )
    edges = frozenset((t.source, f.holds(t.label), t.target) for t in lts.transitions)
    return AbstractLts(len(lts.states), edges, lts.initial)


def _dominant_abstraction(
    p: Process, f: Assertion, limits: Optional[BuildLimits]
) -> AbstractLts:
    return abstract_lts(build_lts(p, Mode.DOMINANT, limits), f)


# ---------------------------------------------------------------------------
# Partition refinement
# ---------------------------------------------------------------------------


class Refinement:
    """
    Signature-based partition refinement with its full history.

    ``rounds[k][s]`` is the block of state ``s`` after ``k`` rounds; round 0
    puts every state in one block and the last round is the coarsest
    bisimulation.
    """

    def __init__(self, system: AbstractLts):
        self.system = system
        self._succ = system.successors()
        current = [0] * system.size
        self.rounds: List[List[int]] = [current]
        while True:
            signatures: Dict[Tuple, int] = {}
            refined = []
            for s in range(system.size):
                moves = frozenset((pol, current[t]) for pol, t in self._succ[s])
                sig = (current[s], moves)
                refined.append(signatures.setdefault(sig, len(signatures)))
            logger.debug(
                "refinement round %d: %d blocks", len(self.rounds), len(signatures)
            )
            if len(signatures) == len(set(current)):
                break
            self.rounds.append(refined)
            current = refined

    @property
    def blocks(self) -> List[int]:
        return self.rounds[-1]

    def equivalent(self, s: int, t: int) -> bool:
        return self.blocks[s] == self.blocks[t]

    def split_round(self, s: int, t: int) -> Optional[int]:
        """First round separating ``s`` and ``t``, or ``None`` if they are bisimilar."""
        for k, blocks in enumerate(self.rounds):
            if blocks[s] != blocks[t]:
                return k
        return None

    def signature(self, s: int, k: int) -> FrozenSet[Tuple[bool, int]]:
        return frozenset((pol, self.rounds[k][t]) for pol, t in self._succ[s])

    def successors(self, s: int) -> Set[Tuple[bool, int]]:
        return self._succ[s]


def bisimilar(
    p: Process, q: Process, f: Assertion, limits: Optional[BuildLimits] = None
) -> bool:
    """
    Bio-similarity of two systems with respect to ``f``.

    Args:
        p: First system
        q: Second system
        f: The ambient assertion
        limits: Bounds for building both dominant LTSs

    Returns:
        True if the initial states are bisimilar in the abstract LTSs
    """
    left = _dominant_abstraction(p, f, limits)
    right = _dominant_abstraction(q, f, limits)
    joint, offset = left.union(right)
    return Refinement(joint).equivalent(left.initial, right.initial + offset)


# ---------------------------------------------------------------------------
# Model checking
# ---------------------------------------------------------------------------


def satisfying_states(
    system: AbstractLts, g: BioHML, box: BoxSemantics = BoxSemantics.STRICT
) -> FrozenSet[int]:
    """``⟦g⟧`` over an abstract LTS, computed bottom-up."""
    succ = system.successors()
    everything = frozenset(range(system.size))
    memo: Dict[BioHML, FrozenSet[int]] = {}

    def sat(h: BioHML) -> FrozenSet[int]:
        if h in memo:
            return memo[h]
        if isinstance(h, TT):
            result = everything
        elif isinstance(h, FF):
            result = frozenset()
        elif isinstance(h, And):
            result = sat(h.left) & sat(h.right)
        elif isinstance(h, Or):
            result = sat(h.left) | sat(h.right)
        elif isinstance(h, Diamond):
            body = sat(h.body)
            result = frozenset(
                s
                for s in everything
                if any(pol == h.positive and t in body for pol, t in succ[s])
            )
        elif isinstance(h, Box):
            body = sat(h.body)
            if box is BoxSemantics.STRICT:
                result = frozenset(
                    s
                    for s in everything
                    if all(pol == h.positive and t in body for pol, t in succ[s])
                )
            else:
                result = frozenset(
                    s
                    for s in everything
                    if all(t in body for pol, t in succ[s] if pol == h.positive)
                )
        else:
            raise TypeError(f"not a bioHML formula: {h!r}")
        memo[h] = result
        return result

    return sat(g)


def bind_formula(g: BioHML, assertion_name: Optional[str]) -> None:
    """Raise :class:`FormulaError` unless ``g`` speaks about one assertion only."""
    names = g.assertions()
    if len(names) > 1:
        raise FormulaError(f"formula {g} mixes assertions {', '.join(sorted(names))}")
    if assertion_name is not None and names and names != {assertion_name}:
        raise FormulaError(
            f"formula {g} is written for '{next(iter(names))}', "
            f"not for '{assertion_name}'"
        )


def check_formula(
    p: Process,
    g: BioHML,
    f: Assertion,
    assertion_name: Optional[str] = None,
    box: BoxSemantics = BoxSemantics.STRICT,
    limits: Optional[BuildLimits] = None,
) -> bool:
    """
    Does ``p`` satisfy ``g`` when modalities are read through ``f``?

    Args:
        p: The system
        g: The formula
        f: The ambient assertion
        assertion_name: Name of ``f``; when given, ``g`` must be written for it
        box: Box reading, strict by default
        limits: Bounds for building the dominant LTS

    Returns:
        True if the initial state belongs to ``⟦g⟧``

    Raises:
        FormulaError: If ``g`` is bound to another assertion
        LimitExceededError: If the LTS is too large
    """
    bind_formula(g, assertion_name)
    system = _dominant_abstraction(p, f, limits)
    return system.initial in satisfying_states(system, g, box)


# ---------------------------------------------------------------------------
# Distinguishing formulas
# ---------------------------------------------------------------------------


class _Distinguisher:
    """Builds formulas true at one state and false at another."""

    def __init__(self, refinement: Refinement, name: str):
        self.refinement = refinement
        self.name = name
        self._memo: Dict[Tuple[int, int], BioHML] = {}

    @staticmethod
    def _rank(g: BioHML) -> Tuple[bool, int, int]:
        return (g.has_box(), g.depth(), len(str(g)))

    def positive_witnesses(self, s: int, t: int, k: int) -> List[BioHML]:
        """Diamonds for moves of ``s`` that ``t`` cannot match at round ``k-1``."""
        ref = self.refinement
        before = ref.rounds[k - 1]
        unmatched = ref.signature(s, k - 1) - ref.signature(t, k - 1)
        witnesses = []
        for pol, block in sorted(unmatched):
            answers = [t2 for p2, t2 in ref.successors(t) if p2 == pol]
            moves = ref.successors(s)
            matching = sorted(
                s2 for p2, s2 in moves if p2 == pol and before[s2] == block
            )
            for s2 in matching:
                body = conjunction(self.formula(s2, t2) for t2 in answers)
                witnesses.append(Diamond(pol, self.name, body))
        return witnesses

    def formula(self, s: int, t: int) -> BioHML:
        """A formula true at ``s`` and false at ``t`` under the standard box reading."""
        key = (s, t)
        if key in self._memo:
            return self._memo[key]
        best = min(self._candidates(s, t), key=self._rank)
        self._memo[key] = best
        return best

    def _candidates(self, s: int, t: int) -> List[BioHML]:
        k = self.refinement.split_round(s, t)
        if k is None:
            raise ValueError(f"states {s} and {t} are bisimilar")
        candidates = self.positive_witnesses(s, t, k)
        candidates += [
            converse(g, BoxSemantics.STANDARD)
            for g in self.positive_witnesses(t, s, k)
        ]
        return candidates

    def either_way(self, s: int, t: int) -> BioHML:
        """A formula separating ``s`` and ``t`` in whichever orientation is simpler."""
        return min((self.formula(s, t), self.formula(t, s)), key=self._rank)

    def ranked(self, s: int, t: int) -> List[BioHML]:
        """Top-level witnesses for the pair in both orientations, simplest first."""
        pool = self._candidates(s, t) + self._candidates(t, s)
        return sorted(dict.fromkeys(pool), key=self._rank)


def distinguishing_formula(
    p: Process,
    q: Process,
    f: Assertion,
    assertion_name: str = "F",
    limits: Optional[BuildLimits] = None,
    box: BoxSemantics = BoxSemantics.STRICT,
) -> Optional[BioHML]:
    """
    A bioHML formula telling ``p`` and ``q`` apart, or ``None`` if they are bio-similar.

    Witnesses are built for the standard box reading and box-free ones are
    preferred. Under the strict reading the simplest candidate that still
    separates the systems is returned.

    Args:
        p: First system
        q: Second system
        f: The ambient assertion
        assertion_name: Name used in the modalities of the witness
        limits: Bounds for building both dominant LTSs
        box: Box reading the witness must separate the systems under

    Returns:
        A formula satisfied by exactly one of ``p`` and ``q``, or ``None``

    Raises:
        FormulaError: If no candidate separates the systems under the strict
            reading
    """
    left = _dominant_abstraction(p, f, limits)
    right = _dominant_abstraction(q, f, limits)
    joint, offset = left.union(right)
    refinement = Refinement(joint)
    s, t = left.initial, right.initial + offset
    if refinement.equivalent(s, t):
        return None

    builder = _Distinguisher(refinement, assertion_name)
    if box is BoxSemantics.STANDARD:
        return builder.either_way(s, t)
    for g in builder.ranked(s, t):
        states = satisfying_states(joint, g, box)
        if (s in states) != (t in states):
            return g
        logger.debug("witness %s does not separate under the strict reading", g)
    raise FormulaError(
        "the systems are not bio-similar, but no witness separates them "
        "under the strict box reading"
    )


def distinguishing_formulas_for(
    system: AbstractLts, pairs: Sequence[Tuple[int, int]], assertion_name: str = "F"
) -> Dict[Tuple[int, int], Optional[BioHML]]:
    """Standard-reading witnesses for several state pairs, sharing the refinement."""
    refinement = Refinement(system)
    builder = _Distinguisher(refinement, assertion_name)
    return {
        (s, t): None if refinement.equivalent(s, t) else builder.either_way(s, t)
        for s, t in pairs
    }
