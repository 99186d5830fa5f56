"""
Text formatting module for command output.
"""

from abc import ABC, abstractmethod
from typing import AbstractSet, Any, Dict, Iterable, List, Optional, Sequence

from rsos.core import format_set


class BaseFormatter(ABC):
    """Abstract base class for formatters."""

    @abstractmethod
    def format(self, data: Dict[str, Any]) -> str:
        """Format the data into a string."""
        pass


def format_sequence(sets: Sequence[AbstractSet[str]]) -> str:
    """``{a,b}, {b}, {}`` for a sequence of entity sets."""
    return ", ".join("{" + format_set(s) + "}" for s in sets)


class TraceFormatter(BaseFormatter):
    """
    Breadth-first step listing of a system run.
    """

    def format(self, data: Dict[str, Any]) -> str:
        """
        Format a run.

        Args:
            data: Dictionary with ``initial`` (a system), ``entries`` (see
                :meth:`format_entries`) and optionally ``tau`` and ``delta``
                (entity set sequences of the interactive process)

        Returns:
            One line per step, ``DEADLOCK`` lines for stuck states
        """
        lines = [f"initial: {data['initial']}"]
        lines.extend(self.format_entries(data.get("entries", [])))
        if data.get("tau") is not None:
            lines.append(f"tau = {format_sequence(data['tau'])}")
            lines.append(f"delta = {format_sequence(data['delta'])}")
        return "\n".join(lines)

    def format_entries(self, entries: Iterable[Dict[str, Any]]) -> List[str]:
        """
        Format trace entries.

        Args:
            entries: Dictionaries with ``depth``, ``label`` and ``target``;
                a ``None`` label marks ``target`` as deadlocked

        Returns:
            Formatted lines
        """
        lines = []
        for entry in entries:
            if entry["label"] is None:
                lines.append(f"DEADLOCK {entry['target']}")
            else:
                lines.append(f"{entry['depth']}: {entry['label']} => {entry['target']}")
        return lines


class SummaryFormatter(BaseFormatter):
    """
    One-line size summary of a transition system.
    """

    def format(self, data: Dict[str, Any]) -> str:
        """
        Format LTS counts.

        Args:
            data: Dictionary with ``states``, ``transitions`` and ``deadlocks``

        Returns:
            ``states=N transitions=M deadlocks=D``
        """
        return (
            f"states={data['states']} transitions={data['transitions']} "
            f"deadlocks={data['deadlocks']}"
        )


class ConstraintFormatter(BaseFormatter):
    """
    Per-step listing of stoichiometric constraints.
    """

    def __init__(self, violated_marker: str = " (VIOLATED)"):
        """
        Initialize the formatter.

        Args:
            violated_marker: Suffix appended to violated constraints
        """
        self.violated_marker = violated_marker

    def format(self, data: Dict[str, Any]) -> str:
        """
        Format constraints.

        Args:
            data: Dictionary with ``constraints`` and ``violated`` (a
                collection of the violated ones)

        Returns:
            ``step i: entity: lhs <= rhs`` lines, or ``no constraints``
        """
        constraints = list(data.get("constraints", []))
        if not constraints:
            return "no constraints"
        violated = set(data.get("violated", ()))
        lines = []
        for c in constraints:
            marker = self.violated_marker if c in violated else ""
            lines.append(f"step {c.step}: {c}{marker}")
        return "\n".join(lines)


class VerdictFormatter(BaseFormatter):
    """
    ``BISIMILAR`` / ``NOT BISIMILAR`` and ``SAT`` / ``UNSAT`` verdicts.
    """

    def __init__(self, positive: str, negative: str):
        self.positive = positive
        self.negative = negative

    def format(self, data: Dict[str, Any]) -> str:
        """
        Format a verdict.

        Args:
            data: Dictionary with ``holds`` and an optional ``witness``
                printed under a negative verdict

        Returns:
            The verdict, with the witness on its own line
        """
        if data["holds"]:
            return self.positive
        witness: Optional[Any] = data.get("witness")
        return self.negative if witness is None else f"{self.negative}\n{witness}"
