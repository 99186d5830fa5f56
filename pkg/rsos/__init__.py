"""
rsos - Reaction systems as processes
====================================

A workbench for reaction systems written as process terms: structural
operational semantics, labelled transition systems, the correspondence with
set-rewriting interactive processes, bio-similarity with distinguishing
bioHML formulas, stoichiometric constraints and connected systems.

Basic Usage:
    >>> import rsos
    >>> spec = rsos.load_spec("example1")
    >>> lts = rsos.build(spec.system("P0"))
    >>> len(lts), len(lts.transitions)
    (5, 4)

Checking formulas:
    >>> spec = rsos.load_spec("biosim")
    >>> rsos.check_formula(spec.system("P0b"), spec.formula("G"), spec.assertion("F1"))
    True
"""

from pathlib import Path
from typing import Union

from rsos.__version__ import __version__
from rsos.assertions import Assertion, Position, eval_assertion, label_equiv
from rsos.classic import correspondence_check, run_interactive
from rsos.core import Label, Process, Reaction, encode, entities, prefix
from rsos.data.loader import SpecLoader, resolve_spec
from rsos.equiv import (
    BioHML,
    BoxSemantics,
    bisimilar,
    check_formula,
    distinguishing_formula,
)
from rsos.exceptions import (
    LimitExceededError,
    RsosError,
    SpecError,
    SpecSyntaxError,
    StateSpaceGuardError,
)
from rsos.extensions import ConnectedSystem, QuantProcess, connector_step, quant_step
from rsos.lts import BuildLimits, Lts, Mode, build_lts, export_dot, export_json
from rsos.parser import Spec, parse_assertion, parse_formula, parse_spec
from rsos.sos import dominant_step, raw_step

__all__ = [
    "__version__",
    "Assertion",
    "BioHML",
    "BoxSemantics",
    "BuildLimits",
    "ConnectedSystem",
    "Label",
    "Lts",
    "Mode",
    "Position",
    "Process",
    "QuantProcess",
    "Reaction",
    "Spec",
    "SpecLoader",
    "RsosError",
    "SpecError",
    "SpecSyntaxError",
    "LimitExceededError",
    "StateSpaceGuardError",
    "bisimilar",
    "build",
    "build_lts",
    "check_formula",
    "connector_step",
    "correspondence_check",
    "distinguishing_formula",
    "dominant_step",
    "encode",
    "entities",
    "eval_assertion",
    "export_dot",
    "export_json",
    "label_equiv",
    "load_spec",
    "parse_assertion",
    "parse_formula",
    "parse_spec",
    "prefix",
    "quant_step",
    "raw_step",
    "run_interactive",
]


# Convenience functions for quick usage
def load_spec(source: Union[str, Path]) -> Spec:
    """
    Load a specification from a file or by bundled example name.

    Args:
        source: Path to a ``.rs-spec`` file, or a name such as ``"example1"``

    Returns:
        The parsed specification
    """
    return resolve_spec(source)


def build(p: Process, mode: Union[Mode, str] = Mode.DOMINANT) -> Lts:
    """
    Build the LTS of a system with limits read from the environment.

    Args:
        p: Initial system
        mode: ``"dominant"`` (default) or ``"raw"``

    Returns:
        The reachable LTS
    """
    return build_lts(p, Mode(mode), BuildLimits.from_env())
