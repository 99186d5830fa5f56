"""Tests for classic module."""

import random

import pytest

from rsos.classic import (
    CorrespondenceReport,
    InteractiveProcess,
    correspondence_check,
    interactive_view,
    res,
    res_all,
    run_interactive,
    shift,
)
from rsos.core import Process, Reaction, entities, prefix
from tests.generators import random_gamma, random_reactions


class TestResult:
    """Test the result function of reactions."""

    def test_enabled_reaction_produces(self, r1):
        """Test that an enabled reaction yields its products."""
        assert res(r1, entities("a", "b")) == entities("b")

    def test_disabled_reaction_is_silent(self, r1):
        """Test that inhibited or starved reactions yield nothing."""
        assert res(r1, entities("a", "b", "c")) == frozenset()
        assert res(r1, entities("a")) == frozenset()

    def test_union_over_reactions(self, r1):
        """Test the result of a reaction set."""
        other = Reaction.of(["c"], ["d"], ["a"])
        assert res_all([r1, other], entities("a", "b", "c")) == entities("a")
        assert res_all([r1, other], entities("a", "b")) == entities("b")
        assert res_all([], entities("a")) == frozenset()


class TestInteractiveProcess:
    """Test the result recurrence."""

    def test_running_example(self, r1, gamma):
        """Test the result and state sequences of the running example."""
        ip, seq = run_interactive([r1], gamma)
        assert ip.gamma == tuple(gamma)
        assert ip.delta == (frozenset(), entities("b"), entities("b"), frozenset())
        assert seq.tau == (
            entities("a", "b"),
            entities("a", "b"),
            entities("b", "c"),
            entities("c"),
        )

    def test_empty_sequence_rejected(self, r1):
        """Test that at least one context is required."""
        with pytest.raises(ValueError):
            run_interactive([r1], [])

    def test_validation(self):
        """Test that the sequences must align and start empty."""
        with pytest.raises(ValueError, match="length"):
            InteractiveProcess((entities("a"),), ())
        with pytest.raises(ValueError, match="D_0"):
            InteractiveProcess((entities("a"),), (entities("b"),))

    def test_shift(self, gamma):
        """Test the suffix of a context sequence."""
        assert shift(gamma, 2) == (entities("c"), entities("c"))
        assert shift(gamma, 4) == ()
        with pytest.raises(IndexError):
            shift(gamma, 5)


class TestCorrespondence:
    """Test replaying interactive processes through the transition engine."""

    def test_running_example(self, r1, gamma):
        """Test that the running example replays step by step."""
        report = correspondence_check([r1], gamma)
        assert report
        assert report.steps_checked == len(gamma) + 1
        assert report.counterexample is None

    def test_report_truth(self):
        """Test that a failed report is falsy."""
        assert not CorrespondenceReport(False, 2, 2, "mismatch")

    @pytest.mark.parametrize("seed", range(200))
    def test_random_systems(self, seed):
        """Test the correspondence on random reactions and contexts."""
        rng = random.Random(seed)
        reactions = random_reactions(rng)
        gamma = random_gamma(rng)
        report = correspondence_check(reactions, gamma)
        assert report, report.reason
        assert report.steps_checked == len(gamma) + 1


class TestInteractiveView:
    """Test recognising encoded systems."""

    def test_encoded_system(self, r1, gamma, p0):
        """Test that an encoding gives back its reactions and contexts."""
        assert interactive_view(p0) == ((r1,), tuple(gamma))

    def test_parallel_chains_merge(self, r1):
        """Test that several chains are merged pointwise up to the shortest."""
        p = Process.of(r1, prefix(["a"], prefix(["b"])), prefix(["c"]))
        assert interactive_view(p) == ((r1,), (entities("a", "c"),))

    def test_other_shapes(self, r1, example1):
        """Test that a state, a loop or a missing context give no view."""
        assert interactive_view(example1.system("P2")) is None
        assert interactive_view(example1.system("Loop")) is None
        assert interactive_view(Process.of(r1)) is None
