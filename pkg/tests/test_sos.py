"""Tests for sos module."""

import random

import pytest

from rsos.core import NIL, Label, Process, choice, entities, normalize, prefix
from rsos.exceptions import StateSpaceGuardError
from rsos.sos import (
    Justification,
    Rule,
    StepLimits,
    context_moves,
    dominant_of,
    dominant_step,
    dominates,
    enabled,
    is_deadlocked,
    mixture_steps,
    raw_step,
)
from tests.generators import random_process, random_reactions


def only(steps):
    assert len(steps) == 1
    return next(iter(steps))


class TestEnabling:
    """Test the enabling predicate, justifications and context moves."""

    def test_enabled(self, r1):
        """Test that reactants present and inhibitors absent enable a reaction."""
        assert enabled(r1, entities("a", "b"))
        assert not enabled(r1, entities("a", "b", "c"))
        assert not enabled(r1, entities("a"))

    def test_empty_justification_rejected(self):
        """Test that a justification must name something."""
        with pytest.raises(ValueError):
            Justification(frozenset(), frozenset())

    def test_admissible_for(self, r1):
        """Test that justifications stay inside I and R."""
        assert Justification(entities("c"), frozenset()).admissible_for(r1)
        assert not Justification(entities("a"), frozenset()).admissible_for(r1)

    def test_context_moves(self):
        """Test that 0 cannot move and a prefix offers its set."""
        assert context_moves(NIL) == frozenset()
        k = prefix(["a"], prefix(["b"]))
        assert context_moves(k) == frozenset([(entities("a"), prefix(["b"]))])


class TestDominantStep:
    """Test double-arrow transitions."""

    def test_first_step(self, r1, p0):
        """Test that the first step of the running example fires the reaction."""
        step = only(dominant_step(p0))
        assert step.label == Label.of(["a", "b"], ["a", "b"], ["c"], ["b"])
        tail = prefix(["a"], prefix(["c"], prefix(["c"])))
        assert step.target == Process.of(r1, {"b"}, tail)
        assert [c.rule for c in step.provenance] == [Rule.PRO]

    def test_inhibited_step(self, r1):
        """Test the maximal justification of an inhibited reaction."""
        p = Process.of(r1, {"b"}, prefix(["c"], prefix(["c"])))
        step = only(dominant_step(p))
        assert step.label == Label.of(["b", "c"], ["c"], ["a"], [])
        assert step.target == Process.of(r1, prefix(["c"]))
        assert [c.rule for c in step.provenance] == [Rule.INH]

    def test_nil_context_deadlocks(self, r1):
        """Test that a system whose context is 0 has no transition."""
        p = Process.of(r1, {"b"}, NIL)
        assert dominant_step(p) == frozenset()
        assert is_deadlocked(p)

    def test_choice_gives_one_step_per_summand(self, r1):
        """Test that each summand of a choice is a separate move."""
        p = Process.of(r1, choice(prefix(["a", "b"]), prefix(["c"])))
        steps = dominant_step(p)
        assert len(steps) == 2
        assert {s.target for s in steps} == {
            Process.of(r1, {"b"}, NIL),
            Process.of(r1, NIL),
        }

    def test_state_entities_join_w(self, r1):
        """Test that present entities join the context offer."""
        p = Process.of(r1, {"b"}, prefix(["a"]))
        step = only(dominant_step(p))
        assert step.label.w == entities("a", "b")
        assert step.label.p == entities("b")


class TestRawStep:
    """Test single-arrow transitions."""

    def test_seven_transitions(self, r1):
        """Test all justifications of a reaction with both reactants missing."""
        p = Process.of(r1, prefix(["c"]))
        steps = raw_step(p)
        assert len(steps) == 7
        assert {s.target for s in steps} == {Process.of(r1, NIL)}
        assert all(s.label.w == entities("c") for s in steps)

    def test_three_transitions(self, r1):
        """Test justifications when one reactant is present."""
        p = Process.of(r1, {"b"}, prefix(["c"], prefix(["c"])))
        assert len(raw_step(p)) == 3

    def test_enabled_reaction_has_one_step(self, p0):
        """Test that an enabled reaction can only use (Pro)."""
        assert raw_step(p0) == dominant_step(p0)

    def test_guard(self, r1):
        """Test that a low cap stops the enumeration."""
        p = Process.of(r1, prefix(["c"]))
        with pytest.raises(StateSpaceGuardError) as info:
            raw_step(p, StepLimits(max_justifications=2))
        assert info.value.combinations == 7
        assert info.value.cap == 2

    def test_limits_from_env(self, monkeypatch):
        """Test reading the cap from the environment."""
        monkeypatch.setenv("RSOS_MAX_JUSTIFICATIONS", "42")
        assert StepLimits.from_env().max_justifications == 42
        monkeypatch.setenv("RSOS_MAX_JUSTIFICATIONS", "many")
        with pytest.raises(ValueError, match="RSOS_MAX_JUSTIFICATIONS"):
            StepLimits.from_env()


class TestDominance:
    """Test the dominance order and filter."""

    def test_dominates(self):
        """Test componentwise inclusion with equal W and P."""
        upper = Label.of(["c"], ["c"], ["a", "b"], [])
        lower = Label.of(["c"], [], ["a"], [])
        assert dominates(upper, lower)
        assert not dominates(lower, upper)
        assert dominates(upper, upper)
        assert not dominates(upper, Label.of(["b"], [], ["a"], []))

    def test_dominant_of_raw(self, r1):
        """Test that filtering raw steps keeps the maximal justification."""
        p = Process.of(r1, prefix(["c"]))
        step = only(dominant_of(raw_step(p)))
        assert step.label == Label.of(["c"], ["c"], ["a", "b"], [])


class TestMixtureSteps:
    """Test rule-level transitions of mixtures."""

    def test_reaction_soup(self, r1):
        """Test that a pure reaction soup has W empty and keeps its reactions."""
        soup = normalize(r1)
        steps = mixture_steps(soup)
        assert steps
        for label, target in steps:
            assert label.w == frozenset()
            assert target == normalize(r1, label.p)

    def test_pro_on_disabled_reaction(self, r1):
        """Test that below the top level a disabled reaction may still use (Pro)."""
        steps = mixture_steps(normalize(r1))
        assert any(label.p == entities("b") for label, _ in steps)


class TestRandomSystems:
    """Property checks over seeded random systems."""

    @pytest.mark.parametrize("seed", range(100))
    def test_dominant_is_maxima_of_raw(self, seed):
        """Test that the double arrow is the dominance filter of the single arrow."""
        p = random_process(random.Random(seed))
        raw = raw_step(p)
        assert dominant_of(raw) == dominant_step(p)

    @pytest.mark.parametrize("seed", range(100))
    def test_label_invariants(self, seed):
        """Test label well-formedness, R within W, and products in the target."""
        p = random_process(random.Random(seed))
        for step in raw_step(p):
            assert step.label.is_well_formed()
            assert step.label.r <= step.label.w
            assert not (step.label.w & step.label.i)
            assert step.target.state == step.label.p
            assert step.target.reactions == p.reactions

    @pytest.mark.parametrize("seed", range(50))
    def test_raw_is_gated_mixture_relation(self, seed):
        """Test that top-level steps are the mixture steps with R within W."""
        p = random_process(random.Random(seed), most_reactions=2)
        gated = {(lab, m) for lab, m in mixture_steps(p.mixture) if lab.r <= lab.w}
        assert {(s.label, s.target.mixture) for s in raw_step(p)} == gated

    @pytest.mark.parametrize("seed", range(50))
    def test_soup_steps(self, seed):
        """Test that reaction soups never see entities."""
        soup = normalize(*random_reactions(random.Random(seed), 2))
        for label, target in mixture_steps(soup):
            assert label.w == frozenset()
            assert target == normalize(*soup.reactions, label.p)
