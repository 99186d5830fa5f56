"""Tests for equiv module."""

import random

import pytest

from rsos.assertions import NonEmpty, Position, SubsetOf
from rsos.core import entities
from rsos.equiv import (
    FF,
    TT,
    AbstractLts,
    And,
    Box,
    BoxSemantics,
    Diamond,
    Or,
    Refinement,
    abstract_lts,
    bisimilar,
    check_formula,
    conjunction,
    converse,
    distinguishing_formula,
    distinguishing_formulas_for,
    satisfying_states,
)
from rsos.exceptions import FormulaError
from rsos.lts import build_lts
from tests.generators import UNIVERSE, random_process

#   0 --T--> 1,  0 --F--> 2,  1 --T--> 1
MIXED = AbstractLts(3, frozenset([(0, True, 1), (0, False, 2), (1, True, 1)]))


def sat(system, g, box=BoxSemantics.STANDARD):
    return satisfying_states(system, g, box)


class TestFormulas:
    """Test bioHML terms."""

    def test_rendering(self, biosim):
        """Test the printed form of a declared formula."""
        assert str(biosim.formula("G")) == "<!F1> [!F1] <!F1> tt"

    def test_junction_rendering(self):
        """Test parentheses around junctions."""
        d = Diamond(True, "F", TT())
        assert str(And(Or(d, FF()), d)) == "(<F> tt or ff) and <F> tt"
        assert str(Or(d, And(d, FF()))) == "<F> tt or <F> tt and ff"
        assert str(Box(False, "F", Or(TT(), FF()))) == "[!F] (tt or ff)"

    def test_measures(self, biosim):
        """Test modal depth, box detection and assertion names."""
        g = biosim.formula("G")
        assert g.depth() == 3
        assert g.has_box()
        assert g.assertions() == frozenset({"F1"})
        assert not Diamond(True, "F", TT()).has_box()

    def test_conjunction(self):
        """Test conjunction of distinct formulas."""
        assert conjunction([]) == TT()
        assert conjunction([FF(), FF()]) == FF()
        assert conjunction([TT(), FF()]) == And(FF(), TT())

    @pytest.mark.parametrize(
        "g",
        [
            TT(),
            Diamond(True, "F", TT()),
            Box(False, "F", FF()),
            And(Diamond(True, "F", Box(True, "F", FF())), Diamond(False, "F", TT())),
            Or(Box(True, "F", Diamond(True, "F", TT())), FF()),
        ],
    )
    def test_converse_complements(self, g):
        """Test that the standard converse holds exactly where the formula fails."""
        everything = frozenset(range(MIXED.size))
        standard = BoxSemantics.STANDARD
        assert sat(MIXED, converse(g, standard)) == everything - sat(MIXED, g)

    @pytest.mark.parametrize(
        "g",
        [
            TT(),
            FF(),
            Box(True, "F", TT()),
            Box(False, "F", FF()),
            Or(Box(True, "F", Box(False, "F", TT())), FF()),
            And(Box(True, "F", TT()), Box(False, "F", Box(True, "F", FF()))),
        ],
    )
    def test_strict_converse_complements(self, g):
        """Test that the strict converse holds exactly where the formula fails."""
        everything = frozenset(range(MIXED.size))
        strict = BoxSemantics.STRICT
        assert sat(MIXED, converse(g), strict) == everything - sat(MIXED, g, strict)

    def test_strict_converse_of_box(self):
        """Test that an edge of the other polarity enters the strict converse."""
        g = Box(True, "F", TT())
        assert converse(g) == Or(Diamond(False, "F", TT()), Diamond(True, "F", FF()))
        assert sat(MIXED, converse(g), BoxSemantics.STRICT) == {0}
        assert sat(MIXED, converse(g, BoxSemantics.STANDARD)) == frozenset()

    def test_strict_converse_rejects_diamonds(self):
        """Test that a diamond has no converse under the strict reading."""
        with pytest.raises(FormulaError, match="strict"):
            converse(And(Box(True, "F", TT()), Diamond(True, "F", TT())))


class TestSatisfaction:
    """Test model checking over abstract transition systems."""

    def test_diamond(self):
        """Test that a diamond needs a move of its polarity."""
        assert sat(MIXED, Diamond(True, "F", TT())) == {0, 1}
        assert sat(MIXED, Diamond(False, "F", TT())) == {0}

    def test_box_readings_differ(self):
        """Test that only the strict reading lets other polarities falsify a box."""
        g = Box(True, "F", TT())
        assert sat(MIXED, g, BoxSemantics.STANDARD) == {0, 1, 2}
        assert sat(MIXED, g, BoxSemantics.STRICT) == {1, 2}

    def test_box_on_deadlock(self):
        """Test that a box holds vacuously where nothing can move."""
        assert 2 in sat(MIXED, Box(True, "F", FF()), BoxSemantics.STRICT)

    def test_running_formula(self, biosim):
        """Test the declared formula under both readings."""
        g, f1 = biosim.formula("G"), biosim.assertion("F1")
        for box in BoxSemantics:
            assert check_formula(biosim.system("P0b"), g, f1, "F1", box)
            assert not check_formula(biosim.system("P0"), g, f1, "F1", box)

    def test_formula_bound_to_other_assertion(self, biosim):
        """Test that a formula is checked only against its own assertion."""
        g, f2 = biosim.formula("G"), biosim.assertion("F2")
        with pytest.raises(FormulaError, match="F1"):
            check_formula(biosim.system("P0"), g, f2, "F2")

    def test_mixed_assertions_rejected(self, biosim, c_in_w):
        """Test that a formula may use one assertion only."""
        g = And(Diamond(True, "F1", TT()), Diamond(True, "F2", TT()))
        with pytest.raises(FormulaError, match="mixes"):
            check_formula(biosim.system("P0"), g, c_in_w)


class TestBisimilarity:
    """Test bio-similarity."""

    def test_abstraction(self, biosim, c_in_w):
        """Test relabelling the running LTS by polarity."""
        system = abstract_lts(build_lts(biosim.system("P0")), c_in_w)
        assert system.size == 4
        assert system.edges == frozenset([(0, False, 1), (1, False, 2), (2, True, 3)])

    def test_refinement_rounds(self, biosim, c_in_w):
        """Test that refinement separates states by distance to the observation."""
        system = abstract_lts(build_lts(biosim.system("P0")), c_in_w)
        refinement = Refinement(system)
        assert len(set(refinement.blocks)) == 4
        assert refinement.rounds[0] == [0, 0, 0, 0]
        assert refinement.split_round(2, 3) == 1
        assert refinement.split_round(0, 0) is None

    def test_observation_matters(self, biosim):
        """Test that the verdict depends on the ambient assertion."""
        p, q = biosim.system("P0"), biosim.system("P0b")
        assert not bisimilar(p, q, biosim.assertion("F1"))
        assert bisimilar(p, q, biosim.assertion("F2"))

    def test_reflexive(self, example1, c_in_w):
        """Test that a system is bio-similar to itself."""
        p = example1.system("Loop")
        assert bisimilar(p, p, c_in_w)
        assert distinguishing_formula(p, p, c_in_w) is None

    def test_witness(self, biosim):
        """Test the box-free distinguishing formula of the running pair."""
        p, q = biosim.system("P0"), biosim.system("P0b")
        f1 = biosim.assertion("F1")
        g = distinguishing_formula(p, q, f1, "F1")
        assert str(g) == "<!F1> <!F1> <!F1> tt"
        assert check_formula(q, g, f1, "F1")
        assert not check_formula(p, g, f1, "F1")

    def test_strict_witness_skips_non_separating(self, biosim, monkeypatch):
        """Test that candidates failing under the strict reading are passed over."""
        p, q = biosim.system("P0"), biosim.system("P0b")
        good = Diamond(False, "F1", Diamond(False, "F1", Diamond(False, "F1", TT())))
        monkeypatch.setattr(
            "rsos.equiv._Distinguisher.ranked", lambda self, s, t: [TT(), FF(), good]
        )
        assert distinguishing_formula(p, q, biosim.assertion("F1"), "F1") == good

    def test_strict_witness_missing(self, biosim, monkeypatch):
        """Test the error when no candidate separates under the strict reading."""
        p, q = biosim.system("P0"), biosim.system("P0b")
        monkeypatch.setattr(
            "rsos.equiv._Distinguisher.ranked", lambda self, s, t: [TT(), FF()]
        )
        with pytest.raises(FormulaError, match="strict"):
            distinguishing_formula(p, q, biosim.assertion("F1"), "F1")

    def test_standard_witness(self, biosim):
        """Test that the standard reading gives the same simplest witness."""
        p, q = biosim.system("P0"), biosim.system("P0b")
        g = distinguishing_formula(
            p, q, biosim.assertion("F1"), "F1", box=BoxSemantics.STANDARD
        )
        assert str(g) == "<!F1> <!F1> <!F1> tt"

    def test_witnesses_for_pairs(self):
        """Test witnesses computed over one abstract system."""
        witnesses = distinguishing_formulas_for(MIXED, [(0, 1), (1, 1)])
        assert witnesses[(1, 1)] is None
        g = witnesses[(0, 1)]
        states = sat(MIXED, g)
        assert (0 in states) != (1 in states)


def random_assertion(rng):
    pos = rng.choice(list(Position))
    if rng.random() < 0.2:
        return NonEmpty(pos)
    return SubsetOf(entities(rng.choice(UNIVERSE)), pos)


class TestRandomPairs:
    """Witness checks over seeded random system pairs."""

    @pytest.mark.parametrize("seed", range(100))
    def test_witness_separates(self, seed):
        """Test that a witness holds at exactly one of two non-bisimilar systems."""
        rng = random.Random(seed)
        p, q = random_process(rng, 2), random_process(rng, 2)
        f = random_assertion(rng)
        g = distinguishing_formula(p, q, f, "F")
        if bisimilar(p, q, f):
            assert g is None
            return
        assert g is not None
        assert check_formula(p, g, f, "F") != check_formula(q, g, f, "F")

    @pytest.mark.parametrize("seed", range(100))
    def test_standard_witness_separates(self, seed):
        """Test witnesses built for the standard box reading."""
        rng = random.Random(seed)
        p, q = random_process(rng, 2), random_process(rng, 2)
        f = random_assertion(rng)
        standard = BoxSemantics.STANDARD
        g = distinguishing_formula(p, q, f, "F", box=standard)
        if g is None:
            assert bisimilar(p, q, f)
            return
        assert check_formula(p, g, f, "F", standard) != check_formula(
            q, g, f, "F", standard
        )
        everything = frozenset([True, False])
        verdicts = {check_formula(p, converse(g, standard), f, "F", standard)}
        verdicts.add(check_formula(p, g, f, "F", standard))
        assert verdicts == everything
