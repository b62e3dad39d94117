"""Tests for eintegral module."""

import math
from fractions import Fraction

import pytest

from cooccur.cooccurrence import Constraint
from cooccur.eintegral import (
    EIntegralResult,
    PiecewiseLinear,
    RandomVariable,
    StabilizingSequence,
    cond_expectation_event,
    cond_expectation_object,
    e_integral,
    expectation_satisfies_defining_equation,
    holder_check,
    iterated_decompose,
    jensen_check,
    minkowski_check,
)
from cooccur.exceptions import ChainMismatch, InvalidExponent, InvalidMeasure, NotConvex, SpaceMismatch
from cooccur.space import Event, FiniteSpace, RationalMeasure, bundle

HALF = Fraction(1, 2)


@pytest.fixture
def Y(m0) -> RandomVariable:
    return m0.get_variable("Y")


@pytest.fixture
def line() -> FiniteSpace:
    return FiniteSpace(3, name="line")


@pytest.fixture
def uniform3(line) -> RationalMeasure:
    return RationalMeasure.uniform(line)


@pytest.fixture
def absolute() -> PiecewiseLinear:
    return PiecewiseLinear((Fraction(0),), (Fraction(-1), Fraction(1)))


class TestRandomVariable:
    """Tests for exact random variables."""

    def test_arithmetic(self, line):
        """Test pointwise arithmetic with variables and scalars."""
        Y = RandomVariable(line, (1, -2, 3))
        assert (Y + 1).values == (2, -1, 4)
        assert (2 * Y).values == (2, -4, 6)
        assert abs(Y).values == (1, 2, 3)
        assert Y.minimum(0).values == (0, -2, 0)

    def test_other_space(self, line):
        """Test that variables on different spaces do not combine."""
        with pytest.raises(SpaceMismatch):
            RandomVariable.constant(line, 1) + RandomVariable.constant(FiniteSpace(3), 1)

    def test_indicator(self, line):
        """Test the indicator of an event."""
        event = Event(line, frozenset({0, 2}))
        assert RandomVariable.indicator(event).values == (1, 0, 1)

    def test_compose(self, Y, X2):
        """Test pulling a variable back along an object."""
        assert Y.compose(X2).values == (0, 0, 1, 1)


class TestEIntegral:
    """Tests for integrals and event-conditioned expectations."""

    def test_integral(self, line, uniform3):
        """Test the integral against a probability."""
        result = e_integral(RandomVariable(line, (3, 0, 6)), uniform3)
        assert result.value == 3
        assert not result.null_condition

    def test_space_mismatch(self, Y, uniform3):
        """Test that variable and measure share a space."""
        with pytest.raises(SpaceMismatch):
            e_integral(Y, uniform3)

    def test_cond_expectation_event(self, m0, Y, X2):
        """Test the expectation of Y(X2) given an even parity."""
        result = cond_expectation_event(Y, m0.query("given-even"), X2)
        assert result.value == HALF

    def test_cond_expectation_event_null(self, m0, Y, X2):
        """Test the null convention for event-conditioned expectations."""
        result = cond_expectation_event(Y, m0.query("null"), X2)
        assert result.value == 0
        assert result.null_condition

    def test_null_result_must_be_zero(self):
        """Test that a flagged result carries value zero."""
        with pytest.raises(InvalidMeasure):
            EIntegralResult(Fraction(1), True)


class TestCondExpectationObject:
    """Tests for object-conditioned expectations."""

    def test_given_parity(self, P, Y, X1, X2):
        """Test that parity says nothing about the half."""
        pc = cond_expectation_object(P, Y, X1, X2)
        assert pc.values == (HALF, HALF)

    def test_given_outcome(self, P, Y, X3, X2):
        """Test that the outcome determines the half."""
        pc = cond_expectation_object(P, Y, X3, X2)
        assert pc.values == (0, 0, 1, 1)
        assert expectation_satisfies_defining_equation(pc, P, Y, X3, X2)

    def test_null(self, P, Y, X1, X2):
        """Test the zero conditional on a null condition."""
        nothing = Constraint(X2, Event.empty(X2.codomain))
        pc = cond_expectation_object(P, Y, X1, X2, [nothing])
        assert pc.null_condition
        assert pc.values == (0, 0)


class TestIteratedDecompose:
    """Tests for nested evaluation along a chain."""

    @pytest.fixture
    def pair_variable(self, X1, X2) -> RandomVariable:
        return RandomVariable(bundle({1: X1, 2: X2}).codomain, (1, 2, 3, 4))

    @pytest.mark.parametrize("chain", [[1, 2], [2, 1]])
    def test_matches_direct(self, P, X1, X2, pair_variable, chain):
        """Test that both chain orders give the direct integral."""
        result = iterated_decompose(P, pair_variable, {1: X1, 2: X2}, chain)
        assert result.value == Fraction(5, 2)

    def test_with_constraints(self, P, X1, X2, pair_variable):
        """Test constraints attached to a chain step."""
        even = Constraint.of(X1, ["e"])
        result = iterated_decompose(P, pair_variable, {1: X1, 2: X2}, [1, 2], {1: [even]})
        assert result.value == Fraction(3, 4)

    @pytest.mark.parametrize("chain", [[1], [1, 1], [1, 3]])
    def test_bad_chain(self, P, X1, X2, pair_variable, chain):
        """Test that chains cover every index once."""
        with pytest.raises(ChainMismatch):
            iterated_decompose(P, pair_variable, {1: X1, 2: X2}, chain)


class TestSequences:
    """Tests for stabilizing sequences."""

    def test_truncations(self, line):
        """Test increasing truncations of a bounded variable."""
        Y = RandomVariable(line, (0, 3, Fraction(5, 2)))
        seq = StabilizingSequence.truncations(Y)
        assert seq.stabilization_index == 2
        assert seq.term(0).values == (0, 1, 1)
        assert seq.term(5) == Y
        assert seq.is_increasing()

    def test_descending(self, line):
        """Test a decreasing sequence and its tail infimum."""
        Y = RandomVariable(line, (0, 1, 2))
        seq = StabilizingSequence.descending(Y, 3)
        assert seq.is_decreasing()
        assert seq.tail_inf(0) == Y
        assert seq.tail_sup(0).values == (3, 4, 5)


class TestInequalities:
    """Tests for convex functions and integral inequalities."""

    def test_piecewise_linear(self, absolute):
        """Test evaluation of the absolute value."""
        assert absolute(Fraction(-2)) == 2
        assert absolute(Fraction(3)) == 3
        assert absolute.is_convex

    def test_not_convex(self):
        """Test that decreasing slopes are rejected by convex consumers."""
        concave = PiecewiseLinear((Fraction(0),), (Fraction(1), Fraction(-1)))
        with pytest.raises(NotConvex):
            concave.require_convex()

    def test_jensen(self, absolute, line, uniform3):
        """Test Jensen with the absolute value."""
        Y = RandomVariable(line, (-3, 1, 2))
        assert jensen_check(absolute, Y, uniform3)

    def test_jensen_needs_probability(self, absolute, line):
        """Test that Jensen needs total mass one."""
        with pytest.raises(InvalidMeasure):
            jensen_check(absolute, RandomVariable.constant(line, 1), RationalMeasure.counting(line))

    @pytest.mark.parametrize(
        "p,q",
        [(2, 2), (1, math.inf), (math.inf, 1), (3, Fraction(3, 2))],
    )
    def test_holder(self, line, uniform3, p, q):
        """Test Hoelder for exact and floating exponent pairs."""
        Y = RandomVariable(line, (1, -2, 3))
        Z = RandomVariable(line, (4, 0, -1))
        assert holder_check(Y, Z, uniform3, p, q)

    def test_holder_not_conjugate(self, line, uniform3):
        """Test that exponents must be conjugate."""
        Y = RandomVariable.constant(line, 1)
        with pytest.raises(InvalidExponent):
            holder_check(Y, Y, uniform3, 2, 3)

    @pytest.mark.parametrize("p", [1, 2, 3, math.inf])
    def test_minkowski(self, line, uniform3, p):
        """Test the triangle inequality of the p-norm."""
        Y = RandomVariable(line, (1, -2, 3))
        Z = RandomVariable(line, (4, 0, -1))
        assert minkowski_check(Y, Z, uniform3, p)

    def test_minkowski_small_exponent(self, line, uniform3):
        """Test that p must be at least one."""
        Y = RandomVariable.constant(line, 1)
        with pytest.raises(InvalidExponent):
            minkowski_check(Y, Y, uniform3, Fraction(1, 2))
