"""Tests for space module."""

from fractions import Fraction

import pytest

from cooccur.exceptions import (
    BadValue,
    DomainMismatch,
    DuplicateLabel,
    EmptyIndexSet,
    IndexOverlap,
    InvalidMeasure,
    InvalidPartition,
    NotMeasurable,
    ProductTooLarge,
    SpaceMismatch,
    ZeroSize,
)
from cooccur.space import (
    EngineModel,
    Event,
    FiniteSpace,
    IndexSet,
    MeasureKind,
    Partition,
    RandomObject,
    RationalMeasure,
    bundle,
    coarsen,
    common_refinement,
    compose,
    make_space,
    product_measure,
    product_space,
    projection,
    pushforward,
    refines,
)


class TestFiniteSpace:
    """Tests for finite spaces and their outcomes."""

    def test_zero_size_rejected(self):
        """Test that a space needs at least one outcome."""
        with pytest.raises(ZeroSize):
            FiniteSpace(0)

    def test_duplicate_labels_rejected(self):
        """Test that labels must be distinct."""
        with pytest.raises(DuplicateLabel):
            make_space(2, ["a", "a"])

    def test_label_count_must_match(self):
        """Test that every outcome needs a label."""
        with pytest.raises(BadValue):
            FiniteSpace(3, ("a", "b"))

    def test_outcome_by_label_or_index(self, coin):
        """Test resolving outcomes by label and by index."""
        assert coin.outcome("t") == 1
        assert coin.outcome(0) == 0
        assert coin.label(1) == "t"

    def test_unknown_outcome(self, coin):
        """Test that unknown references are domain errors."""
        with pytest.raises(BadValue):
            coin.outcome("x")
        with pytest.raises(BadValue):
            coin.outcome(2)

    def test_digit_strings_on_unlabeled_space(self):
        """Test that digit strings resolve on unlabeled spaces."""
        assert FiniteSpace(3).outcome("2") == 2

    def test_discrete_and_trivial(self):
        """Test the full and trivial fields."""
        space = FiniteSpace(3)
        assert space.discrete.is_discrete
        assert space.trivial.blocks == (frozenset({0, 1, 2}),)


class TestPartition:
    """Tests for partitions as sub-fields."""

    def test_blocks_sorted_by_minimum(self):
        """Test that blocks are normalized by their smallest outcome."""
        p = Partition(FiniteSpace(4), (frozenset({2, 3}), frozenset({0, 1})))
        assert p.blocks == (frozenset({0, 1}), frozenset({2, 3}))
        assert p.block_index == (0, 0, 1, 1)

    def test_overlap_rejected(self):
        """Test that overlapping blocks are rejected."""
        with pytest.raises(InvalidPartition):
            Partition(FiniteSpace(3), (frozenset({0, 1}), frozenset({1, 2})))

    def test_cover_required(self):
        """Test that blocks must cover the space."""
        with pytest.raises(InvalidPartition):
            Partition(FiniteSpace(3), (frozenset({0, 1}),))

    def test_refines(self):
        """Test the refinement order."""
        space = FiniteSpace(4)
        halves = Partition(space, (frozenset({0, 1}), frozenset({2, 3})))
        assert refines(space.discrete, halves)
        assert refines(halves, space.trivial)
        assert not refines(halves, space.discrete)

    def test_refines_other_space(self):
        """Test that partitions of different spaces are not comparable."""
        with pytest.raises(SpaceMismatch):
            refines(FiniteSpace(2).discrete, FiniteSpace(3).discrete)

    def test_common_refinement(self):
        """Test that the common refinement intersects blocks."""
        space = FiniteSpace(4)
        halves = Partition(space, (frozenset({0, 1}), frozenset({2, 3})))
        parity = Partition(space, (frozenset({0, 2}), frozenset({1, 3})))
        assert common_refinement([halves, parity]).is_discrete

    def test_is_measurable(self):
        """Test that measurable sets are unions of blocks."""
        halves = Partition(FiniteSpace(4), (frozenset({0, 1}), frozenset({2, 3})))
        assert halves.is_measurable({0, 1})
        assert halves.is_measurable(set())
        assert not halves.is_measurable({0, 2})


class TestEvent:
    """Tests for events."""

    def test_set_operations(self, coin):
        """Test intersection, union and complement."""
        heads = Event.of(coin, ["h"])
        assert (heads & Event.full(coin)) == heads
        assert (heads | heads.complement()).is_full
        assert len(Event.empty(coin)) == 0

    def test_other_space(self, coin):
        """Test that events on different spaces do not combine."""
        with pytest.raises(SpaceMismatch):
            Event.full(coin) & Event.full(FiniteSpace(2))

    def test_member_outside_space(self, coin):
        """Test that members must be outcomes."""
        with pytest.raises(BadValue):
            Event(coin, frozenset({5}))


class TestRationalMeasure:
    """Tests for exact measures."""

    def test_probability_must_sum_to_one(self, coin):
        """Test that probability weights sum to one."""
        with pytest.raises(InvalidMeasure):
            RationalMeasure(coin, (Fraction(1, 2), Fraction(1, 3)), MeasureKind.PROBABILITY)

    def test_negative_weight(self, coin):
        """Test that weights are nonnegative."""
        with pytest.raises(InvalidMeasure):
            RationalMeasure(coin, (Fraction(-1), Fraction(2)))

    def test_mass_and_support(self):
        """Test mass of events and support."""
        m = RationalMeasure(FiniteSpace(3), (Fraction(1, 2), Fraction(0), Fraction(1, 2)))
        assert m.mass({0, 1}) == Fraction(1, 2)
        assert m.support == frozenset({0, 2})
        assert m.total == 1

    def test_restrict(self, coin):
        """Test restriction to an event."""
        m = RationalMeasure.uniform(coin).restrict(Event.of(coin, ["t"]))
        assert m.weights == (Fraction(0), Fraction(1, 2))
        assert m.kind is MeasureKind.FINITE


class TestRandomObjects:
    """Tests for random objects, bundles and push-forwards."""

    def test_pushforward(self, P, X1):
        """Test the law of a random object."""
        law = pushforward(P, X1)
        assert law.weights == (Fraction(1, 2), Fraction(1, 2))
        assert law.kind is MeasureKind.PROBABILITY

    def test_pushforward_other_space(self, coin, X1):
        """Test that the measure must live on the domain."""
        with pytest.raises(SpaceMismatch):
            pushforward(RationalMeasure.uniform(coin), X1)

    def test_map_outside_codomain(self, coin):
        """Test that images must be codomain outcomes."""
        with pytest.raises(BadValue):
            RandomObject(coin, coin, (0, 2))

    def test_measurability_against_domain_field(self):
        """Test that preimages of codomain blocks must be domain-measurable."""
        omega = FiniteSpace(2)
        with pytest.raises(NotMeasurable):
            RandomObject(omega, omega, (0, 1), domain_field=omega.trivial)

    def test_bundle(self, P, X1, X2):
        """Test bundling into the product codomain."""
        X = bundle({1: X1, 2: X2})
        assert X.codomain.size == 4
        assert X.codomain.index_set == IndexSet((1, 2))
        assert [X.codomain.point(X(w)) for w in range(4)] == [(0, 0), (1, 0), (0, 1), (1, 1)]
        assert pushforward(P, X).weights == (Fraction(1, 4),) * 4

    def test_bundle_projection(self, X1, X2):
        """Test that projecting a bundle recovers its coordinates."""
        X = bundle({1: X1, 2: X2})
        back = compose(X, projection(X.codomain, 2))
        assert back.mapping == X2.mapping

    def test_bundle_empty(self, X1):
        """Test that bundling needs an index."""
        with pytest.raises(EmptyIndexSet):
            bundle({1: X1}, [])

    def test_bundle_domain_mismatch(self, X1, coin):
        """Test that bundled objects share one domain."""
        with pytest.raises(DomainMismatch):
            bundle({1: X1, 2: RandomObject.identity(coin)})

    def test_product_cap(self):
        """Test that oversized products are rejected."""
        with pytest.raises(ProductTooLarge):
            product_space(IndexSet((1, 2)), [FiniteSpace(10), FiniteSpace(10)], cap=50)

    def test_product_measure(self, coin):
        """Test product weights in lexicographic order."""
        biased = RationalMeasure(coin, (Fraction(1, 3), Fraction(2, 3)), MeasureKind.PROBABILITY)
        m = product_measure([biased, RationalMeasure.uniform(coin)], IndexSet((1, 2)))
        assert m.weights == (Fraction(1, 6), Fraction(1, 6), Fraction(1, 3), Fraction(1, 3))
        assert m.kind is MeasureKind.PROBABILITY

    def test_coarsen_keeps_map(self, X3):
        """Test that coarsening only changes the codomain field."""
        coarse = coarsen(X3, X3.codomain.trivial)
        assert coarse.mapping == X3.mapping
        assert coarse.codomain_field == X3.codomain.trivial


class TestIndexSet:
    """Tests for index sets."""

    def test_strictly_ascending(self):
        """Test that indices must ascend."""
        with pytest.raises(BadValue):
            IndexSet((2, 1))

    def test_of_sorts(self):
        """Test building from an unordered iterable."""
        assert IndexSet.of([3, 1]).indices == (1, 3)

    def test_plus_requires_disjoint(self):
        """Test the disjoint union."""
        assert IndexSet((1,)).plus(IndexSet((2,))) == IndexSet((1, 2))
        with pytest.raises(IndexOverlap):
            IndexSet((1, 2)).plus(IndexSet((2,)))


class TestEngineModel:
    """Tests for engine models."""

    def test_law_must_be_probability(self, coin):
        """Test that the base law is a probability measure."""
        with pytest.raises(InvalidMeasure):
            EngineModel(RationalMeasure.counting(coin))

    def test_objects_on_base_space(self, P, coin):
        """Test that objects live on the base space."""
        with pytest.raises(DomainMismatch):
            EngineModel(P, {"Z": RandomObject.identity(coin)})
