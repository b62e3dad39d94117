"""Tests for density module."""

from fractions import Fraction

import pytest

from cooccur.density import (
    BASE_BASES,
    BASE_MARGINALS,
    BaseFamily,
    change_of_base,
    density_wrt_base,
    density_wrt_marginals,
    factorize_if_independent,
    kernel_from_density,
    marginal_density,
)
from cooccur.exceptions import (
    BadPartition,
    IndexNotSubset,
    IndexOverlap,
    NotAbsolutelyContinuous,
    NotFactorizable,
)
from cooccur.space import IndexSet, MeasureKind, RationalMeasure, bundle, pushforward

PAIR = IndexSet((1, 2))


@pytest.fixture
def m0_density(P, X1, X2):
    return density_wrt_marginals(P, {1: X1, 2: X2}, PAIR)


@pytest.fixture
def diagonal_density(diagonal):
    objects = {1: diagonal.get_object("X1"), 2: diagonal.get_object("X2")}
    return density_wrt_marginals(diagonal.engine_model.law, objects, PAIR)


class TestDensityWrtMarginals:
    """Tests for densities against the product of marginal laws."""

    def test_independent_pair_has_unit_density(self, m0_density):
        """Test that independent objects have density one."""
        assert m0_density.values == (1, 1, 1, 1)
        assert m0_density.base_kind == BASE_MARGINALS

    def test_diagonal(self, diagonal_density):
        """Test the density of a perfectly dependent pair."""
        assert diagonal_density.values == (2, 0, 0, 2)

    def test_law_recovers_joint(self, diagonal, diagonal_density):
        """Test that density times base is the joint law."""
        objects = {1: diagonal.get_object("X1"), 2: diagonal.get_object("X2")}
        joint = pushforward(diagonal.engine_model.law, bundle(objects))
        assert diagonal_density.law().weights == joint.weights

    def test_value_at(self, diagonal_density):
        """Test lookup by coordinates."""
        assert diagonal_density.value_at((1, 1)) == 2


class TestDensityWrtBase:
    """Tests for densities against base measure families."""

    def test_counting_base(self, m0, P, X1, X2):
        """Test the density against counting measures."""
        f = density_wrt_base(P, {1: X1, 2: X2}, PAIR, m0.base_family("counting"))
        assert f.values == (Fraction(1, 4),) * 4
        assert f.base_kind == BASE_BASES

    def test_not_absolutely_continuous(self, P, X1, X2):
        """Test the witness for a point the base does not charge."""
        bases = BaseFamily(
            {
                1: RationalMeasure(X1.codomain, (0, 1), MeasureKind.BASE),
                2: RationalMeasure.counting(X2.codomain),
            }
        )
        with pytest.raises(NotAbsolutelyContinuous) as exc_info:
            density_wrt_base(P, {1: X1, 2: X2}, PAIR, bases)
        assert exc_info.value.witness == (0, 0)


class TestMarginalsAndKernels:
    """Tests for marginal densities and density kernels."""

    def test_marginal_density(self, diagonal_density):
        """Test integrating out a coordinate."""
        f1 = marginal_density(diagonal_density, IndexSet((1,)))
        assert f1.values == (1, 1)
        assert f1.indices == IndexSet((1,))

    def test_marginal_not_subset(self, diagonal_density):
        """Test that marginal indices must be inside the family."""
        with pytest.raises(IndexNotSubset):
            marginal_density(diagonal_density, IndexSet((3,)))

    def test_kernel_from_density(self, diagonal_density):
        """Test the conditional kernel of a perfectly dependent pair."""
        k = kernel_from_density(diagonal_density, IndexSet((1,)), IndexSet((2,)))
        assert k.rows == ((1, 0), (0, 1))
        assert k.support == frozenset({0, 1})

    def test_kernel_overlap(self, diagonal_density):
        """Test that source and target indices are disjoint."""
        with pytest.raises(IndexOverlap):
            kernel_from_density(diagonal_density, PAIR, IndexSet((2,)))


class TestFactorization:
    """Tests for factorization into block marginals."""

    def test_independent_factorizes(self, m0_density):
        """Test that independent blocks split."""
        f1, f2 = factorize_if_independent(m0_density, [IndexSet((1,)), IndexSet((2,))])
        assert f1.values == (1, 1)
        assert f2.indices == IndexSet((2,))

    def test_dependent_witness(self, diagonal_density):
        """Test the witness point when the product differs."""
        with pytest.raises(NotFactorizable) as exc_info:
            factorize_if_independent(diagonal_density, [IndexSet((1,)), IndexSet((2,))])
        assert exc_info.value.witness == (0, 1)

    def test_blocks_must_partition(self, m0_density):
        """Test that blocks cover the indices exactly once."""
        with pytest.raises(BadPartition):
            factorize_if_independent(m0_density, [IndexSet((1,))])


class TestChangeOfBase:
    """Tests for moving a density to another base."""

    def test_change_to_counting(self, diagonal, diagonal_density):
        """Test that the new density still integrates to the joint law."""
        law = diagonal.engine_model.law
        objects = {1: diagonal.get_object("X1"), 2: diagonal.get_object("X2")}
        counting = BaseFamily({i: RationalMeasure.counting(X.codomain) for i, X in objects.items()})
        marginals = {
            i: density_wrt_base(law, {i: X}, IndexSet((i,)), counting) for i, X in objects.items()
        }
        g = change_of_base(diagonal_density, marginals)
        assert g.values == (Fraction(1, 2), 0, 0, Fraction(1, 2))
        assert g.law().weights == pushforward(law, bundle(objects)).weights
