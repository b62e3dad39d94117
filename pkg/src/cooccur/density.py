"""Densities of joint laws with respect to product measures."""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from loguru import logger

from .conditioning import Kernel
from .constants import DEFAULT_PRODUCT_CAP
from .exceptions import (
    BadPartition,
    EmptyIndexSet,
    IndexMismatch,
    IndexNotSubset,
    IndexOverlap,
    InvalidMeasure,
    NotAbsolutelyContinuous,
    NotFactorizable,
    SpaceMismatch,
)
from .space import (
    IndexSet,
    MeasureKind,
    ProductSpace,
    RandomObject,
    RationalMeasure,
    bundle,
    product_measure,
    product_space,
    pushforward,
)

ZERO = Fraction(0)

BASE_MARGINALS = "marginals"
BASE_BASES = "bases"


@dataclass(frozen=True)
class Density:
    """Values of a law's density against a product base measure, one per product point."""

    space: ProductSpace
    values: tuple[Fraction, ...]
    factors: tuple[RationalMeasure, ...]
    base_kind: str = BASE_MARGINALS

    def __post_init__(self):
        values = tuple(Fraction(v) for v in self.values)
        if len(values) != self.space.size:
            raise SpaceMismatch(f"Density needs {self.space.size} values, got {len(values)}")
        if tuple(m.space for m in self.factors) != self.space.factors:
            raise SpaceMismatch("Base factors do not match the product factors")
        if any(v < 0 for v in values):
            raise InvalidMeasure("Density values must be nonnegative")
        object.__setattr__(self, "values", values)
        base = self.base
        off_base = [x for x in self.space.outcomes if base.weights[x] == 0 and values[x] != 0]
        if off_base:
            raise InvalidMeasure(f"Density is not zero on base-null points {off_base}")

    @property
    def indices(self) -> IndexSet:
        return self.space.index_set

    @cached_property
    def base(self) -> RationalMeasure:
        """The product base measure."""
        return product_measure(self.factors, self.indices, space=self.space)

    def law(self) -> RationalMeasure:
        """The measure A -> sum over A of value * base."""
        weights = tuple(v * b for v, b in zip(self.values, self.base.weights))
        return RationalMeasure(self.space, weights, MeasureKind.FINITE)

    def value_at(self, point: Sequence[int]) -> Fraction:
        return self.values[self.space.index_of(point)]


@dataclass(frozen=True)
class BaseFamily:
    """One base measure per index."""

    measures: Mapping[int, RationalMeasure]

    def measure(self, index: int) -> RationalMeasure:
        if index not in self.measures:
            raise IndexMismatch(f"No base measure for index {index}")
        return self.measures[index]


def _sub_space(space: ProductSpace, indices: IndexSet) -> ProductSpace:
    return product_space(indices, [space.factor(i) for i in indices], cap=max(space.size, 1))


def _projector(space: ProductSpace, indices: IndexSet) -> tuple[int, ...]:
    positions = [space.index_set.position(i) for i in indices]
    sub = _sub_space(space, indices)
    return tuple(sub.index_of([point[p] for p in positions]) for point in space.points)


def _ratio_values(joint: RationalMeasure, base: RationalMeasure) -> tuple[Fraction, ...]:
    return tuple(j / b if b > 0 else ZERO for j, b in zip(joint.weights, base.weights))


def density_wrt_marginals(
    P: RationalMeasure,
    objects: Mapping[int, RandomObject],
    index_set: IndexSet,
    cap: int = DEFAULT_PRODUCT_CAP,
) -> Density:
    """
    Density of the joint law P[X_I] against the product of the marginal laws.

    On finite spaces the joint is always absolutely continuous here: a
    marginal-null coordinate nulls the joint.

    Args:
        P: Base probability
        objects: Random objects keyed by index
        index_set: Indices to bundle
        cap: Largest allowed product size

    Returns:
        Canonical density, zero where the product of marginals vanishes
    """
    X = bundle(objects, index_set, cap)
    joint = pushforward(P, X)
    marginals = tuple(pushforward(P, objects[i]) for i in index_set)
    base = product_measure(marginals, index_set, space=X.codomain)
    logger.debug("Density against marginals over indices {}", list(index_set))
    return Density(X.codomain, _ratio_values(joint, base), marginals, BASE_MARGINALS)


def density_wrt_base(
    P: RationalMeasure,
    objects: Mapping[int, RandomObject],
    index_set: IndexSet,
    bases: BaseFamily,
    cap: int = DEFAULT_PRODUCT_CAP,
) -> Density:
    """
    Density of P[X_I] against a product of base measures.

    Args:
        P: Base probability
        objects: Random objects keyed by index
        index_set: Indices to bundle
        bases: One base measure per index, on that object's codomain
        cap: Largest allowed product size

    Returns:
        Canonical density

    Raises:
        NotAbsolutelyContinuous: If a point of positive probability has zero base weight
        SpaceMismatch: If a base measure lives on the wrong space
    """
    X = bundle(objects, index_set, cap)
    factors = tuple(bases.measure(i) for i in index_set)
    for i, mu in zip(index_set, factors):
        if mu.space != objects[i].codomain:
            raise SpaceMismatch(f"Base measure for index {i} is not on the codomain of its object")
    joint = pushforward(P, X)
    base = product_measure(factors, index_set, space=X.codomain)
    for outcome, (j, b) in enumerate(zip(joint.weights, base.weights)):
        if j > 0 and b == 0:
            point = X.codomain.point(outcome)
            raise NotAbsolutelyContinuous(
                f"Point {X.codomain.label(outcome)} has probability {j} but zero base weight",
                witness=point,
            )
    return Density(X.codomain, _ratio_values(joint, base), factors, BASE_BASES)


def marginal_density(f: Density, sub_indices: IndexSet) -> Density:
    """
    Density of the sub-family over sub_indices against its own base factors.

    The complement coordinates are integrated out against their base. The
    set where that integral diverges is empty on finite spaces but is still
    applied as an explicit clamp.

    Raises:
        IndexNotSubset: If sub_indices is not inside f's index set
    """
    if not sub_indices.issubset(f.indices):
        raise IndexNotSubset(f"{list(sub_indices)} is not a subset of {list(f.indices)}")
    if not len(sub_indices):
        raise EmptyIndexSet("Cannot marginalize onto an empty index set")
    if sub_indices == f.indices:
        return f
    complement = f.indices.difference(sub_indices)
    sub = _sub_space(f.space, sub_indices)
    project_kept = _projector(f.space, sub_indices)
    project_rest = _projector(f.space, complement)
    rest_base = product_measure(
        [f.factors[f.indices.position(i)] for i in complement], complement, space=_sub_space(f.space, complement)
    )
    totals = [ZERO] * sub.size
    for outcome, value in enumerate(f.values):
        if value:
            totals[project_kept[outcome]] += value * rest_base.weights[project_rest[outcome]]
    kept_factors = tuple(f.factors[f.indices.position(i)] for i in sub_indices)
    kept_base = product_measure(kept_factors, sub_indices, space=sub)
    divergent: frozenset[int] = frozenset()
    values = tuple(
        ZERO if x in divergent or kept_base.weights[x] == 0 else totals[x] for x in sub.outcomes
    )
    return Density(sub, values, kept_factors, f.base_kind)


def kernel_from_density(
    f: Density,
    source_indices: IndexSet,
    target_indices: IndexSet,
) -> Kernel:
    """
    Conditional kernel of the target coordinates given the source coordinates.

    Coordinates outside both sets are integrated out first. Rows where the
    denominator vanishes are zero.

    Raises:
        IndexOverlap: If the index sets intersect
        IndexNotSubset: If either set is not inside f's index set
    """
    if not len(source_indices) or not len(target_indices):
        raise EmptyIndexSet("Kernel source and target index sets must be nonempty")
    if not source_indices.isdisjoint(target_indices):
        raise IndexOverlap(f"{list(source_indices)} and {list(target_indices)} intersect")
    joint_indices = source_indices.plus(target_indices)
    f = marginal_density(f, joint_indices)
    source = _sub_space(f.space, source_indices)
    target = _sub_space(f.space, target_indices)
    to_source = _projector(f.space, source_indices)
    to_target = _projector(f.space, target_indices)
    target_base = product_measure(
        [f.factors[f.indices.position(i)] for i in target_indices], target_indices, space=target
    )
    numerators = [[ZERO] * target.size for _ in source.outcomes]
    for outcome, value in enumerate(f.values):
        if value:
            y = to_target[outcome]
            numerators[to_source[outcome]][y] += value * target_base.weights[y]
    source_base = product_measure(
        [f.factors[f.indices.position(i)] for i in source_indices], source_indices, space=source
    )
    rows = []
    reference = []
    for x, row in enumerate(numerators):
        denominator = sum(row, ZERO)
        reference.append(denominator * source_base.weights[x])
        rows.append(tuple(w / denominator for w in row) if denominator > 0 else (ZERO,) * target.size)
    support = frozenset(x for x, r in enumerate(reference) if r > 0)
    ref_measure = RationalMeasure(source, tuple(reference), MeasureKind.FINITE)
    return Kernel(source, target, tuple(rows), support, ref_measure, not support)


def factorize_if_independent(f: Density, blocks: Sequence[IndexSet]) -> tuple[Density, ...]:
    """
    Split a density into block marginals when it is their product.

    Args:
        f: Joint density
        blocks: Index sets partitioning f's index set

    Returns:
        Block marginal densities in the given order

    Raises:
        BadPartition: If the blocks do not partition f's indices
        NotFactorizable: With a witnessing point when the product differs from f
    """
    covered: list[int] = [i for block in blocks for i in block]
    if not blocks or any(not len(b) for b in blocks) or sorted(covered) != list(f.indices):
        raise BadPartition(f"Blocks {[list(b) for b in blocks]} do not partition {list(f.indices)}")
    marginals = tuple(marginal_density(f, block) for block in blocks)
    projectors = [_projector(f.space, block) for block in blocks]
    base = f.base
    products = [
        math.prod((m.values[proj[x]] for m, proj in zip(marginals, projectors)), start=Fraction(1))
        for x in f.space.outcomes
    ]
    positive = [x for x in f.space.outcomes if base.weights[x] > 0]
    # Points the law misses while every block charges them come first
    failing = [x for x in positive if f.values[x] == 0 and products[x] > 0]
    failing = failing or [x for x in positive if f.values[x] != products[x]]
    if failing:
        x = failing[0]
        raise NotFactorizable(
            f"Density at {f.space.label(x)} is {f.values[x]}, product of block marginals is {products[x]}",
            witness=f.space.point(x),
        )
    return marginals


def product_density(marginal_densities: Mapping[int, Density], cap: int = DEFAULT_PRODUCT_CAP) -> Density:
    """Density of the product of single-index laws against the product of their bases."""
    indices = IndexSet.of(marginal_densities)
    parts = [marginal_densities[i] for i in indices]
    for i, part in zip(indices, parts):
        if part.indices != IndexSet((i,)):
            raise IndexMismatch(f"Marginal density for index {i} is over {list(part.indices)}")
    space = product_space(indices, [p.space.factors[0] for p in parts], cap)
    values = tuple(
        math.prod((p.values[c] for p, c in zip(parts, point)), start=Fraction(1)) for point in space.points
    )
    return Density(space, values, tuple(p.factors[0] for p in parts), BASE_BASES)


def change_of_base(f_P: Density, marginal_densities: Mapping[int, Density]) -> Density:
    """
    Turn a density against the product of marginals into one against a product of bases.

    Args:
        f_P: Density against the product of marginal laws
        marginal_densities: Per index, the density of that marginal against its base

    Returns:
        Pointwise product, zero on base-null points

    Raises:
        IndexMismatch: If the index sets disagree
    """
    if IndexSet.of(marginal_densities) != f_P.indices:
        raise IndexMismatch(f"Marginal densities over {sorted(marginal_densities)}, joint over {list(f_P.indices)}")
    for i in f_P.indices:
        if marginal_densities[i].space.factors[0] != f_P.space.factor(i):
            raise IndexMismatch(f"Marginal density for index {i} lives on another space")
    g = product_density(marginal_densities, cap=max(f_P.space.size, 1))
    factors = g.factors
    base = product_measure(factors, f_P.indices, space=f_P.space)
    values = tuple(
        v * w if base.weights[x] > 0 else ZERO for x, (v, w) in enumerate(zip(f_P.values, g.values))
    )
    return Density(f_P.space, values, factors, BASE_BASES)
