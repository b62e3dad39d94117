"""Seeded random finite models for the property checks."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .constants import MAX_VARIABLE_MAGNITUDE, MIN_OBJECTS, MIN_SPACE_SIZE
from .cooccurrence import Constraint
from .eintegral import PiecewiseLinear, RandomVariable
from .models import CheckConfig
from .scm import Scm
from .space import (
    EngineModel,
    Event,
    FiniteSpace,
    IndexSet,
    MeasureKind,
    Partition,
    RandomObject,
    RationalMeasure,
    product_measure,
    product_space,
    projection,
)


def random_weights(rng: random.Random, size: int, max_denominator: int) -> tuple[Fraction, ...]:
    """Probability weights k/d summing to one, d at most max_denominator; zeros allowed."""
    d = rng.randint(1, max_denominator)
    cuts = sorted(rng.randint(0, d) for _ in range(size - 1))
    bounds = [0, *cuts, d]
    return tuple(Fraction(b - a, d) for a, b in zip(bounds, bounds[1:]))


def random_measure(rng: random.Random, space: FiniteSpace, max_denominator: int) -> RationalMeasure:
    return RationalMeasure(space, random_weights(rng, space.size, max_denominator), MeasureKind.PROBABILITY)


def random_finite_measure(rng: random.Random, space: FiniteSpace, max_denominator: int) -> RationalMeasure:
    """Nonnegative weights k/d with k up to d, not normalized."""
    d = rng.randint(1, max_denominator)
    return RationalMeasure(space, tuple(Fraction(rng.randint(0, d), d) for _ in space.outcomes))


def random_partition(rng: random.Random, space: FiniteSpace) -> Partition:
    labels = [rng.randrange(rng.randint(1, space.size)) for _ in space.outcomes]
    groups: dict[int, set[int]] = {}
    for outcome, label in enumerate(labels):
        groups.setdefault(label, set()).add(outcome)
    return Partition(space, tuple(frozenset(g) for g in groups.values()))


def coarser_partition(rng: random.Random, p: Partition) -> Partition:
    """Merge random blocks of p into a partition it refines."""
    labels = [rng.randrange(rng.randint(1, len(p.blocks))) for _ in p.blocks]
    groups: dict[int, set[int]] = {}
    for block, label in zip(p.blocks, labels):
        groups.setdefault(label, set()).update(block)
    return Partition(p.space, tuple(frozenset(g) for g in groups.values()))


def random_event(rng: random.Random, space: FiniteSpace) -> Event:
    return Event(space, frozenset(x for x in space.outcomes if rng.random() < 0.5))


def random_measurable_event(rng: random.Random, field: Partition) -> Event:
    """Union of random blocks of a field."""
    members: set[int] = set()
    for block in field.blocks:
        if rng.random() < 0.5:
            members |= block
    return Event(field.space, frozenset(members))


def random_constraint(rng: random.Random, obj: RandomObject) -> Constraint:
    return Constraint(obj, random_measurable_event(rng, obj.codomain_field))


def random_space(rng: random.Random, config: CheckConfig, name: str) -> FiniteSpace:
    return FiniteSpace(rng.randint(MIN_SPACE_SIZE, config.max_space_size), name=name)


def random_object(
    rng: random.Random,
    domain: FiniteSpace,
    config: CheckConfig,
    name: str,
    coarse: bool = False,
) -> RandomObject:
    """Random map into a fresh codomain, optionally carrying a coarser codomain field."""
    codomain = random_space(rng, config, f"S{name}")
    mapping = tuple(rng.randrange(codomain.size) for _ in domain.outcomes)
    field = random_partition(rng, codomain) if coarse else None
    return RandomObject(domain, codomain, mapping, codomain_field=field, name=name)


def random_variable(rng: random.Random, space: FiniteSpace, config: CheckConfig, nonnegative: bool = False) -> RandomVariable:
    d = rng.randint(1, config.max_denominator)
    bound = MAX_VARIABLE_MAGNITUDE * d
    low = 0 if nonnegative else -bound
    return RandomVariable(space, tuple(Fraction(rng.randint(low, bound), d) for _ in space.outcomes))


def random_model(rng: random.Random, config: Optional[CheckConfig] = None, coarse: bool = False) -> EngineModel:
    """
    A random base space and law with objects X1..Xn.

    Args:
        rng: Source of randomness
        config: Size limits
        coarse: Give some objects a coarser codomain field
    """
    config = config or CheckConfig()
    omega = random_space(rng, config, "Omega")
    law = random_measure(rng, omega, config.max_denominator)
    count = rng.randint(MIN_OBJECTS, config.max_objects)
    objects = {
        f"X{k}": random_object(rng, omega, config, f"X{k}", coarse and rng.random() < 0.5)
        for k in range(1, count + 1)
    }
    return EngineModel(law, objects)


def product_model(rng: random.Random, config: Optional[CheckConfig] = None, count: int | None = None) -> EngineModel:
    """A product law whose coordinate projections X1..Xn are independent."""
    config = config or CheckConfig()
    count = count or rng.randint(MIN_OBJECTS, min(config.max_objects, 3))
    indices = IndexSet(tuple(range(1, count + 1)))
    factors = [random_space(rng, config, f"SX{i}") for i in indices]
    marginals = [random_measure(rng, space, config.max_denominator) for space in factors]
    law = product_measure(marginals, indices)
    objects = {}
    for i in indices:
        X = projection(law.space, i)
        objects[f"X{i}"] = RandomObject(X.domain, X.codomain, X.mapping, name=f"X{i}")
    return EngineModel(law, objects)


def random_convex(rng: random.Random, config: Optional[CheckConfig] = None) -> PiecewiseLinear:
    """Convex piecewise-linear function with up to three breakpoints."""
    config = config or CheckConfig()
    d = rng.randint(1, config.max_denominator)
    bound = MAX_VARIABLE_MAGNITUDE * d
    points = sorted({Fraction(rng.randint(-bound, bound), d) for _ in range(rng.randint(0, 3))})
    slopes = sorted(Fraction(rng.randint(-bound, bound), d) for _ in range(len(points) + 1))
    return PiecewiseLinear(tuple(points), tuple(slopes), Fraction(rng.randint(-bound, bound), d))


def random_acyclic_scm(rng: random.Random, config: Optional[CheckConfig] = None) -> Scm:
    """
    SCM whose coordinate i depends only on lower endogenous coordinates and the exogenous point.

    Such a mechanism has exactly one solution for every exogenous point.
    """
    config = config or CheckConfig()
    top = min(config.max_space_size, 3)
    endo = {i: FiniteSpace(rng.randint(2, top), name=f"X{i}") for i in range(1, rng.randint(1, 3) + 1)}
    exo = {100 + j: FiniteSpace(rng.randint(2, top), name=f"E{100 + j}") for j in range(1, rng.randint(1, 2) + 1)}
    exo_indices = IndexSet.of(exo)
    exo_space = product_space(exo_indices, [exo[j] for j in exo_indices])
    exo_law = random_measure(rng, exo_space, config.max_denominator)
    tables: dict[int, dict[tuple, int]] = {i: {} for i in endo}

    def mechanism(x: dict[int, int], e: dict[int, int]) -> dict[int, int]:
        out = {}
        for i in endo:
            key = (tuple(x[k] for k in endo if k < i), tuple(e.values()))
            if key not in tables[i]:
                tables[i][key] = rng.randrange(endo[i].size)
            out[i] = tables[i][key]
        return out

    return Scm.from_function(endo, exo, exo_law, mechanism)


def random_exponent(rng: random.Random) -> Fraction:
    """Exponent in (1, 4] other than 2."""
    while True:
        p = Fraction(rng.randint(9, 32), 8)
        if p != 2:
            return p
