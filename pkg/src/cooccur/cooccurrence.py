"""Probabilities of co-occurrence and their event-conditioned versions."""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from loguru import logger

from .constants import DEFAULT_PRODUCT_CAP
from .exceptions import InvalidMeasure, MalformedQuery, NotMeasurable, SpaceMismatch
from .space import (
    Event,
    MeasureKind,
    RandomObject,
    RationalMeasure,
    bundle,
    intersect,
)


@dataclass(frozen=True)
class Constraint:
    """The requirement that a random object takes a value in an event."""

    obj: RandomObject
    event: Event

    def __post_init__(self):
        if self.event.space != self.obj.codomain:
            raise SpaceMismatch(f"Constraint event is not on the codomain of {self.obj.display_name}")
        if not self.obj.codomain_field.is_measurable(self.event.members):
            raise NotMeasurable(
                f"Event {sorted(self.event.members)} is not measurable for {self.obj.display_name}"
            )

    @classmethod
    def of(cls, obj: RandomObject, outcomes: Iterable[int | str]) -> Constraint:
        return cls(obj, Event.of(obj.codomain, outcomes))

    @classmethod
    def full(cls, obj: RandomObject) -> Constraint:
        return cls(obj, Event.full(obj.codomain))

    def pullback(self) -> Event:
        """The event {obj in event} on the base space."""
        return self.obj.preimage(self.event)


@dataclass(frozen=True)
class CoocQuery:
    """A base probability with target and condition constraints."""

    base: RationalMeasure
    targets: tuple[Constraint, ...] = ()
    conditions: tuple[Constraint, ...] = ()

    def __post_init__(self):
        if self.base.kind is not MeasureKind.PROBABILITY:
            raise InvalidMeasure("Query base must be a probability measure")
        object.__setattr__(self, "targets", tuple(self.targets))
        object.__setattr__(self, "conditions", tuple(self.conditions))
        for constraint in self.targets + self.conditions:
            if constraint.obj.domain != self.base.space:
                raise SpaceMismatch(
                    f"{constraint.obj.display_name} is not defined on the base space of the query"
                )

    @property
    def target_event(self) -> Event:
        return pullback_all(self.base, self.targets)

    @property
    def condition_event(self) -> Event:
        return pullback_all(self.base, self.conditions)


@dataclass(frozen=True)
class ConditionalValue:
    """A conditional probability with its null-condition flag."""

    value: Fraction
    null_condition: bool = False


@dataclass(frozen=True)
class ConditionalMeasure:
    """A conditional co-occurrence measure with its null-condition flag."""

    measure: RationalMeasure
    null_condition: bool = False


def pullback_all(P: RationalMeasure, constraints: Sequence[Constraint]) -> Event:
    """Intersection of the pulled-back constraint events, Omega when empty."""
    for constraint in constraints:
        if constraint.obj.domain != P.space:
            raise SpaceMismatch(f"{constraint.obj.display_name} is not defined on the base space")
    return intersect(P.space, (c.pullback() for c in constraints))


def prob_cooc(P: RationalMeasure, events: Sequence[Event]) -> Fraction:
    """
    Probability that all events happen together.

    Args:
        P: Probability measure
        events: Events on P's space, possibly none

    Returns:
        P of the intersection, 1 for an empty sequence

    Raises:
        SpaceMismatch: If an event is on another space
    """
    return P.mass(intersect(P.space, events))


def cond_prob_cooc(
    P: RationalMeasure,
    targets: Sequence[Event],
    conditions: Sequence[Event],
) -> ConditionalValue:
    """
    Conditional probability of co-occurrence, zero when the condition is null.

    Args:
        P: Probability measure
        targets: Target events
        conditions: Conditioning events

    Returns:
        The ratio with its null-condition flag
    """
    condition = intersect(P.space, conditions)
    denominator = P.mass(condition)
    if denominator == 0:
        logger.debug("Null condition in cond_prob_cooc, returning 0")
        return ConditionalValue(Fraction(0), True)
    numerator = P.mass(intersect(P.space, targets) & condition)
    return ConditionalValue(numerator / denominator)


def prob_cooc_objects(q: CoocQuery) -> Fraction:
    """
    Probability that every target constraint holds.

    Raises:
        MalformedQuery: If the query has conditions
    """
    if q.conditions:
        raise MalformedQuery("prob_cooc_objects takes a query without conditions")
    return prob_cooc(q.base, [c.pullback() for c in q.targets])


def cond_prob_objects(q: CoocQuery) -> ConditionalValue:
    """Conditional probability of the targets given the conditions of a query."""
    return cond_prob_cooc(
        q.base,
        [c.pullback() for c in q.targets],
        [c.pullback() for c in q.conditions],
    )


def _restricted_law(P: RationalMeasure, event: Event, Z: RandomObject) -> list[Fraction]:
    if Z.domain != P.space:
        raise SpaceMismatch(f"{Z.display_name} is not defined on the base space")
    weights = [Fraction(0)] * Z.codomain.size
    for outcome in event.members:
        weights[Z.mapping[outcome]] += P.weights[outcome]
    return weights


def cooc_measure(q: CoocQuery, Z: RandomObject) -> RationalMeasure:
    """
    The finite measure A -> P(Z in A, all targets) on Z's codomain.

    Args:
        q: Query without conditions
        Z: Random object on the base space

    Returns:
        Sub-probability measure of kind finite

    Raises:
        MalformedQuery: If the query has conditions
        SpaceMismatch: If Z lives elsewhere
    """
    if q.conditions:
        raise MalformedQuery("cooc_measure takes a query without conditions")
    weights = _restricted_law(q.base, q.target_event, Z)
    return RationalMeasure(Z.codomain, tuple(weights), MeasureKind.FINITE)


def cond_cooc_measure(q: CoocQuery, Z: RandomObject) -> ConditionalMeasure:
    """
    The measure A -> P(Z in A, targets | conditions), zero when the condition is null.

    Args:
        q: Query
        Z: Random object on the base space

    Returns:
        Conditional measure with its null-condition flag
    """
    condition = q.condition_event
    denominator = q.base.mass(condition)
    if denominator == 0:
        logger.debug("Null condition in cond_cooc_measure for {}", Z.display_name)
        return ConditionalMeasure(RationalMeasure.zero(Z.codomain), True)
    weights = _restricted_law(q.base, q.target_event & condition, Z)
    return ConditionalMeasure(
        RationalMeasure(Z.codomain, tuple(w / denominator for w in weights), MeasureKind.FINITE)
    )


def bundle_constraints(constraints: Sequence[Constraint], cap: int = DEFAULT_PRODUCT_CAP) -> Constraint:
    """
    Merge constraints X_i in A_i into the single constraint X_I in the product of the A_i.

    Constraints on the same object are kept as separate coordinates.
    """
    if not constraints:
        raise MalformedQuery("Need at least one constraint to bundle")
    objects = {k: c.obj for k, c in enumerate(constraints)}
    X = bundle(objects, range(len(constraints)), cap)
    members = frozenset(
        X.codomain.index_of(point)
        for point in itertools.product(*(sorted(c.event.members) for c in constraints))
    )
    return Constraint(X, Event(X.codomain, members))
