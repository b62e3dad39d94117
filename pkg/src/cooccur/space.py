"""Finite measurable spaces, partitions, exact measures and random objects."""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field, replace
from enum import StrEnum
from fractions import Fraction
from functools import cached_property

from loguru import logger

from .constants import DEFAULT_PRODUCT_CAP
from .exceptions import (
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
    UnknownIndex,
    ZeroSize,
)


@dataclass(frozen=True)
class FiniteSpace:
    """A finite sample space with outcomes 0..size-1 and optional labels."""

    size: int
    labels: tuple[str, ...] | None = None
    name: str | None = None

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 1:
            raise ZeroSize(f"Space size must be a positive integer, got {self.size!r}")
        if self.labels is not None:
            labels = tuple(str(label) for label in self.labels)
            if len(labels) != self.size:
                raise BadValue(f"Space of size {self.size} needs {self.size} labels, got {len(labels)}")
            if len(set(labels)) != len(labels):
                seen = {label for label in labels if labels.count(label) > 1}
                raise DuplicateLabel(f"Duplicate labels: {sorted(seen)}")
            object.__setattr__(self, "labels", labels)

    @property
    def outcomes(self) -> range:
        return range(self.size)

    @cached_property
    def discrete(self) -> Partition:
        """The all-singletons partition, i.e. the full field."""
        return Partition(self, tuple(frozenset({i}) for i in self.outcomes))

    @cached_property
    def trivial(self) -> Partition:
        return Partition(self, (frozenset(self.outcomes),))

    @cached_property
    def _label_lookup(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels or ())}

    def label(self, outcome: int) -> str:
        """Display label for an outcome index."""
        self.check_outcome(outcome)
        return self.labels[outcome] if self.labels else str(outcome)

    def outcome(self, ref: int | str) -> int:
        """
        Resolve an outcome given as index or label.

        Raises:
            BadValue: If the reference is not an outcome of this space
        """
        if isinstance(ref, bool):
            raise BadValue(f"Invalid outcome reference {ref!r}")
        if isinstance(ref, int):
            self.check_outcome(ref)
            return ref
        if ref in self._label_lookup:
            return self._label_lookup[ref]
        if isinstance(ref, str) and ref.isdigit() and not self.labels:
            return self.outcome(int(ref))
        raise BadValue(f"Unknown outcome {ref!r} in space {self.display_name}")

    def check_outcome(self, outcome: int) -> None:
        if not isinstance(outcome, int) or not 0 <= outcome < self.size:
            raise BadValue(f"Outcome {outcome!r} is outside space {self.display_name} of size {self.size}")

    @property
    def display_name(self) -> str:
        return self.name or f"space[{self.size}]"


@dataclass(frozen=True)
class Partition:
    """A partition of a finite space; it stands for the sub-field it generates."""

    space: FiniteSpace
    blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        blocks = tuple(frozenset(block) for block in self.blocks)
        seen: set[int] = set()
        for block in blocks:
            if not block:
                raise InvalidPartition("Partition blocks must be nonempty")
            if seen & block:
                raise InvalidPartition(f"Partition blocks overlap on {sorted(seen & block)}")
            for outcome in block:
                if not isinstance(outcome, int) or not 0 <= outcome < self.space.size:
                    raise InvalidPartition(f"Block member {outcome!r} outside space of size {self.space.size}")
            seen |= block
        if len(seen) != self.space.size:
            missing = sorted(set(self.space.outcomes) - seen)
            raise InvalidPartition(f"Partition does not cover outcomes {missing}")
        object.__setattr__(self, "blocks", tuple(sorted(blocks, key=min)))

    @cached_property
    def block_index(self) -> tuple[int, ...]:
        """Block number of each outcome."""
        lookup = [0] * self.space.size
        for number, block in enumerate(self.blocks):
            for outcome in block:
                lookup[outcome] = number
        return tuple(lookup)

    def block_of(self, outcome: int) -> frozenset[int]:
        return self.blocks[self.block_index[outcome]]

    @property
    def is_discrete(self) -> bool:
        return len(self.blocks) == self.space.size

    def is_measurable(self, outcomes: Iterable[int]) -> bool:
        """True if the set is a union of blocks."""
        members = set(outcomes)
        return all(block <= members or not (block & members) for block in self.blocks)


def refines(p: Partition, q: Partition) -> bool:
    """
    Check whether p refines q, i.e. the field of q is contained in the field of p.

    Args:
        p: Candidate finer partition
        q: Candidate coarser partition

    Returns:
        True if every block of p lies inside some block of q

    Raises:
        SpaceMismatch: If the partitions live on different spaces
    """
    if p.space != q.space:
        raise SpaceMismatch("Cannot compare partitions of different spaces")
    return all(len({q.block_index[outcome] for outcome in block}) == 1 for block in p.blocks)


def common_refinement(partitions: Sequence[Partition]) -> Partition:
    """Coarsest partition refining every given partition."""
    if not partitions:
        raise EmptyIndexSet("Need at least one partition")
    space = partitions[0].space
    if any(p.space != space for p in partitions):
        raise SpaceMismatch("Partitions live on different spaces")
    groups: dict[tuple[int, ...], set[int]] = {}
    for outcome in space.outcomes:
        key = tuple(p.block_index[outcome] for p in partitions)
        groups.setdefault(key, set()).add(outcome)
    return Partition(space, tuple(frozenset(block) for block in groups.values()))


@dataclass(frozen=True)
class Event:
    """A set of outcome indices of a finite space."""

    space: FiniteSpace
    members: frozenset[int]

    def __post_init__(self):
        members = frozenset(self.members)
        for outcome in members:
            if not isinstance(outcome, int) or not 0 <= outcome < self.space.size:
                raise BadValue(f"Event member {outcome!r} outside space of size {self.space.size}")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, space: FiniteSpace, outcomes: Iterable[int | str]) -> Event:
        return cls(space, frozenset(space.outcome(ref) for ref in outcomes))

    @classmethod
    def full(cls, space: FiniteSpace) -> Event:
        return cls(space, frozenset(space.outcomes))

    @classmethod
    def empty(cls, space: FiniteSpace) -> Event:
        return cls(space, frozenset())

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, outcome: object) -> bool:
        return outcome in self.members

    def _same_space(self, other: Event) -> None:
        if other.space != self.space:
            raise SpaceMismatch("Events live on different spaces")

    def __and__(self, other: Event) -> Event:
        self._same_space(other)
        return Event(self.space, self.members & other.members)

    def __or__(self, other: Event) -> Event:
        self._same_space(other)
        return Event(self.space, self.members | other.members)

    def complement(self) -> Event:
        return Event(self.space, frozenset(self.space.outcomes) - self.members)

    def issubset(self, other: Event) -> bool:
        self._same_space(other)
        return self.members <= other.members

    @property
    def is_full(self) -> bool:
        return len(self.members) == self.space.size


def intersect(space: FiniteSpace, events: Iterable[Event]) -> Event:
    """Intersection of events, the full space for an empty sequence."""
    members = frozenset(space.outcomes)
    for event in events:
        if event.space != space:
            raise SpaceMismatch(f"Event on {event.space.display_name} used with {space.display_name}")
        members &= event.members
    return Event(space, members)


class MeasureKind(StrEnum):
    """What a weight vector is allowed to be."""

    PROBABILITY = "probability"
    FINITE = "finite"
    BASE = "base"


@dataclass(frozen=True)
class RationalMeasure:
    """An exact nonnegative measure on a finite space, one weight per outcome."""

    space: FiniteSpace
    weights: tuple[Fraction, ...]
    kind: MeasureKind = MeasureKind.FINITE

    def __post_init__(self):
        weights = tuple(Fraction(w) for w in self.weights)
        if len(weights) != self.space.size:
            raise InvalidMeasure(f"Expected {self.space.size} weights, got {len(weights)}")
        negative = [i for i, w in enumerate(weights) if w < 0]
        if negative:
            raise InvalidMeasure(f"Negative weight at outcomes {negative}")
        kind = MeasureKind(self.kind)
        if kind is MeasureKind.PROBABILITY and sum(weights) != 1:
            raise InvalidMeasure(f"Probability weights sum to {sum(weights)}, not 1")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "kind", kind)

    @classmethod
    def uniform(cls, space: FiniteSpace) -> RationalMeasure:
        return cls(space, (Fraction(1, space.size),) * space.size, MeasureKind.PROBABILITY)

    @classmethod
    def point_mass(cls, space: FiniteSpace, outcome: int) -> RationalMeasure:
        space.check_outcome(outcome)
        weights = tuple(Fraction(int(i == outcome)) for i in space.outcomes)
        return cls(space, weights, MeasureKind.PROBABILITY)

    @classmethod
    def zero(cls, space: FiniteSpace, kind: MeasureKind = MeasureKind.FINITE) -> RationalMeasure:
        return cls(space, (Fraction(0),) * space.size, kind)

    @classmethod
    def counting(cls, space: FiniteSpace) -> RationalMeasure:
        return cls(space, (Fraction(1),) * space.size, MeasureKind.BASE)

    @cached_property
    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    @cached_property
    def support(self) -> frozenset[int]:
        """Outcomes with positive weight."""
        return frozenset(i for i, w in enumerate(self.weights) if w > 0)

    def weight(self, outcome: int) -> Fraction:
        return self.weights[outcome]

    def mass(self, event: Event | Iterable[int]) -> Fraction:
        """Measure of an event or of a set of outcome indices."""
        if isinstance(event, Event):
            if event.space != self.space:
                raise SpaceMismatch(
                    f"Event on {event.space.display_name} measured on {self.space.display_name}"
                )
            event = event.members
        return sum((self.weights[i] for i in event), Fraction(0))

    def restrict(self, event: Event) -> RationalMeasure:
        """The finite measure A -> m(A & event)."""
        if event.space != self.space:
            raise SpaceMismatch("Restricting event lives on another space")
        weights = tuple(w if i in event.members else Fraction(0) for i, w in enumerate(self.weights))
        return RationalMeasure(self.space, weights, MeasureKind.FINITE)

    def scale(self, factor: Fraction) -> RationalMeasure:
        return RationalMeasure(self.space, tuple(w * factor for w in self.weights), MeasureKind.FINITE)

    def with_kind(self, kind: MeasureKind) -> RationalMeasure:
        return RationalMeasure(self.space, self.weights, kind)

    def same_weights(self, other: RationalMeasure) -> bool:
        return self.space == other.space and self.weights == other.weights


@dataclass(frozen=True)
class RandomObject:
    """A measurable map between finite spaces."""

    domain: FiniteSpace
    codomain: FiniteSpace
    mapping: tuple[int, ...]
    domain_field: Partition | None = None
    codomain_field: Partition | None = None
    name: str | None = None

    def __post_init__(self):
        mapping = tuple(self.mapping)
        if len(mapping) != self.domain.size:
            raise BadValue(f"Map covers {len(mapping)} outcomes, domain has {self.domain.size}")
        for outcome, image in enumerate(mapping):
            if not isinstance(image, int) or not 0 <= image < self.codomain.size:
                raise BadValue(f"Outcome {outcome} maps to {image!r}, outside codomain of size {self.codomain.size}")
        object.__setattr__(self, "mapping", mapping)
        if self.domain_field is None:
            object.__setattr__(self, "domain_field", self.domain.discrete)
        if self.codomain_field is None:
            object.__setattr__(self, "codomain_field", self.codomain.discrete)
        if self.domain_field.space != self.domain:
            raise SpaceMismatch("Domain field lives on another space")
        if self.codomain_field.space != self.codomain:
            raise SpaceMismatch("Codomain field lives on another space")
        if not self.domain_field.is_discrete:
            for block in self.codomain_field.blocks:
                if not self.domain_field.is_measurable(self._preimage_members(block)):
                    raise NotMeasurable(
                        f"Preimage of block {sorted(block)} of {self.display_name} is not a union of domain blocks"
                    )

    @classmethod
    def identity(cls, space: FiniteSpace, name: str | None = None) -> RandomObject:
        return cls(space, space, tuple(space.outcomes), name=name)

    @classmethod
    def constant(cls, domain: FiniteSpace, codomain: FiniteSpace, value: int, name: str | None = None) -> RandomObject:
        codomain.check_outcome(value)
        return cls(domain, codomain, (value,) * domain.size, name=name)

    def __call__(self, outcome: int) -> int:
        return self.mapping[outcome]

    @property
    def display_name(self) -> str:
        return self.name or "random object"

    def _preimage_members(self, outcomes: Iterable[int]) -> frozenset[int]:
        targets = set(outcomes)
        return frozenset(w for w, image in enumerate(self.mapping) if image in targets)

    def preimage(self, event: Event | Iterable[int]) -> Event:
        """Pull an event of the codomain back to the domain."""
        if isinstance(event, Event):
            if event.space != self.codomain:
                raise SpaceMismatch(f"Event is not on the codomain of {self.display_name}")
            event = event.members
        return Event(self.domain, self._preimage_members(event))

    @cached_property
    def fibers(self) -> tuple[frozenset[int], ...]:
        """Preimage of every codomain outcome."""
        buckets: list[set[int]] = [set() for _ in self.codomain.outcomes]
        for outcome, image in enumerate(self.mapping):
            buckets[image].add(outcome)
        return tuple(frozenset(b) for b in buckets)


def compose(f: RandomObject, g: RandomObject) -> RandomObject:
    """The composite g after f."""
    if f.codomain != g.domain:
        raise SpaceMismatch(f"Cannot compose {f.display_name} into {g.display_name}")
    return RandomObject(
        f.domain,
        g.codomain,
        tuple(g.mapping[image] for image in f.mapping),
        domain_field=f.domain_field,
        codomain_field=g.codomain_field,
    )


@dataclass(frozen=True)
class IndexSet:
    """A strictly ascending finite set of natural-number indices."""

    indices: tuple[int, ...] = ()

    def __post_init__(self):
        indices = tuple(self.indices)
        for index in indices:
            if isinstance(index, bool) or not isinstance(index, int) or index < 0:
                raise BadValue(f"Index {index!r} is not a natural number")
        if any(a >= b for a, b in itertools.pairwise(indices)):
            raise BadValue(f"Indices must be strictly ascending, got {list(indices)}")
        object.__setattr__(self, "indices", indices)

    @classmethod
    def of(cls, indices: Iterable[int]) -> IndexSet:
        """Build from any iterable; duplicates are rejected."""
        values = list(indices)
        if len(set(values)) != len(values):
            raise BadValue(f"Duplicate indices in {values}")
        return cls(tuple(sorted(values)))

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, index: object) -> bool:
        return index in self.indices

    def position(self, index: int) -> int:
        try:
            return self.indices.index(index)
        except ValueError:
            raise UnknownIndex(f"Index {index} not in {list(self.indices)}") from None

    def union(self, other: IndexSet) -> IndexSet:
        return IndexSet(tuple(sorted(set(self.indices) | set(other.indices))))

    def intersection(self, other: IndexSet) -> IndexSet:
        return IndexSet(tuple(sorted(set(self.indices) & set(other.indices))))

    def difference(self, other: IndexSet) -> IndexSet:
        return IndexSet(tuple(i for i in self.indices if i not in other.indices))

    def isdisjoint(self, other: IndexSet) -> bool:
        return not set(self.indices) & set(other.indices)

    def issubset(self, other: IndexSet) -> bool:
        return set(self.indices) <= set(other.indices)

    def plus(self, other: IndexSet) -> IndexSet:
        """Disjoint union I1 + I2."""
        if not self.isdisjoint(other):
            raise IndexOverlap(f"Index sets {list(self.indices)} and {list(other.indices)} intersect")
        return self.union(other)


@dataclass(frozen=True, kw_only=True)
class ProductSpace(FiniteSpace):
    """Product of finite spaces, points enumerated lexicographically by ascending index."""

    index_set: IndexSet
    factors: tuple[FiniteSpace, ...]

    def __post_init__(self):
        super().__post_init__()
        if len(self.factors) != len(self.index_set):
            raise BadValue("Product needs exactly one factor per index")
        if self.size != math.prod(f.size for f in self.factors):
            raise BadValue("Product size must equal the product of factor sizes")

    @cached_property
    def _strides(self) -> tuple[int, ...]:
        strides = [1] * len(self.factors)
        for k in range(len(self.factors) - 2, -1, -1):
            strides[k] = strides[k + 1] * self.factors[k + 1].size
        return tuple(strides)

    def point(self, outcome: int) -> tuple[int, ...]:
        """Coordinate tuple of an outcome index."""
        self.check_outcome(outcome)
        return tuple((outcome // stride) % factor.size for stride, factor in zip(self._strides, self.factors))

    @cached_property
    def points(self) -> tuple[tuple[int, ...], ...]:
        return tuple(itertools.product(*(range(f.size) for f in self.factors)))

    def index_of(self, point: Sequence[int]) -> int:
        """Outcome index of a coordinate tuple."""
        if len(point) != len(self.factors):
            raise BadValue(f"Point {tuple(point)} has the wrong number of coordinates")
        for coordinate, factor in zip(point, self.factors):
            factor.check_outcome(coordinate)
        return sum(c * s for c, s in zip(point, self._strides))

    def factor(self, index: int) -> FiniteSpace:
        return self.factors[self.index_set.position(index)]

    def coordinate(self, outcome: int, index: int) -> int:
        position = self.index_set.position(index)
        return (outcome // self._strides[position]) % self.factors[position].size

    def label(self, outcome: int) -> str:
        point = self.point(outcome)
        return "(" + ",".join(f.label(c) for f, c in zip(self.factors, point)) + ")"

    def outcome(self, ref: int | str | Sequence[int | str]) -> int:
        if isinstance(ref, (list, tuple)):
            return self.index_of([f.outcome(c) for f, c in zip(self.factors, ref)])
        if isinstance(ref, str) and ref.startswith("("):
            return self.outcome(tuple(part for part in ref[1:-1].split(",") if part))
        return super().outcome(ref)


def product_space(
    index_set: IndexSet,
    factors: Sequence[FiniteSpace],
    cap: int = DEFAULT_PRODUCT_CAP,
) -> ProductSpace:
    """
    Build the product space over an index set.

    Args:
        index_set: Indices in ascending order
        factors: One space per index
        cap: Largest allowed number of points

    Returns:
        The product space

    Raises:
        ProductTooLarge: If the point count exceeds cap
    """
    factors = tuple(factors)
    size = math.prod(f.size for f in factors)
    if size > cap:
        raise ProductTooLarge(f"Product over {list(index_set)} has {size} points, cap is {cap}")
    name = "*".join(f"{i}:{f.display_name}" for i, f in zip(index_set, factors)) or "unit"
    return ProductSpace(size=size, name=name, index_set=index_set, factors=factors)


def product_measure(
    measures: Sequence[RationalMeasure],
    index_set: IndexSet,
    cap: int = DEFAULT_PRODUCT_CAP,
    space: ProductSpace | None = None,
) -> RationalMeasure:
    """Product of measures over the product of their spaces."""
    if space is None:
        space = product_space(index_set, [m.space for m in measures], cap)
    elif tuple(m.space for m in measures) != space.factors:
        raise SpaceMismatch("Measures do not match the product factors")
    weights = tuple(math.prod((m.weights[c] for m, c in zip(measures, point)), start=Fraction(1)) for point in space.points)
    kinds = {m.kind for m in measures}
    if kinds == {MeasureKind.PROBABILITY} or not measures:
        kind = MeasureKind.PROBABILITY
    elif kinds == {MeasureKind.BASE}:
        kind = MeasureKind.BASE
    else:
        kind = MeasureKind.FINITE
    return RationalMeasure(space, weights, kind)


def product_partition(space: ProductSpace, fields: Sequence[Partition]) -> Partition:
    """Partition of a product generated by rectangles of factor blocks."""
    if tuple(p.space for p in fields) != space.factors:
        raise SpaceMismatch("Fields do not match the product factors")
    if all(p.is_discrete for p in fields):
        return space.discrete
    groups: dict[tuple[int, ...], set[int]] = {}
    for outcome, point in enumerate(space.points):
        key = tuple(p.block_index[c] for p, c in zip(fields, point))
        groups.setdefault(key, set()).add(outcome)
    return Partition(space, tuple(frozenset(g) for g in groups.values()))


def make_space(size: int, labels: Sequence[str] | None = None, name: str | None = None) -> FiniteSpace:
    """
    Create a finite space.

    Args:
        size: Number of outcomes
        labels: Optional distinct labels, one per outcome
        name: Optional identifier used in messages and serializations

    Returns:
        The space; its discrete partition is available as ``space.discrete``

    Raises:
        ZeroSize: If size < 1
        DuplicateLabel: If labels repeat
    """
    space = FiniteSpace(size, tuple(labels) if labels is not None else None, name)
    logger.debug("Created space {} with {} outcomes", space.display_name, size)
    return space


def pushforward(P: RationalMeasure, X: RandomObject) -> RationalMeasure:
    """
    Law of X under P, i.e. the induced measure P[X].

    Args:
        P: Measure on the domain of X
        X: Random object

    Returns:
        Measure on the codomain of X, same kind as P

    Raises:
        SpaceMismatch: If P does not live on X.domain
    """
    if P.space != X.domain:
        raise SpaceMismatch(f"Measure on {P.space.display_name} but {X.display_name} is defined on {X.domain.display_name}")
    weights = [Fraction(0)] * X.codomain.size
    for outcome, image in enumerate(X.mapping):
        weights[image] += P.weights[outcome]
    kind = P.kind if P.kind is not MeasureKind.BASE else MeasureKind.FINITE
    return RationalMeasure(X.codomain, tuple(weights), kind)


def bundle(
    objects: Mapping[int, RandomObject],
    index_set: IndexSet | Iterable[int] | None = None,
    cap: int = DEFAULT_PRODUCT_CAP,
) -> RandomObject:
    """
    Bundle random objects into X_I with values in the product space.

    Args:
        objects: Random objects keyed by index
        index_set: Indices to bundle, all keys by default
        cap: Largest allowed product size

    Returns:
        Random object into the product of the codomains, coordinates by ascending index

    Raises:
        EmptyIndexSet: If no index is selected
        DomainMismatch: If the objects have different domains
        ProductTooLarge: If the product exceeds cap
    """
    if index_set is None:
        index_set = IndexSet.of(objects)
    elif not isinstance(index_set, IndexSet):
        index_set = IndexSet.of(index_set)
    if not len(index_set):
        raise EmptyIndexSet("Cannot bundle over an empty index set")
    missing = [i for i in index_set if i not in objects]
    if missing:
        raise UnknownIndex(f"No random object for indices {missing}")
    members = [objects[i] for i in index_set]
    domain = members[0].domain
    if any(X.domain != domain for X in members):
        raise DomainMismatch("Bundled random objects must share one domain")
    codomain = product_space(index_set, [X.codomain for X in members], cap)
    mapping = tuple(
        codomain.index_of([X.mapping[outcome] for X in members]) for outcome in domain.outcomes
    )
    domain_field = common_refinement([X.domain_field for X in members])
    codomain_field = product_partition(codomain, [X.codomain_field for X in members])
    name = "(" + ",".join(X.display_name for X in members) + ")"
    return RandomObject(domain, codomain, mapping, domain_field, codomain_field, name)


def projection(space: ProductSpace, index: int) -> RandomObject:
    """Coordinate projection of a product onto one factor."""
    factor = space.factor(index)
    mapping = tuple(space.coordinate(outcome, index) for outcome in space.outcomes)
    return RandomObject(space, factor, mapping, name=f"pi[{index}]")


def coarsen(X: RandomObject, g: Partition) -> RandomObject:
    """
    Same map as X with codomain field g.

    Raises:
        SpaceMismatch: If g does not partition X.codomain
    """
    if g.space != X.codomain:
        raise SpaceMismatch(f"Partition is not on the codomain of {X.display_name}")
    return replace(X, codomain_field=g)


@dataclass(frozen=True)
class EngineModel:
    """A base probability space with named random objects on it."""

    law: RationalMeasure
    objects: Mapping[str, RandomObject] = field(default_factory=dict)

    def __post_init__(self):
        if self.law.kind is not MeasureKind.PROBABILITY:
            raise InvalidMeasure("The base law of a model must be a probability measure")
        for key, X in self.objects.items():
            if X.domain != self.law.space:
                raise DomainMismatch(f"Object {key} is not defined on the base space")

    @property
    def space(self) -> FiniteSpace:
        return self.law.space
