"""Pointwise conditional probabilities, kernels and conditional independence."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from loguru import logger

from .constants import DEFAULT_PRODUCT_CAP
from .cooccurrence import Constraint, pullback_all
from .exceptions import CoordinateMismatch, InvalidMeasure, SpaceMismatch
from .space import (
    Event,
    FiniteSpace,
    IndexSet,
    MeasureKind,
    Partition,
    ProductSpace,
    RandomObject,
    RationalMeasure,
    bundle,
    product_space,
)

ZERO = Fraction(0)

UNIT_SPACE = FiniteSpace(1, name="unit")


def unit_object(domain: FiniteSpace) -> RandomObject:
    """Constant object into the one-point space; conditioning on it conditions on nothing."""
    return RandomObject.constant(domain, UNIT_SPACE, 0, name="unit")


@dataclass(frozen=True)
class PointwiseConditional:
    """A function on a source space defined up to reference-null outcomes."""

    source: FiniteSpace
    values: tuple[Fraction, ...]
    reference: RationalMeasure
    field: Partition | None = None
    null_condition: bool = False

    def __post_init__(self):
        values = tuple(Fraction(v) for v in self.values)
        if len(values) != self.source.size:
            raise SpaceMismatch(f"Expected {self.source.size} values, got {len(values)}")
        if self.reference.space != self.source:
            raise SpaceMismatch("Reference measure lives on another space")
        object.__setattr__(self, "values", values)
        if self.field is None:
            object.__setattr__(self, "field", self.source.discrete)

    @property
    def support(self) -> frozenset[int]:
        return self.reference.support

    def __getitem__(self, outcome: int) -> Fraction:
        return self.values[outcome]

    def ae_equal(self, other: PointwiseConditional) -> bool:
        """Equality on every reference-positive outcome."""
        if other.source != self.source:
            raise SpaceMismatch("Conditionals live on different spaces")
        return all(self.values[x] == other.values[x] for x in self.support)

    def integral(self, event: Event | frozenset[int] | None = None) -> Fraction:
        """Sum of value times reference weight over an event of the source."""
        outcomes = self.source.outcomes if event is None else event
        if isinstance(outcomes, Event):
            outcomes = outcomes.members
        return sum((self.values[x] * self.reference.weights[x] for x in outcomes), ZERO)

    def with_values(self, values: Sequence[Fraction]) -> PointwiseConditional:
        return PointwiseConditional(self.source, tuple(values), self.reference, self.field, self.null_condition)


@dataclass(frozen=True)
class Kernel:
    """Finite measures on a target space indexed by source outcomes."""

    source: FiniteSpace
    target: FiniteSpace
    rows: tuple[tuple[Fraction, ...], ...]
    support: frozenset[int]
    reference: RationalMeasure | None = field(default=None, compare=False)
    null_condition: bool = False

    def __post_init__(self):
        rows = tuple(tuple(Fraction(w) for w in row) for row in self.rows)
        if len(rows) != self.source.size or any(len(row) != self.target.size for row in rows):
            raise SpaceMismatch("Kernel rows do not match source and target sizes")
        for x, row in enumerate(rows):
            if any(w < 0 for w in row):
                raise InvalidMeasure(f"Negative weight in kernel row {x}")
            if x not in self.support and any(row):
                raise InvalidMeasure(f"Row {x} is outside the support but not zero")
        if self.reference is not None and self.reference.space != self.source:
            raise SpaceMismatch("Kernel reference lives on another space")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "support", frozenset(self.support))

    @classmethod
    def zero(cls, source: FiniteSpace, target: FiniteSpace, null_condition: bool = True) -> Kernel:
        rows = ((ZERO,) * target.size,) * source.size
        return cls(source, target, rows, frozenset(), None, null_condition)

    def row(self, x: int) -> RationalMeasure:
        return RationalMeasure(self.target, self.rows[x], MeasureKind.FINITE)

    def value(self, x: int, event: Event | frozenset[int]) -> Fraction:
        """K(x, A)."""
        members = event.members if isinstance(event, Event) else event
        return sum((self.rows[x][y] for y in members), ZERO)

    def ae_equal(self, other: Kernel) -> bool:
        """Row equality on the union of both supports."""
        if other.source != self.source or other.target != self.target:
            raise SpaceMismatch("Kernels have different source or target")
        return all(self.rows[x] == other.rows[x] for x in self.support | other.support)

    @cached_property
    def row_totals(self) -> tuple[Fraction, ...]:
        return tuple(sum(row, ZERO) for row in self.rows)


def _check_shared(P: RationalMeasure, objects: Sequence[RandomObject], constraints: Sequence[Constraint]) -> None:
    for X in objects:
        if X.domain != P.space:
            raise SpaceMismatch(f"{X.display_name} is not defined on the base space")
    for c in constraints:
        if c.obj.domain != P.space:
            raise SpaceMismatch(f"{c.obj.display_name} is not defined on the base space")


def cond_prob_pointwise(
    P: RationalMeasure,
    X: RandomObject,
    targets: Sequence[Constraint],
    conds: Sequence[Constraint] = (),
) -> PointwiseConditional:
    """
    Conditional probability of the targets given X and the conditions.

    Values are computed per block of X's codomain field, so coarsened objects
    condition on the sub-field they carry. Reference-null outcomes get 0.

    Args:
        P: Base probability
        X: Conditioning random object
        targets: Target constraints
        conds: Condition constraints

    Returns:
        Pointwise conditional on X.codomain against reference P[X; conds]

    Raises:
        SpaceMismatch: If some object lives on another space
    """
    _check_shared(P, [X], [*targets, *conds])
    condition = pullback_all(P, conds)
    target = pullback_all(P, targets)
    field = X.codomain_field
    ref = [ZERO] * X.codomain.size
    block_ref = [ZERO] * len(field.blocks)
    block_num = [ZERO] * len(field.blocks)
    for omega in condition.members:
        p = P.weights[omega]
        image = X.mapping[omega]
        block = field.block_index[image]
        ref[image] += p
        block_ref[block] += p
        if omega in target.members:
            block_num[block] += p
    reference = RationalMeasure(X.codomain, tuple(ref), MeasureKind.FINITE)
    if reference.total == 0:
        logger.debug("Null reference for P[.|{}], returning the zero conditional", X.display_name)
        return PointwiseConditional(X.codomain, (ZERO,) * X.codomain.size, reference, field, True)
    values = tuple(
        block_num[field.block_index[x]] / block_ref[field.block_index[x]] if ref[x] > 0 else ZERO
        for x in X.codomain.outcomes
    )
    return PointwiseConditional(X.codomain, values, reference, field)


def cond_kernel(
    P: RationalMeasure,
    X1: RandomObject,
    X3: RandomObject,
    conds: Sequence[Constraint] = (),
    target_conds: Sequence[Constraint] = (),
) -> Kernel:
    """
    Kernel P[X3, target_conds | X1, conds] from X1's codomain to X3's codomain.

    Args:
        P: Base probability
        X1: Conditioning random object
        X3: Target random object
        conds: Constraints conditioned on
        target_conds: Constraints co-occurring with X3

    Returns:
        Kernel supported on the positive points of P[X1; conds]; zero kernel
        with the null flag when that measure vanishes
    """
    _check_shared(P, [X1, X3], [*conds, *target_conds])
    condition = pullback_all(P, conds)
    target = pullback_all(P, target_conds)
    field = X1.codomain_field
    ref = [ZERO] * X1.codomain.size
    block_ref = [ZERO] * len(field.blocks)
    block_rows = [[ZERO] * X3.codomain.size for _ in field.blocks]
    for omega in condition.members:
        p = P.weights[omega]
        image = X1.mapping[omega]
        block = field.block_index[image]
        ref[image] += p
        block_ref[block] += p
        if omega in target.members:
            block_rows[block][X3.mapping[omega]] += p
    reference = RationalMeasure(X1.codomain, tuple(ref), MeasureKind.FINITE)
    if reference.total == 0:
        logger.debug("Null reference for P[{}|{}], returning the zero kernel", X3.display_name, X1.display_name)
        return Kernel.zero(X1.codomain, X3.codomain)
    zero_row = (ZERO,) * X3.codomain.size
    rows = []
    for x in X1.codomain.outcomes:
        if ref[x] == 0:
            rows.append(zero_row)
            continue
        block = field.block_index[x]
        rows.append(tuple(w / block_ref[block] for w in block_rows[block]))
    kernel = Kernel(X1.codomain, X3.codomain, tuple(rows), reference.support, reference)
    logger.debug(
        "Built kernel P[{}|{}] with {} supported rows", X3.display_name, X1.display_name, len(kernel.support)
    )
    return kernel


def satisfies_defining_equation(
    pc: PointwiseConditional,
    P: RationalMeasure,
    X: RandomObject,
    targets: Sequence[Constraint],
    conds: Sequence[Constraint] = (),
) -> bool:
    """
    Check sum over A of value * P[X; conds] = P(targets, conds, X in A).

    A runs over the blocks of X's codomain field and the whole codomain.
    """
    condition = pullback_all(P, conds)
    joint = condition & pullback_all(P, targets)
    ref = [ZERO] * X.codomain.size
    for omega in condition.members:
        ref[X.mapping[omega]] += P.weights[omega]
    events = [*X.codomain_field.blocks, frozenset(X.codomain.outcomes)]
    for block in events:
        lhs = sum((pc.values[x] * ref[x] for x in block), ZERO)
        rhs = P.mass(joint.members & X.preimage(block).members)
        if lhs != rhs:
            return False
    return True


def kernel_satisfies_defining_equation(
    k: Kernel,
    P: RationalMeasure,
    X1: RandomObject,
    X3: RandomObject,
    conds: Sequence[Constraint] = (),
    target_conds: Sequence[Constraint] = (),
) -> bool:
    """Check the kernel integral equation over source blocks, target points and full spaces."""
    condition = pullback_all(P, conds)
    joint = condition & pullback_all(P, target_conds)
    ref = [ZERO] * X1.codomain.size
    for omega in condition.members:
        ref[X1.mapping[omega]] += P.weights[omega]
    sources = [*X1.codomain_field.blocks, frozenset(X1.codomain.outcomes)]
    targets = [frozenset({y}) for y in X3.codomain.outcomes] + [frozenset(X3.codomain.outcomes)]
    for block in sources:
        pulled = joint.members & X1.preimage(block).members
        for target in targets:
            lhs = sum((k.value(x, target) * ref[x] for x in block), ZERO)
            rhs = P.mass(pulled & X3.preimage(target).members)
            if lhs != rhs:
                return False
    return True


def _remaining_target(target: ProductSpace, index: int) -> tuple[FiniteSpace, list[int]]:
    remaining = [i for i in target.index_set if i != index]
    if len(remaining) == 1:
        return target.factor(remaining[0]), remaining
    sub = product_space(IndexSet(tuple(remaining)), [target.factor(i) for i in remaining], cap=target.size)
    return sub, remaining


def kernel_fix_target(k: Kernel, index: int, event: Event) -> Kernel:
    """
    Fix one coordinate of a joint-target kernel to an event.

    The new row is A -> row(A x event); a single remaining coordinate is
    returned as the factor space itself.

    Args:
        k: Kernel into a product space
        index: Coordinate index to fix
        event: Event on that coordinate's factor

    Returns:
        Kernel into the remaining coordinates

    Raises:
        CoordinateMismatch: If the target has no such coordinate or only that one
    """
    target = k.target
    if not isinstance(target, ProductSpace) or index not in target.index_set:
        raise CoordinateMismatch(f"Kernel target has no coordinate {index}")
    if len(target.index_set) < 2:
        raise CoordinateMismatch("Fixing the only coordinate leaves no target")
    if event.space != target.factor(index):
        raise CoordinateMismatch(f"Event is not on the factor of coordinate {index}")
    remaining_space, remaining = _remaining_target(target, index)
    position = target.index_set.position(index)
    # Map every joint point with its fixed coordinate in the event to its remaining point
    contributions: list[tuple[int, int]] = []
    for outcome, point in enumerate(target.points):
        if point[position] not in event.members:
            continue
        rest = tuple(c for pos, c in enumerate(point) if pos != position)
        reduced = rest[0] if len(remaining) == 1 else remaining_space.index_of(rest)
        contributions.append((outcome, reduced))
    rows = []
    for row in k.rows:
        new_row = [ZERO] * remaining_space.size
        for outcome, reduced in contributions:
            new_row[reduced] += row[outcome]
        rows.append(tuple(new_row))
    return Kernel(k.source, remaining_space, tuple(rows), k.support, k.reference, k.null_condition)


def bayes_shift(k_joint: Kernel, p3: PointwiseConditional) -> Kernel:
    """
    Move a fixed target event into the conditions by dividing rows by its conditional probability.

    Rows where p3 vanishes become zero.

    Raises:
        SpaceMismatch: If the kernel and the conditional have different sources
    """
    if k_joint.source != p3.source:
        raise SpaceMismatch("Kernel and conditional live on different sources")
    zero_row = (ZERO,) * k_joint.target.size
    rows = []
    support = set()
    for x, row in enumerate(k_joint.rows):
        if x in k_joint.support and p3.values[x] > 0:
            rows.append(tuple(w / p3.values[x] for w in row))
            support.add(x)
        else:
            rows.append(zero_row)
    reference = None
    if k_joint.reference is not None:
        weights = tuple(k_joint.reference.weights[x] * p3.values[x] if x in support else ZERO for x in k_joint.source.outcomes)
        reference = RationalMeasure(k_joint.source, weights, MeasureKind.FINITE)
    return Kernel(k_joint.source, k_joint.target, tuple(rows), frozenset(support), reference, not support)


def scale_rows(k: Kernel, factor: PointwiseConditional) -> Kernel:
    """Multiply every row by the conditional's value at its source point."""
    if k.source != factor.source:
        raise SpaceMismatch("Kernel and conditional live on different sources")
    rows = tuple(tuple(w * factor.values[x] for w in row) for x, row in enumerate(k.rows))
    return Kernel(k.source, k.target, rows, k.support, k.reference, k.null_condition)


def disintegrate_check(
    k: Kernel,
    marginal: RationalMeasure,
    indices: tuple[int, int] = (1, 2),
    cap: int = DEFAULT_PRODUCT_CAP,
) -> RationalMeasure:
    """
    Rebuild the joint measure on source x target from a kernel and a source marginal.

    Args:
        k: Kernel from the marginal's space
        marginal: Measure the kernel is integrated against
        indices: Coordinate indices of source and target in the product
        cap: Largest allowed product size

    Returns:
        Finite measure with value(x, y) = k(x, {y}) * marginal(x)

    Raises:
        SpaceMismatch: If the kernel source is not the marginal's space
    """
    if k.source != marginal.space:
        raise SpaceMismatch("Kernel source and marginal space differ")
    joint_space = product_space(IndexSet(indices), [k.source, k.target], cap)
    weights = tuple(k.rows[x][y] * marginal.weights[x] for x, y in joint_space.points)
    return RationalMeasure(joint_space, weights, MeasureKind.FINITE)


def kernel_integrate(k: Kernel, p: PointwiseConditional, event: Event | None = None) -> PointwiseConditional:
    """
    Integrate a conditional on source x target against the kernel rows.

    result(x) = sum over y in event of p((x, y)) * k(x, {y}).

    Raises:
        SpaceMismatch: If p does not live on the product of the kernel's source and target
    """
    product = p.source
    if not isinstance(product, ProductSpace) or product.factors != (k.source, k.target):
        raise SpaceMismatch("Conditional must live on the product of the kernel source and target")
    members = range(k.target.size) if event is None else sorted(event.members)
    values = []
    for x in k.source.outcomes:
        if x not in k.support:
            values.append(ZERO)
            continue
        values.append(sum((p.values[product.index_of((x, y))] * k.rows[x][y] for y in members), ZERO))
    reference = k.reference or RationalMeasure(
        k.source, tuple(Fraction(int(x in k.support)) for x in k.source.outcomes), MeasureKind.FINITE
    )
    return PointwiseConditional(k.source, tuple(values), reference, null_condition=k.null_condition)


def kernel_compose(
    first: Kernel,
    second: Kernel,
    indices: tuple[int, int] = (2, 3),
    cap: int = DEFAULT_PRODUCT_CAP,
) -> Kernel:
    """
    Compose a kernel x1 -> x2 with a kernel (x1, x2) -> x3 into x1 -> (x2, x3).

    Raises:
        SpaceMismatch: If the second kernel's source is not the product of the first's source and target
    """
    source = second.source
    if not isinstance(source, ProductSpace) or source.factors != (first.source, first.target):
        raise SpaceMismatch("Second kernel must start from the product of the first kernel's spaces")
    target = product_space(IndexSet(indices), [first.target, second.target], cap)
    rows = []
    for x in first.source.outcomes:
        row = []
        for y, z in target.points:
            weight = first.rows[x][y]
            row.append(weight * second.rows[source.index_of((x, y))][z] if weight else ZERO)
        rows.append(tuple(row))
    return Kernel(first.source, target, tuple(rows), first.support, first.reference, first.null_condition)


def kernel_product(
    k2: Kernel,
    k3: Kernel,
    indices: tuple[int, int] = (2, 3),
    cap: int = DEFAULT_PRODUCT_CAP,
) -> Kernel:
    """
    Kernel into the product target with rectangle values K2(x, A2) * K3(x, A3).

    Raises:
        SpaceMismatch: If the kernels have different sources
        ProductTooLarge: If the product target exceeds cap
    """
    if k2.source != k3.source:
        raise SpaceMismatch("Kernels have different sources")
    target = product_space(IndexSet(indices), [k2.target, k3.target], cap)
    support = k2.support & k3.support
    zero_row = (ZERO,) * target.size
    rows = tuple(
        tuple(k2.rows[x][a] * k3.rows[x][b] for a, b in target.points) if x in support else zero_row
        for x in k2.source.outcomes
    )
    return Kernel(k2.source, target, rows, support, k2.reference, k2.null_condition or k3.null_condition)


def constant_kernel(source: FiniteSpace, measure: RationalMeasure) -> Kernel:
    """Kernel whose every row is the given measure."""
    rows = (measure.weights,) * source.size
    return Kernel(source, measure.space, rows, frozenset(source.outcomes))


@dataclass(frozen=True)
class CiSide:
    """One side of an independence statement: an optional subject object with constraints."""

    subject: RandomObject | None = None
    constraints: tuple[Constraint, ...] = ()


@dataclass(frozen=True)
class CiSpec:
    """
    Conditional independence of two sides given an optional object and conditions.

    With a subject, a side is measure-valued (co-occurrence of the subject and
    its constraints); without one it is the event of its constraints.
    """

    side_a: CiSide
    side_b: CiSide
    given: RandomObject | None = None
    given_conditions: tuple[Constraint, ...] = ()
    pattern: int | None = None

    def objects(self) -> list[RandomObject]:
        found = [self.side_a.subject, self.side_b.subject, self.given]
        found += [c.obj for c in (*self.side_a.constraints, *self.side_b.constraints, *self.given_conditions)]
        return [X for X in found if X is not None]

    def swapped(self) -> CiSpec:
        return CiSpec(self.side_b, self.side_a, self.given, self.given_conditions, self.pattern)


def pattern1(a1: Constraint, a2: Constraint, a3: Constraint) -> CiSpec:
    """Events X2 in A2 and X3 in A3 given X1 in A1."""
    return CiSpec(CiSide(None, (a2,)), CiSide(None, (a3,)), None, (a1,), 1)


def pattern2(a1: Constraint, x2: RandomObject, a4: Constraint, a3: Constraint) -> CiSpec:
    """Co-occurrence of X2 and X4 in A4 against event X3 in A3, given X1 in A1."""
    return CiSpec(CiSide(x2, (a4,)), CiSide(None, (a3,)), None, (a1,), 2)


def pattern3(a1: Constraint, x2: RandomObject, a4: Constraint, x3: RandomObject, a5: Constraint) -> CiSpec:
    """Co-occurrences (X2, X4 in A4) and (X3, X5 in A5) given X1 in A1."""
    return CiSpec(CiSide(x2, (a4,)), CiSide(x3, (a5,)), None, (a1,), 3)


def pattern4(x1: RandomObject, a3: Constraint, a2: Constraint, a4: Constraint) -> CiSpec:
    """Events X2 in A2 and X4 in A4 given co-occurrence of X1 and X3 in A3."""
    return CiSpec(CiSide(None, (a2,)), CiSide(None, (a4,)), x1, (a3,), 4)


def pattern5(x1: RandomObject, a3: Constraint, x2: RandomObject, a4: Constraint, a5: Constraint) -> CiSpec:
    """Co-occurrence of X2 and X4 in A4 against event X5 in A5, given X1 with X3 in A3."""
    return CiSpec(CiSide(x2, (a4,)), CiSide(None, (a5,)), x1, (a3,), 5)


def pattern6(
    x1: RandomObject, a4: Constraint, x2: RandomObject, a5: Constraint, x3: RandomObject, a6: Constraint
) -> CiSpec:
    """Co-occurrences (X2, X5 in A5) and (X3, X6 in A6) given X1 with X4 in A4."""
    return CiSpec(CiSide(x2, (a5,)), CiSide(x3, (a6,)), x1, (a4,), 6)


@dataclass(frozen=True)
class CiResult:
    """Outcome of an independence check."""

    independent: bool
    null_condition: bool = False
    witness: tuple | None = field(default=None, compare=False)

    def __bool__(self) -> bool:
        return self.independent


def _block_of(X: RandomObject | None, omega: int) -> int:
    if X is None:
        return 0
    return X.codomain_field.block_index[X.mapping[omega]]


def _block_masses(row: Sequence[Fraction], p: Partition) -> tuple[Fraction, ...]:
    return tuple(sum((row[x] for x in block), ZERO) for block in p.blocks)


def check_cond_independence(P: RationalMeasure, spec: CiSpec) -> CiResult:
    """
    Decide conditional independence by the exact product identity.

    For every conditioning context of positive mass (one per block of the given
    object's field, or the single event of the given conditions) the joint
    conditional mass of each pair of side outcomes must equal the product of
    the side masses, where a measure-valued side is keyed by the block of its
    subject's codomain field. Identities on blocks extend to rectangles by
    additivity.

    Args:
        P: Base probability
        spec: The independence statement

    Returns:
        CiResult; vacuously independent with the null flag when every context is null
    """
    _check_shared(P, spec.objects(), ())
    condition = pullback_all(P, spec.given_conditions)
    event_a = pullback_all(P, spec.side_a.constraints)
    event_b = pullback_all(P, spec.side_b.constraints)
    context_mass: dict[int, Fraction] = {}
    mass_a: dict[tuple[int, int], Fraction] = {}
    mass_b: dict[tuple[int, int], Fraction] = {}
    mass_ab: dict[tuple[int, int, int], Fraction] = {}
    for omega in condition.members:
        p = P.weights[omega]
        if p == 0:
            continue
        ctx = spec.given.codomain_field.block_index[spec.given.mapping[omega]] if spec.given else 0
        context_mass[ctx] = context_mass.get(ctx, ZERO) + p
        a = _block_of(spec.side_a.subject, omega)
        b = _block_of(spec.side_b.subject, omega)
        in_a = omega in event_a.members
        in_b = omega in event_b.members
        if in_a:
            mass_a[ctx, a] = mass_a.get((ctx, a), ZERO) + p
        if in_b:
            mass_b[ctx, b] = mass_b.get((ctx, b), ZERO) + p
        if in_a and in_b:
            mass_ab[ctx, a, b] = mass_ab.get((ctx, a, b), ZERO) + p
    if not context_mass:
        logger.debug("Independence check with null conditioning, vacuously true")
        return CiResult(True, True)
    for (ctx_a, a), ma in sorted(mass_a.items()):
        for (ctx_b, b), mb in sorted(mass_b.items()):
            if ctx_a != ctx_b:
                continue
            joint = mass_ab.get((ctx_a, a, b), ZERO)
            if joint * context_mass[ctx_a] != ma * mb:
                return CiResult(False, False, (ctx_a, a, b))
    return CiResult(True, False)


def conditional_equality(P: RationalMeasure, spec: CiSpec, swap: bool = False) -> bool:
    """
    Check that conditioning additionally on side B leaves side A's conditional law unchanged.

    Both sides are computed with cond_kernel: the kernel of side A given the
    given object together with side B's subject must agree, on its support,
    with the kernel of side A given the given object alone. Null cases are
    vacuously true.

    Args:
        P: Base probability
        spec: The independence statement
        swap: Condition side B on side A instead
    """
    if swap:
        spec = spec.swapped()
    unit = unit_object(P.space)
    subject = spec.side_a.subject or unit
    given = spec.given or unit
    other = spec.side_b.subject
    if other is None:
        source = given
    elif spec.given is None:
        source = other
    else:
        source = bundle({0: given, 1: other}, IndexSet((0, 1)), cap=given.codomain.size * other.codomain.size)
    conds = (*spec.given_conditions, *spec.side_b.constraints)
    lhs = cond_kernel(P, source, subject, conds, spec.side_a.constraints)
    rhs = cond_kernel(P, given, subject, spec.given_conditions, spec.side_a.constraints)
    for x in lhs.support:
        if source is given:
            g = x
        elif spec.given is None:
            g = 0
        else:
            g = source.codomain.point(x)[0]
        if _block_masses(lhs.rows[x], subject.codomain_field) != _block_masses(rhs.rows[g], subject.codomain_field):
            return False
    return True
