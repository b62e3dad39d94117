"""Integrals against co-occurrence measures and conditional expectations."""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from loguru import logger

from .conditioning import Kernel, PointwiseConditional, cond_kernel
from .constants import DEFAULT_PRODUCT_CAP, FLOAT_RELATIVE_TOLERANCE
from .cooccurrence import Constraint, CoocQuery, cond_cooc_measure, cooc_measure, pullback_all
from .exceptions import (
    ChainMismatch,
    DecompositionMismatch,
    InvalidExponent,
    InvalidMeasure,
    NotConvex,
    SpaceMismatch,
)
from .space import Event, FiniteSpace, IndexSet, RandomObject, RationalMeasure, bundle, coarsen

ZERO = Fraction(0)

Scalar = int | Fraction


@dataclass(frozen=True)
class RandomVariable:
    """An exact real function on a finite space."""

    space: FiniteSpace
    values: tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(Fraction(v) for v in self.values)
        if len(values) != self.space.size:
            raise SpaceMismatch(f"Random variable needs {self.space.size} values, got {len(values)}")
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, space: FiniteSpace, value: Scalar) -> RandomVariable:
        return cls(space, (Fraction(value),) * space.size)

    @classmethod
    def indicator(cls, event: Event) -> RandomVariable:
        return cls(event.space, tuple(Fraction(int(x in event.members)) for x in event.space.outcomes))

    def __getitem__(self, outcome: int) -> Fraction:
        return self.values[outcome]

    def _operand(self, other: RandomVariable | Scalar) -> tuple[Fraction, ...]:
        if isinstance(other, RandomVariable):
            if other.space != self.space:
                raise SpaceMismatch("Random variables live on different spaces")
            return other.values
        if isinstance(other, Rational):
            return (Fraction(other),) * self.space.size
        return NotImplemented

    def _combine(self, other, op: Callable[[Fraction, Fraction], Fraction]) -> RandomVariable:
        values = self._operand(other)
        if values is NotImplemented:
            return NotImplemented
        return RandomVariable(self.space, tuple(op(a, b) for a, b in zip(self.values, values)))

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._combine(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self) -> RandomVariable:
        return RandomVariable(self.space, tuple(-v for v in self.values))

    def __abs__(self) -> RandomVariable:
        return RandomVariable(self.space, tuple(abs(v) for v in self.values))

    def minimum(self, other: RandomVariable | Scalar) -> RandomVariable:
        return self._combine(other, min)

    def maximum(self, other: RandomVariable | Scalar) -> RandomVariable:
        return self._combine(other, max)

    def apply(self, fn: Callable[[Fraction], Fraction]) -> RandomVariable:
        return RandomVariable(self.space, tuple(Fraction(fn(v)) for v in self.values))

    def compose(self, X: RandomObject) -> RandomVariable:
        """The variable omega -> self(X(omega)) on X's domain."""
        if X.codomain != self.space:
            raise SpaceMismatch(f"Variable is not defined on the codomain of {X.display_name}")
        return RandomVariable(X.domain, tuple(self.values[image] for image in X.mapping))

    def dominated_by(self, other: RandomVariable, support: frozenset[int] | None = None) -> bool:
        """True if self <= other on the given outcomes, everywhere by default."""
        outcomes = self.space.outcomes if support is None else support
        return all(self.values[x] <= other.values[x] for x in outcomes)

    def is_measurable(self, blocks: Sequence[frozenset[int]]) -> bool:
        """True if the variable is constant on every block."""
        return all(len({self.values[x] for x in block}) == 1 for block in blocks)


@dataclass(frozen=True)
class EIntegralResult:
    """Value of an integral with its null-condition flag and the measure used."""

    value: Fraction
    null_condition: bool = False
    reference: RationalMeasure | None = None

    def __post_init__(self):
        if self.null_condition and self.value != 0:
            raise InvalidMeasure("A null-condition integral must be zero")


def e_integral(Y: RandomVariable, m: RationalMeasure) -> EIntegralResult:
    """
    Integral of Y against a finite measure.

    Raises:
        SpaceMismatch: If Y and m live on different spaces
    """
    if Y.space != m.space:
        raise SpaceMismatch(f"Variable on {Y.space.display_name} integrated against {m.space.display_name}")
    value = sum((y * w for y, w in zip(Y.values, m.weights) if w), ZERO)
    return EIntegralResult(value, False, m)


def e_integral_cooc(Y: RandomVariable, q: CoocQuery, subject: RandomObject) -> EIntegralResult:
    """Integral of Y against the co-occurrence measure of the subject with the query targets."""
    return e_integral(Y, cooc_measure(q, subject))


def cond_expectation_event(Y: RandomVariable, q: CoocQuery, subject: RandomObject) -> EIntegralResult:
    """
    Expectation of Y under the subject's law given the query conditions.

    Args:
        Y: Variable on the subject's codomain
        q: Query whose targets co-occur with the subject and whose conditions are conditioned on
        subject: Random object carrying Y

    Returns:
        Result flagged and zero when the conditions are null
    """
    if Y.space != subject.codomain:
        raise SpaceMismatch(f"Variable is not on the codomain of {subject.display_name}")
    conditional = cond_cooc_measure(q, subject)
    if conditional.null_condition:
        return EIntegralResult(ZERO, True, conditional.measure)
    return e_integral(Y, conditional.measure)


def kernel_expectation(Y: RandomVariable, k: Kernel) -> tuple[Fraction, ...]:
    """Row-wise integral of Y, zero off the kernel support."""
    if Y.space != k.target:
        raise SpaceMismatch("Variable is not on the kernel target")
    return tuple(
        sum((y * w for y, w in zip(Y.values, row) if w), ZERO) if x in k.support else ZERO
        for x, row in enumerate(k.rows)
    )


def cond_expectation_object(
    P: RationalMeasure,
    Y: RandomVariable,
    X1: RandomObject,
    X2: RandomObject,
    conds: Sequence[Constraint] = (),
    target_conds: Sequence[Constraint] = (),
) -> PointwiseConditional:
    """
    Conditional expectation of Y(X2) given X1, integrating against the conditional kernel.

    Args:
        P: Base probability
        Y: Variable on X2's codomain
        X1: Conditioning random object
        X2: Random object carrying Y
        conds: Constraints conditioned on
        target_conds: Constraints co-occurring with X2

    Returns:
        Pointwise conditional on X1's codomain against P[X1; conds]
    """
    if Y.space != X2.codomain:
        raise SpaceMismatch(f"Variable is not on the codomain of {X2.display_name}")
    k = cond_kernel(P, X1, X2, conds, target_conds)
    if k.null_condition or k.reference is None:
        reference = RationalMeasure.zero(X1.codomain)
        return PointwiseConditional(X1.codomain, (ZERO,) * X1.codomain.size, reference, X1.codomain_field, True)
    return PointwiseConditional(X1.codomain, kernel_expectation(Y, k), k.reference, X1.codomain_field)


def expectation_satisfies_defining_equation(
    pc: PointwiseConditional,
    P: RationalMeasure,
    Y: RandomVariable,
    X1: RandomObject,
    X2: RandomObject,
    conds: Sequence[Constraint] = (),
    target_conds: Sequence[Constraint] = (),
) -> bool:
    """Check sum over A of value * P[X1; conds] = integral of Y(X2) over {X1 in A}, conds and target_conds."""
    condition = pullback_all(P, conds)
    joint = condition & pullback_all(P, target_conds)
    ref = [ZERO] * X1.codomain.size
    for omega in condition.members:
        ref[X1.mapping[omega]] += P.weights[omega]
    for block in [*X1.codomain_field.blocks, frozenset(X1.codomain.outcomes)]:
        lhs = sum((pc.values[x] * ref[x] for x in block), ZERO)
        region = joint.members & X1.preimage(block).members
        rhs = sum((Y.values[X2.mapping[w]] * P.weights[w] for w in region), ZERO)
        if lhs != rhs:
            return False
    return True


def iterated_decompose(
    P: RationalMeasure,
    Y: RandomVariable,
    objects: Mapping[int, RandomObject],
    chain: Sequence[int],
    constraints: Mapping[int, Sequence[Constraint]] | None = None,
    cap: int = DEFAULT_PRODUCT_CAP,
) -> EIntegralResult:
    """
    Evaluate the integral of Y over the bundled objects by nesting conditional kernels.

    Step k of the chain integrates its object against the kernel given all
    earlier chain objects, with each step's constraints co-occurring at that
    step and conditioned on afterwards. Source points outside a kernel's
    support contribute zero.

    Args:
        P: Base probability
        Y: Variable on the product of the objects' codomains, ascending index order
        objects: Random objects keyed by index
        chain: Order in which indices are integrated, outermost first
        constraints: Optional constraints attached to each chain index
        cap: Largest allowed product size

    Returns:
        The nested value

    Raises:
        ChainMismatch: If the chain is shorter than 2 or does not cover every index once
        DecompositionMismatch: If the nested and direct values differ
    """
    constraints = constraints or {}
    chain = tuple(chain)
    if len(chain) < 2:
        raise ChainMismatch("A decomposition chain needs at least two steps")
    if sorted(chain) != sorted(objects) or len(set(chain)) != len(chain):
        raise ChainMismatch(f"Chain {list(chain)} must cover indices {sorted(objects)} exactly once")
    unknown = set(constraints) - set(chain)
    if unknown:
        raise ChainMismatch(f"Constraints attached to indices {sorted(unknown)} outside the chain")
    # Every step conditions on full point information
    objects = {i: coarsen(X, X.codomain.discrete) for i, X in objects.items()}
    index_set = IndexSet.of(chain)
    joint = bundle(objects, index_set, cap)
    if Y.space != joint.codomain:
        raise SpaceMismatch("Variable must live on the bundled product of the chain objects")
    all_constraints = [c for i in chain for c in constraints.get(i, ())]
    direct_measure = cooc_measure(CoocQuery(P, tuple(all_constraints)), joint)
    direct = e_integral(Y, direct_measure).value
    if direct_measure.total == 0:
        logger.debug("Null co-occurrence in iterated decomposition")
        return EIntegralResult(ZERO, True, direct_measure)

    # Per step: the bundled prefix object and its kernel to the next object
    steps: list[tuple[RandomObject | None, Kernel | RationalMeasure]] = []
    first = chain[0]
    steps.append((None, cooc_measure(CoocQuery(P, tuple(constraints.get(first, ()))), objects[first])))
    for k in range(1, len(chain)):
        prefix = IndexSet.of(chain[:k])
        source = bundle(objects, prefix, cap)
        conds = [c for i in chain[:k] for c in constraints.get(i, ())]
        kernel = cond_kernel(P, source, objects[chain[k]], conds, constraints.get(chain[k], ()))
        steps.append((source, kernel))

    def nest(k: int, assignment: dict[int, int]) -> Fraction:
        if k == len(chain):
            return Y.values[joint.codomain.index_of([assignment[i] for i in index_set])]
        source, law = steps[k]
        if source is None:
            weights = law.weights
        else:
            point = source.codomain.index_of([assignment[i] for i in IndexSet.of(chain[:k])])
            if point not in law.support:
                return ZERO
            weights = law.rows[point]
        total = ZERO
        for y, w in enumerate(weights):
            if w:
                total += w * nest(k + 1, {**assignment, chain[k]: y})
        return total

    nested = nest(0, {})
    if nested != direct:
        raise DecompositionMismatch(f"Nested value {nested} differs from direct value {direct}")
    return EIntegralResult(nested, False, direct_measure)


@dataclass(frozen=True)
class StabilizingSequence:
    """A sequence of random variables equal to its limit from the end of the prefix on."""

    prefix: tuple[RandomVariable, ...]
    limit: RandomVariable

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        if any(term.space != self.limit.space for term in self.prefix):
            raise SpaceMismatch("Sequence terms live on different spaces")

    @classmethod
    def truncations(cls, Y: RandomVariable, steps: int | None = None) -> StabilizingSequence:
        """
        Increasing truncations of Y.

        Y_n = min(Y, n) for n = 1, 2, ... until it equals Y, or with `steps`
        the levels top * n / steps below the maximum top of Y.
        """
        top = max(Y.values)
        if steps is None:
            return cls(tuple(Y.minimum(n) for n in range(1, max(math.ceil(top), 1))), Y)
        if top <= 0:
            return cls((), Y)
        return cls(tuple(Y.minimum(top * n / steps) for n in range(1, steps)), Y)

    @classmethod
    def descending(cls, Y: RandomVariable, steps: int) -> StabilizingSequence:
        """Y_n = Y + (steps - n) for n < steps, decreasing to Y."""
        return cls(tuple(Y + (steps - n) for n in range(steps)), Y)

    @property
    def stabilization_index(self) -> int:
        return len(self.prefix)

    def term(self, n: int) -> RandomVariable:
        return self.prefix[n] if n < len(self.prefix) else self.limit

    def terms(self) -> tuple[RandomVariable, ...]:
        """Prefix followed by the limit once."""
        return (*self.prefix, self.limit)

    def tail_inf(self, n: int) -> RandomVariable:
        tail = self.terms()[min(n, len(self.prefix)) :]
        return RandomVariable(self.limit.space, tuple(min(t.values[x] for t in tail) for x in self.limit.space.outcomes))

    def tail_sup(self, n: int) -> RandomVariable:
        tail = self.terms()[min(n, len(self.prefix)) :]
        return RandomVariable(self.limit.space, tuple(max(t.values[x] for t in tail) for x in self.limit.space.outcomes))

    def is_increasing(self) -> bool:
        terms = self.terms()
        return all(a.dominated_by(b) for a, b in zip(terms, terms[1:]))

    def is_decreasing(self) -> bool:
        terms = self.terms()
        return all(b.dominated_by(a) for a, b in zip(terms, terms[1:]))


@dataclass(frozen=True)
class PiecewiseLinear:
    """Continuous piecewise-linear function; value `offset` at the first breakpoint."""

    breakpoints: tuple[Fraction, ...]
    slopes: tuple[Fraction, ...]
    offset: Fraction = ZERO

    def __post_init__(self):
        breakpoints = tuple(Fraction(b) for b in self.breakpoints)
        slopes = tuple(Fraction(s) for s in self.slopes)
        if len(slopes) != len(breakpoints) + 1:
            raise NotConvex("Need exactly one more slope than breakpoints")
        if any(a >= b for a, b in zip(breakpoints, breakpoints[1:])):
            raise NotConvex("Breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", breakpoints)
        object.__setattr__(self, "slopes", slopes)
        object.__setattr__(self, "offset", Fraction(self.offset))

    @property
    def is_convex(self) -> bool:
        return all(a <= b for a, b in zip(self.slopes, self.slopes[1:]))

    def require_convex(self) -> None:
        if not self.is_convex:
            raise NotConvex(f"Slopes {[str(s) for s in self.slopes]} decrease")

    def __call__(self, x: Fraction) -> Fraction:
        x = Fraction(x)
        if not self.breakpoints:
            return self.offset + self.slopes[0] * x
        anchor = self.breakpoints[0]
        if x <= anchor:
            return self.offset + self.slopes[0] * (x - anchor)
        value = self.offset
        for k, start in enumerate(self.breakpoints):
            end = self.breakpoints[k + 1] if k + 1 < len(self.breakpoints) else None
            if end is None or x <= end:
                return value + self.slopes[k + 1] * (x - start)
            value += self.slopes[k + 1] * (end - start)
        return value


def _float_leq(lhs: float, rhs: float) -> bool:
    return lhs <= rhs * (1 + FLOAT_RELATIVE_TOLERANCE) + FLOAT_RELATIVE_TOLERANCE


def _ess_sup(Y: RandomVariable, m: RationalMeasure) -> Fraction:
    """Largest |Y| on the support of m, 0 on a null measure."""
    return max((abs(Y.values[x]) for x in m.support), default=ZERO)


def _moment(Y: RandomVariable, m: RationalMeasure, p: float) -> float:
    return float(sum(float(abs(Y.values[x])) ** p * float(m.weights[x]) for x in m.support))


def _is_infinite(p) -> bool:
    return isinstance(p, float) and math.isinf(p)


def holder_check(Y: RandomVariable, Z: RandomVariable, m: RationalMeasure, p, q) -> bool:
    """
    Check that the integral of |YZ| is at most the product of the p and q norms.

    Exact for (1, inf), (inf, 1) and (2, 2); other conjugate pairs are checked
    in floating point with a relative tolerance.

    Raises:
        InvalidExponent: If p and q are not conjugate exponents in [1, inf]
    """
    if Y.space != m.space or Z.space != m.space:
        raise SpaceMismatch("Variables and measure live on different spaces")
    lhs = e_integral(abs(Y * Z), m).value
    if _is_infinite(p) or _is_infinite(q):
        if not ((_is_infinite(p) and q == 1) or (_is_infinite(q) and p == 1)):
            raise InvalidExponent(f"Exponents {p}, {q} are not conjugate")
        bounded, integrable = (Y, Z) if _is_infinite(p) else (Z, Y)
        return lhs <= _ess_sup(bounded, m) * e_integral(abs(integrable), m).value
    p, q = Fraction(p), Fraction(q)
    if p < 1 or q < 1 or 1 / p + 1 / q != 1:
        raise InvalidExponent(f"Exponents {p}, {q} are not conjugate")
    if p == 2:
        return lhs * lhs <= e_integral(Y * Y, m).value * e_integral(Z * Z, m).value
    rhs = _moment(Y, m, float(p)) ** (1 / float(p)) * _moment(Z, m, float(q)) ** (1 / float(q))
    return _float_leq(float(lhs), rhs)


def minkowski_check(Y: RandomVariable, Z: RandomVariable, m: RationalMeasure, p) -> bool:
    """
    Check the triangle inequality of the p-norm.

    Exact for p in {1, 2, inf}; other exponents are checked in floating point.

    Raises:
        InvalidExponent: If p < 1
    """
    if Y.space != m.space or Z.space != m.space:
        raise SpaceMismatch("Variables and measure live on different spaces")
    if _is_infinite(p):
        return _ess_sup(Y + Z, m) <= _ess_sup(Y, m) + _ess_sup(Z, m)
    p = Fraction(p)
    if p < 1:
        raise InvalidExponent(f"Minkowski needs p >= 1, got {p}")
    if p == 1:
        return e_integral(abs(Y + Z), m).value <= e_integral(abs(Y), m).value + e_integral(abs(Z), m).value
    if p == 2:
        a = e_integral((Y + Z) * (Y + Z), m).value
        b = e_integral(Y * Y, m).value
        c = e_integral(Z * Z, m).value
        excess = a - b - c
        return excess <= 0 or excess * excess <= 4 * b * c
    fp = float(p)
    lhs = _moment(Y + Z, m, fp) ** (1 / fp)
    rhs = _moment(Y, m, fp) ** (1 / fp) + _moment(Z, m, fp) ** (1 / fp)
    return _float_leq(lhs, rhs)


def jensen_check(phi: PiecewiseLinear, Y: RandomVariable, m: RationalMeasure) -> bool:
    """
    Check phi(E Y) <= E phi(Y) for a probability measure m.

    Raises:
        NotConvex: If phi is not convex
        InvalidMeasure: If m does not have total mass one
    """
    phi.require_convex()
    if m.total != 1:
        raise InvalidMeasure(f"Jensen needs a probability measure, total mass is {m.total}")
    return phi(e_integral(Y, m).value) <= e_integral(Y.apply(phi), m).value
