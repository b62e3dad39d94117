"""Finite structural causal models: solutions, observational laws and interventions."""

from __future__ import annotations

from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property

from loguru import logger

from .constants import DEFAULT_PRODUCT_CAP
from .exceptions import (
    BadValue,
    IndexOverlap,
    InvalidMeasure,
    NonUniqueSolution,
    NoSolution,
    SpaceMismatch,
    UnknownIndex,
)
from .space import (
    EngineModel,
    FiniteSpace,
    IndexSet,
    MeasureKind,
    ProductSpace,
    RandomObject,
    RationalMeasure,
    product_space,
    projection,
)

Mechanism = Callable[[Mapping[int, int], Mapping[int, int]], Mapping[int, int]]


@dataclass(frozen=True)
class Scm:
    """
    A structural causal model over finite spaces.

    The mechanism is a table with one endogenous output tuple per
    (endogenous point, exogenous point) pair, pairs in lexicographic order
    with the endogenous coordinates first.
    """

    endo_indices: IndexSet
    exo_indices: IndexSet
    endo_spaces: tuple[FiniteSpace, ...]
    exo_spaces: tuple[FiniteSpace, ...]
    exo_law: RationalMeasure
    mechanism: tuple[tuple[int, ...], ...]
    cap: int = field(default=DEFAULT_PRODUCT_CAP, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "endo_spaces", tuple(self.endo_spaces))
        object.__setattr__(self, "exo_spaces", tuple(self.exo_spaces))
        object.__setattr__(self, "mechanism", tuple(tuple(out) for out in self.mechanism))
        if not self.endo_indices.isdisjoint(self.exo_indices):
            raise IndexOverlap("Endogenous and exogenous indices must be disjoint")
        if len(self.endo_spaces) != len(self.endo_indices) or len(self.exo_spaces) != len(self.exo_indices):
            raise BadValue("Need exactly one space per index")
        if self.exo_law.space != self.exo_space:
            raise SpaceMismatch("Exogenous law must live on the exogenous product space")
        if self.exo_law.kind is not MeasureKind.PROBABILITY:
            raise InvalidMeasure("Exogenous law must be a probability measure")
        expected = self.endo_space.size * self.exo_space.size
        if len(self.mechanism) != expected:
            raise BadValue(f"Mechanism table needs {expected} entries, got {len(self.mechanism)}")
        for entry, out in enumerate(self.mechanism):
            if len(out) != len(self.endo_spaces) or any(
                not isinstance(v, int) or not 0 <= v < s.size for v, s in zip(out, self.endo_spaces)
            ):
                raise BadValue(f"Mechanism entry {entry} has invalid output {out}")

    @cached_property
    def endo_space(self) -> ProductSpace:
        return product_space(self.endo_indices, self.endo_spaces, self.cap)

    @cached_property
    def exo_space(self) -> ProductSpace:
        return product_space(self.exo_indices, self.exo_spaces, self.cap)

    def output(self, x: int, e: int) -> tuple[int, ...]:
        """f(x, e) as an endogenous coordinate tuple."""
        return self.mechanism[x * self.exo_space.size + e]

    @cached_property
    def _output_index(self) -> tuple[int, ...]:
        return tuple(self.endo_space.index_of(out) for out in self.mechanism)

    def output_index(self, x: int, e: int) -> int:
        return self._output_index[x * self.exo_space.size + e]

    @classmethod
    def from_function(
        cls,
        endo: Mapping[int, FiniteSpace],
        exo: Mapping[int, FiniteSpace],
        exo_law: RationalMeasure,
        fn: Mechanism,
        cap: int = DEFAULT_PRODUCT_CAP,
    ) -> Scm:
        """
        Tabulate a mechanism given as a function of index-keyed assignments.

        Args:
            endo: Endogenous spaces keyed by index
            exo: Exogenous spaces keyed by index
            exo_law: Law on the exogenous product
            fn: Maps (endogenous assignment, exogenous assignment) to an endogenous assignment
            cap: Largest allowed product size
        """
        endo_indices, exo_indices = IndexSet.of(endo), IndexSet.of(exo)
        endo_space = product_space(endo_indices, [endo[i] for i in endo_indices], cap)
        exo_space = product_space(exo_indices, [exo[j] for j in exo_indices], cap)
        table = []
        for x in endo_space.points:
            x_assign = dict(zip(endo_indices, x))
            for e in exo_space.points:
                out = fn(x_assign, dict(zip(exo_indices, e)))
                table.append(tuple(out[i] for i in endo_indices))
        return cls(
            endo_indices,
            exo_indices,
            tuple(endo[i] for i in endo_indices),
            tuple(exo[j] for j in exo_indices),
            exo_law,
            tuple(table),
            cap,
        )


@dataclass(frozen=True)
class SolutionMap:
    """Endogenous fixed points for every exogenous point of positive mass."""

    entries: tuple[tuple[int, tuple[int, ...]], ...]

    def __getitem__(self, e: int) -> tuple[int, ...]:
        for point, solutions in self.entries:
            if point == e:
                return solutions
        raise KeyError(e)

    def items(self) -> tuple[tuple[int, tuple[int, ...]], ...]:
        return self.entries

    def __len__(self) -> int:
        return len(self.entries)


def solve(m: Scm) -> SolutionMap:
    """
    Enumerate the fixed points x = f(x, e) for each exogenous point of positive mass.

    Zero-mass exogenous points are skipped.
    """
    entries = []
    for e in sorted(m.exo_law.support):
        solutions = tuple(x for x in m.endo_space.outcomes if m.output_index(x, e) == x)
        entries.append((e, solutions))
    logger.debug("Solved SCM over {} exogenous points", len(entries))
    return SolutionMap(tuple(entries))


def _unique_solution(m: Scm, e: int, solutions: Sequence[int]) -> int:
    if not solutions:
        raise NoSolution(
            f"No endogenous solution at exogenous point {m.exo_space.label(e)}",
            witness=m.exo_space.point(e),
        )
    if len(solutions) > 1:
        labels = [m.endo_space.label(x) for x in solutions]
        raise NonUniqueSolution(
            f"Solutions {labels} at exogenous point {m.exo_space.label(e)}",
            witness=(m.exo_space.point(e), tuple(m.endo_space.point(x) for x in solutions)),
        )
    return solutions[0]


def observational_distribution(m: Scm) -> RationalMeasure:
    """
    Law of the unique solution, the push-forward of the exogenous law.

    Raises:
        NoSolution: With the exogenous witness when some point has no solution
        NonUniqueSolution: With the exogenous witness and solutions when some point has several
    """
    weights = [Fraction(0)] * m.endo_space.size
    for e, solutions in solve(m).items():
        weights[_unique_solution(m, e, solutions)] += m.exo_law.weights[e]
    return RationalMeasure(m.endo_space, tuple(weights), MeasureKind.PROBABILITY)


def brute_force_observational(m: Scm) -> RationalMeasure:
    """Observational law by checking every (x, e) pair against the raw mechanism table."""
    weights = [Fraction(0)] * m.endo_space.size
    points = m.endo_space.points
    for e, mass in enumerate(m.exo_law.weights):
        if mass == 0:
            continue
        found = [x for x, point in enumerate(points) if m.output(x, e) == point]
        weights[_unique_solution(m, e, found)] += mass
    return RationalMeasure(m.endo_space, tuple(weights), MeasureKind.PROBABILITY)


def intervene(m: Scm, index: int, value: int | str) -> Scm:
    """
    Replace the structural equation of one endogenous coordinate by a constant.

    Args:
        m: Model
        index: Endogenous index to intervene on
        value: Outcome of that coordinate, index or label

    Returns:
        New model; m is left untouched

    Raises:
        UnknownIndex: If index is not endogenous
        BadValue: If value is not an outcome of that coordinate
    """
    if index not in m.endo_indices:
        raise UnknownIndex(f"Index {index} is not endogenous")
    position = m.endo_indices.position(index)
    outcome = m.endo_spaces[position].outcome(value)
    mechanism = tuple(out[:position] + (outcome,) + out[position + 1 :] for out in m.mechanism)
    logger.debug("do({} := {})", index, outcome)
    return replace(m, mechanism=mechanism)


def as_engine_model(m: Scm) -> EngineModel:
    """
    Expose the model to the query engine.

    The base space is the exogenous product with the exogenous law. Each
    endogenous index becomes the object e -> x_i(e) and each exogenous index
    its coordinate projection, keyed by the index as a string. Zero-mass
    exogenous points map to their first solution, or to outcome 0.
    """
    observational_distribution(m)
    solutions = dict(solve(m).items())
    chosen = []
    for e in m.exo_space.outcomes:
        found = solutions.get(e) or tuple(
            x for x in m.endo_space.outcomes if m.output_index(x, e) == x
        )
        chosen.append(found[0] if found else 0)
    objects: dict[str, RandomObject] = {}
    for position, i in enumerate(m.endo_indices):
        mapping = tuple(m.endo_space.point(x)[position] for x in chosen)
        objects[str(i)] = RandomObject(m.exo_space, m.endo_spaces[position], mapping, name=f"X{i}")
    for j in m.exo_indices:
        objects[str(j)] = replace(projection(m.exo_space, j), name=f"E{j}")
    return EngineModel(m.exo_law, objects)
