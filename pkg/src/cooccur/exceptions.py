"""Custom exceptions for cooccur computations."""

from typing import Any


class CooccurError(Exception):
    """Base exception for all cooccur errors."""

    exit_code: int = 1


class ModelFileError(CooccurError):
    """Raised when a model file cannot be read, parsed or resolved."""

    exit_code = 2


class DomainError(CooccurError):
    """Raised when an operation receives arguments outside its domain."""

    exit_code = 3


class SpaceMismatch(DomainError):
    """Raised when two values live on different spaces."""

    pass


class DomainMismatch(DomainError):
    """Raised when random objects do not share a domain."""

    pass


class ProductTooLarge(DomainError):
    """Raised when a product space would exceed the configured cap."""

    pass


class EmptyIndexSet(DomainError):
    """Raised when an operation needs a nonempty index set."""

    pass


class ZeroSize(DomainError):
    """Raised when a space is declared with no outcomes."""

    pass


class DuplicateLabel(DomainError):
    """Raised when outcome labels repeat."""

    pass


class InvalidMeasure(DomainError):
    """Raised when measure weights are negative, misplaced or do not sum to one."""

    pass


class InvalidPartition(DomainError):
    """Raised when blocks do not partition the space."""

    pass


class NotMeasurable(DomainError):
    """Raised when a preimage or event is not a union of field blocks."""

    pass


class CoordinateMismatch(DomainError):
    """Raised when a kernel target has no coordinate for the requested index."""

    pass


class IndexNotSubset(DomainError):
    """Raised when an index set is not contained in another."""

    pass


class IndexOverlap(DomainError):
    """Raised when index sets that must be disjoint intersect."""

    pass


class IndexMismatch(DomainError):
    """Raised when index sets that must agree differ."""

    pass


class BadPartition(DomainError):
    """Raised when index blocks do not partition an index set."""

    pass


class ChainMismatch(DomainError):
    """Raised when a conditioning chain does not cover the target indices exactly once."""

    pass


class UnknownIndex(DomainError):
    """Raised when an index is not part of a model."""

    pass


class BadValue(DomainError):
    """Raised when an outcome is not valid in its space."""

    pass


class NotConvex(DomainError):
    """Raised when piecewise-linear slopes decrease."""

    pass


class InvalidExponent(DomainError):
    """Raised when inequality exponents are out of range or not conjugate."""

    pass


class MalformedQuery(DomainError):
    """Raised when a query has a shape the operation does not accept."""

    pass


class WitnessError(CooccurError):
    """Raised when a semantic condition fails at an identifiable point."""

    exit_code = 4

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class NotAbsolutelyContinuous(WitnessError):
    """Raised when a law charges a point the base measure does not."""

    pass


class NotFactorizable(WitnessError):
    """Raised when a density is not the product of its block marginals."""

    pass


class NoSolution(WitnessError):
    """Raised when a structural model has no solution at an exogenous point."""

    pass


class NonUniqueSolution(WitnessError):
    """Raised when a structural model has several solutions at an exogenous point."""

    pass


class DecompositionMismatch(CooccurError):
    """Raised when a nested evaluation disagrees with the direct one."""

    pass
