"""Pydantic models for configuration and model-file validation."""

from typing import Literal

from pydantic import BaseModel, Field, field_validator

from .constants import (
    CHECK_NAMES,
    DEFAULT_CASES,
    DEFAULT_PRODUCT_CAP,
    DEFAULT_SEED,
    MAX_DENOMINATOR,
    MAX_OBJECTS,
    MAX_SEQUENCE_LENGTH,
    MAX_SPACE_SIZE,
    MEASURE_KINDS,
    MIN_OBJECTS,
    MIN_SPACE_SIZE,
)
from .rationals import is_rational_string

RationalText = str | int
OutcomeRef = int | str


def _validate_rationals(values: list[RationalText]) -> list[RationalText]:
    for value in values:
        if isinstance(value, bool) or (isinstance(value, str) and not is_rational_string(value)):
            raise ValueError(f"{value!r} is not an exact rational, use 'p/q' or an integer")
    return values


def _validate_index_keys(mapping: dict) -> dict:
    for key in mapping:
        if not str(key).isdigit():
            raise ValueError(f"Index key {key!r} is not a natural number")
    return mapping


class EngineConfig(BaseModel):
    """Configuration shared by every engine operation."""

    product_cap: int = Field(default=DEFAULT_PRODUCT_CAP, ge=1, description="Largest allowed product space size")

    class Config:
        """Pydantic model configuration."""

        validate_assignment = True


class CheckConfig(BaseModel):
    """Configuration for a property check run."""

    cases: int = Field(default=DEFAULT_CASES, ge=0, description="Random models per check")
    seed: int = Field(default=DEFAULT_SEED, ge=0, description="Seed of the random model generator")
    checks: list[str] | None = Field(default=None, description="Checks to run, all when empty")
    max_space_size: int = Field(default=MAX_SPACE_SIZE, ge=MIN_SPACE_SIZE, description="Largest random space")
    max_objects: int = Field(default=MAX_OBJECTS, ge=MIN_OBJECTS, description="Most random objects per model")
    max_denominator: int = Field(default=MAX_DENOMINATOR, ge=1, description="Largest weight denominator")
    sequence_length: int = Field(
        default=MAX_SEQUENCE_LENGTH, ge=1, description="Longest prefix of a stabilizing sequence"
    )

    @field_validator("checks")
    @classmethod
    def validate_checks(cls, v: list[str] | None) -> list[str] | None:
        """Reject unknown check names."""
        if v is None:
            return v
        unknown = [name for name in v if name not in CHECK_NAMES]
        if unknown:
            raise ValueError(f"Unknown checks: {', '.join(unknown)}")
        return v

    @property
    def selected(self) -> tuple[str, ...]:
        """Selected names in registry order."""
        if not self.checks:
            return CHECK_NAMES
        return tuple(name for name in CHECK_NAMES if name in self.checks)

    class Config:
        """Pydantic model configuration."""

        validate_assignment = True


class SpaceSpec(BaseModel):
    """A finite space declaration."""

    size: int = Field(ge=1, description="Number of outcomes")
    labels: list[str] | None = Field(None, description="Distinct outcome labels")

    @field_validator("labels")
    @classmethod
    def validate_labels(cls, v: list[str] | None) -> list[str] | None:
        """Validate labels are distinct."""
        if v is not None and len(set(v)) != len(v):
            raise ValueError("Labels must be distinct")
        return v

    class Config:
        """Pydantic model configuration."""

        extra = "forbid"


class PartitionSpec(BaseModel):
    """A partition of a declared space, blocks given as outcome lists."""

    space: str = Field(description="Space id")
    blocks: list[list[OutcomeRef]] = Field(description="Blocks of outcome indices or labels")

    class Config:
        """Pydantic model configuration."""

        extra = "forbid"


class MeasureSpec(BaseModel):
    """A measure given by exact weights."""

    space: str | None = Field(None, description="Space id, implied inside an SCM")
    weights: list[RationalText] = Field(description="One exact weight per outcome")
    kind: Literal["probability", "finite", "base"] = Field(default="finite", description="Measure kind")

    @field_validator("weights")
    @classmethod
    def validate_weights(cls, v: list[RationalText]) -> list[RationalText]:
        """Validate weights are exact rationals."""
        return _validate_rationals(v)

    @field_validator("kind")
    @classmethod
    def validate_kind(cls, v: str) -> str:
        """Validate measure kind."""
        if v not in MEASURE_KINDS:
            raise ValueError(f"Kind must be one of {MEASURE_KINDS}")
        return v

    class Config:
        """Pydantic model configuration."""

        extra = "forbid"


class ObjectSpec(BaseModel):
    """A random object between declared spaces."""

    domain: str = Field(description="Domain space id")
    codomain: str = Field(description="Codomain space id")
    map: list[OutcomeRef] = Field(description="Image of every domain outcome, index or label")
    domain_field: str | None = Field(None, description="Partition id of the domain field")
    codomain_field: str | None = Field(None, description="Partition id of the codomain field")

    class Config:
        """Pydantic model configuration."""

        extra = "forbid"


class ConstraintSpec(BaseModel):
    """The constraint object in event."""

    object: str = Field(description="Object id")
    event: list[OutcomeRef] = Field(description="Codomain outcomes, index or label")

    class Config:
        """Pydantic model configuration."""

        extra = "forbid"


class QuerySpec(BaseModel):
    """Targets and conditions of a co-occurrence query."""

    targets: list[ConstraintSpec] = Field(default_factory=list)
    conditions: list[ConstraintSpec] = Field(default_factory=list)

    class Config:
        """Pydantic model configuration."""

        extra = "forbid"


class VariableSpec(BaseModel):
    """A random variable on a declared space."""

    space: str = Field(description="Space id")
    values: list[RationalText] = Field(description="One exact value per outcome")

    @field_validator("values")
    @classmethod
    def validate_values(cls, v: list[RationalText]) -> list[RationalText]:
        """Validate values are exact rationals."""
        return _validate_rationals(v)

    class Config:
        """Pydantic model configuration."""

        extra = "forbid"


class BaseFamilySpec(BaseModel):
    """Base measure ids keyed by index."""

    measures: dict[str, str] = Field(description="Index to measure id")

    @field_validator("measures")
    @classmethod
    def validate_measures(cls, v: dict[str, str]) -> dict[str, str]:
        """Validate keys are indices."""
        return _validate_index_keys(v)


class CiSideSpec(BaseModel):
    """One side of an independence statement."""

    subject: str | None = Field(None, description="Subject object id")
    constraints: list[ConstraintSpec] = Field(default_factory=list)

    class Config:
        """Pydantic model configuration."""

        extra = "forbid"


class CiSpecModel(BaseModel):
    """A conditional independence statement."""

    side_a: CiSideSpec
    side_b: CiSideSpec
    given: str | None = Field(None, description="Given object id")
    given_conditions: list[ConstraintSpec] = Field(default_factory=list)

    class Config:
        """Pydantic model configuration."""

        extra = "forbid"


class MechanismSpec(BaseModel):
    """Mechanism table, one output tuple per (endogenous, exogenous) point."""

    table: list[list[int]]


class ScmSpec(BaseModel):
    """A finite structural causal model."""

    endo: dict[str, SpaceSpec] = Field(default_factory=dict, description="Endogenous spaces by index")
    exo: dict[str, SpaceSpec] = Field(description="Exogenous spaces by index")
    exo_law: MeasureSpec = Field(description="Law on the exogenous product")
    mechanism: MechanismSpec

    @field_validator("endo", "exo")
    @classmethod
    def validate_indices(cls, v: dict[str, SpaceSpec]) -> dict[str, SpaceSpec]:
        """Validate keys are indices."""
        return _validate_index_keys(v)

    class Config:
        """Pydantic model configuration."""

        extra = "forbid"


class ModelDocument(BaseModel):
    """Root of a model file."""

    spaces: dict[str, SpaceSpec] = Field(default_factory=dict)
    partitions: dict[str, PartitionSpec] = Field(default_factory=dict)
    measures: dict[str, MeasureSpec] = Field(default_factory=dict)
    law: str | None = Field(None, description="Measure id of the base probability")
    objects: dict[str, ObjectSpec] = Field(default_factory=dict)
    variables: dict[str, VariableSpec] = Field(default_factory=dict)
    bases: dict[str, BaseFamilySpec] = Field(default_factory=dict)
    queries: dict[str, QuerySpec] = Field(default_factory=dict)
    ci: dict[str, CiSpecModel] = Field(default_factory=dict)
    scms: dict[str, ScmSpec] = Field(default_factory=dict)

    class Config:
        """Pydantic model configuration."""

        extra = "forbid"
