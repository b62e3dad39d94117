"""Loading and resolving JSON model files."""

import json
from collections.abc import Mapping
from pathlib import Path
from typing import Any, Optional

from loguru import logger
from pydantic import ValidationError

from .codec import measure_from_dict, variable_from_dict
from .conditioning import CiSide, CiSpec
from .cooccurrence import Constraint, CoocQuery
from .density import BaseFamily
from .eintegral import RandomVariable
from .exceptions import CooccurError, ModelFileError
from .models import (
    CiSpecModel,
    ConstraintSpec,
    EngineConfig,
    MeasureSpec,
    ModelDocument,
    QuerySpec,
    ScmSpec,
)
from .rationals import parse_rational
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
    product_space,
)


class ModelFile:
    """A model file resolved into engine values."""

    def __init__(self, config: Optional[EngineConfig] = None):
        """
        Initialize an empty model.

        Args:
            config: Engine configuration. Uses defaults if not provided.
        """
        self.config = config or EngineConfig()
        self.document: Optional[ModelDocument] = None
        self.spaces: dict[str, FiniteSpace] = {}
        self.partitions: dict[str, Partition] = {}
        self.measures: dict[str, RationalMeasure] = {}
        self.objects: dict[str, RandomObject] = {}
        self.variables: dict[str, RandomVariable] = {}
        self.scms: dict[str, Scm] = {}
        self.law: Optional[RationalMeasure] = None

    @classmethod
    def from_path(cls, path: Path, config: Optional[EngineConfig] = None) -> "ModelFile":
        model = cls(config)
        model.load(path)
        return model

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], config: Optional[EngineConfig] = None) -> "ModelFile":
        model = cls(config)
        model.parse(data)
        return model

    def load(self, path: Path) -> None:
        """
        Read and resolve a UTF-8 JSON model file.

        Args:
            path: Model file path

        Raises:
            ModelFileError: If the file cannot be read, parsed or resolved
        """
        try:
            logger.info(f"Loading model from {path}")
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ModelFileError(f"Failed to read model file: {e}") from e
        self.parse(data)

    def parse(self, data: Mapping[str, Any]) -> None:
        """
        Validate a model document and resolve every declaration.

        Raises:
            ModelFileError: On schema violations, unresolved ids or invalid values
        """
        try:
            self.document = ModelDocument.model_validate(data)
        except ValidationError as e:
            raise ModelFileError(f"Invalid model file: {e}") from e
        self._resolve_spaces()
        self._resolve_partitions()
        self._resolve_measures()
        self._resolve_law()
        self._resolve_objects()
        self._resolve_variables()
        self._resolve_scms()
        logger.info(
            f"Resolved {len(self.spaces)} spaces, {len(self.measures)} measures, "
            f"{len(self.objects)} objects and {len(self.scms)} SCMs"
        )

    def _lookup(self, table: Mapping[str, Any], ident: str, what: str) -> Any:
        if ident not in table:
            raise ModelFileError(f"Unknown {what} id {ident!r}")
        return table[ident]

    def _resolve_spaces(self) -> None:
        for ident, spec in self.document.spaces.items():
            try:
                self.spaces[ident] = FiniteSpace(spec.size, tuple(spec.labels) if spec.labels else None, ident)
            except CooccurError as e:
                raise ModelFileError(f"Space {ident!r}: {e}") from e

    def _resolve_partitions(self) -> None:
        for ident, spec in self.document.partitions.items():
            space = self._lookup(self.spaces, spec.space, "space")
            try:
                blocks = tuple(frozenset(space.outcome(ref) for ref in block) for block in spec.blocks)
                self.partitions[ident] = Partition(space, blocks)
            except CooccurError as e:
                raise ModelFileError(f"Partition {ident!r}: {e}") from e

    def _measure(self, ident: str, spec: MeasureSpec, space: FiniteSpace, kind: MeasureKind) -> RationalMeasure:
        try:
            weights = tuple(parse_rational(w) for w in spec.weights)
            return RationalMeasure(space, weights, kind)
        except (CooccurError, ValueError) as e:
            raise ModelFileError(f"Measure {ident!r}: {e}") from e

    def _resolve_measures(self) -> None:
        for ident, spec in self.document.measures.items():
            if spec.space is None:
                raise ModelFileError(f"Measure {ident!r} does not name its space")
            try:
                self.measures[ident] = measure_from_dict(spec.model_dump(), self.spaces)
            except CooccurError as e:
                raise ModelFileError(f"Measure {ident!r}: {e}") from e

    def _resolve_law(self) -> None:
        if self.document.law is not None:
            law = self._lookup(self.measures, self.document.law, "measure")
            if law.kind is not MeasureKind.PROBABILITY:
                raise ModelFileError(f"Law {self.document.law!r} is not a probability measure")
            self.law = law
            return
        candidates = [ident for ident, m in self.measures.items() if m.kind is MeasureKind.PROBABILITY]
        if len(candidates) > 1:
            raise ModelFileError(f"Several probability measures {candidates}, set 'law' to pick one")
        if candidates:
            self.law = self.measures[candidates[0]]

    def _resolve_objects(self) -> None:
        for ident, spec in self.document.objects.items():
            domain = self._lookup(self.spaces, spec.domain, "space")
            codomain = self._lookup(self.spaces, spec.codomain, "space")
            domain_field = self._lookup(self.partitions, spec.domain_field, "partition") if spec.domain_field else None
            codomain_field = (
                self._lookup(self.partitions, spec.codomain_field, "partition") if spec.codomain_field else None
            )
            try:
                mapping = tuple(codomain.outcome(ref) for ref in spec.map)
                self.objects[ident] = RandomObject(domain, codomain, mapping, domain_field, codomain_field, ident)
            except CooccurError as e:
                raise ModelFileError(f"Object {ident!r}: {e}") from e

    def _resolve_variables(self) -> None:
        for ident, spec in self.document.variables.items():
            try:
                self.variables[ident] = variable_from_dict(spec.model_dump(), self.spaces)
            except CooccurError as e:
                raise ModelFileError(f"Variable {ident!r}: {e}") from e

    def _scm(self, ident: str, spec: ScmSpec) -> Scm:
        try:
            endo = {int(i): FiniteSpace(s.size, tuple(s.labels) if s.labels else None, f"X{i}") for i, s in spec.endo.items()}
            exo = {int(j): FiniteSpace(s.size, tuple(s.labels) if s.labels else None, f"E{j}") for j, s in spec.exo.items()}
            exo_indices = IndexSet.of(exo)
            exo_space = product_space(exo_indices, [exo[j] for j in exo_indices], self.config.product_cap)
        except CooccurError as e:
            raise ModelFileError(f"SCM {ident!r}: {e}") from e
        # An exogenous law without an explicit kind is a probability
        explicit = "kind" in spec.exo_law.model_fields_set
        kind = MeasureKind(spec.exo_law.kind) if explicit else MeasureKind.PROBABILITY
        exo_law = self._measure(f"{ident}.exo_law", spec.exo_law, exo_space, kind)
        endo_indices = IndexSet.of(endo)
        try:
            return Scm(
                endo_indices,
                exo_indices,
                tuple(endo[i] for i in endo_indices),
                tuple(exo[j] for j in exo_indices),
                exo_law,
                tuple(tuple(out) for out in spec.mechanism.table),
                self.config.product_cap,
            )
        except CooccurError as e:
            raise ModelFileError(f"SCM {ident!r}: {e}") from e

    def _resolve_scms(self) -> None:
        for ident, spec in self.document.scms.items():
            self.scms[ident] = self._scm(ident, spec)

    @property
    def engine_model(self) -> EngineModel:
        """
        The base law with every object defined on its space.

        Raises:
            ModelFileError: If the file declares no base probability measure
        """
        if self.law is None:
            raise ModelFileError("Model has no base probability measure")
        objects = {ident: X for ident, X in self.objects.items() if X.domain == self.law.space}
        return EngineModel(self.law, objects)

    def get_object(self, ident: str) -> RandomObject:
        return self._lookup(self.objects, ident, "object")

    def get_variable(self, ident: str) -> RandomVariable:
        return self._lookup(self.variables, ident, "variable")

    def get_scm(self, ident: str) -> Scm:
        return self._lookup(self.scms, ident, "SCM")

    def base_family(self, ident: str) -> BaseFamily:
        spec = self._lookup(self.document.bases, ident, "base family")
        return BaseFamily({int(i): self._lookup(self.measures, m, "measure") for i, m in spec.measures.items()})

    def constraint(self, spec: ConstraintSpec) -> Constraint:
        """Build a constraint; unknown ids are load errors, bad events are domain errors."""
        obj = self.get_object(spec.object)
        return Constraint(obj, Event.of(obj.codomain, spec.event))

    def _validated(self, model: type, data: Any, what: str) -> Any:
        if isinstance(data, model):
            return data
        try:
            return model.model_validate(data)
        except ValidationError as e:
            raise ModelFileError(f"Invalid {what}: {e}") from e

    def query(self, ident: str) -> CoocQuery:
        return self.build_query(self._lookup(self.document.queries, ident, "query"))

    def build_query(self, data: QuerySpec | Mapping[str, Any]) -> CoocQuery:
        """
        Build a query against the base law from a named or inline query.

        Raises:
            ModelFileError: If the query does not validate or names unknown objects
        """
        spec = self._validated(QuerySpec, data, "query")
        law = self.engine_model.law
        return CoocQuery(
            law,
            tuple(self.constraint(c) for c in spec.targets),
            tuple(self.constraint(c) for c in spec.conditions),
        )

    def ci_spec(self, ident: str) -> CiSpec:
        return self.build_ci(self._lookup(self.document.ci, ident, "independence statement"))

    def build_ci(self, data: CiSpecModel | Mapping[str, Any]) -> CiSpec:
        spec = self._validated(CiSpecModel, data, "independence statement")

        def side(s) -> CiSide:
            subject = self.get_object(s.subject) if s.subject else None
            return CiSide(subject, tuple(self.constraint(c) for c in s.constraints))

        given = self.get_object(spec.given) if spec.given else None
        return CiSpec(
            side(spec.side_a),
            side(spec.side_b),
            given,
            tuple(self.constraint(c) for c in spec.given_conditions),
        )

    def constraints(self, data: list | None) -> tuple[Constraint, ...]:
        """Constraints from an inline JSON list."""
        if not data:
            return ()
        if not isinstance(data, list):
            raise ModelFileError("Constraints must be a JSON list")
        return tuple(self.constraint(self._validated(ConstraintSpec, c, "constraint")) for c in data)
