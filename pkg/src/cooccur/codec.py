"""JSON serialization of engine values with exact rational strings."""

import json
from collections.abc import Mapping, Sequence
from typing import Any

from .conditioning import Kernel, PointwiseConditional
from .density import Density
from .eintegral import PiecewiseLinear, RandomVariable
from .exceptions import ModelFileError
from .rationals import format_rational, parse_rational
from .scm import Scm, SolutionMap
from .space import FiniteSpace, MeasureKind, ProductSpace, RationalMeasure


def dumps(data: Any) -> str:
    """Deterministic JSON text: sorted keys, two-space indentation."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False)


def _rationals(values: Sequence) -> list[str]:
    return [format_rational(v) for v in values]


def _parse_all(values: Sequence, what: str) -> tuple:
    try:
        return tuple(parse_rational(v) for v in values)
    except ValueError as e:
        raise ModelFileError(f"Invalid {what}: {e}") from e


def _space(spaces: Mapping[str, FiniteSpace], ident: str) -> FiniteSpace:
    if ident not in spaces:
        raise ModelFileError(f"Unknown space id {ident!r}")
    return spaces[ident]


def measure_to_dict(m: RationalMeasure) -> dict:
    return {"space": m.space.display_name, "weights": _rationals(m.weights), "kind": str(m.kind)}


def measure_from_dict(data: Mapping, spaces: Mapping[str, FiniteSpace]) -> RationalMeasure:
    space = _space(spaces, data["space"])
    weights = _parse_all(data["weights"], "measure weights")
    return RationalMeasure(space, weights, MeasureKind(data.get("kind", MeasureKind.FINITE)))


def kernel_to_dict(k: Kernel) -> dict:
    return {
        "source": k.source.display_name,
        "target": k.target.display_name,
        "rows": [_rationals(row) for row in k.rows],
        "support": sorted(k.support),
        "null_condition": k.null_condition,
    }


def kernel_from_dict(data: Mapping, spaces: Mapping[str, FiniteSpace]) -> Kernel:
    source = _space(spaces, data["source"])
    target = _space(spaces, data["target"])
    rows = tuple(_parse_all(row, "kernel row") for row in data["rows"])
    return Kernel(source, target, rows, frozenset(data["support"]), None, bool(data.get("null_condition", False)))


def density_to_dict(f: Density) -> dict:
    return {"indices": list(f.indices), "base": f.base_kind, "values": _rationals(f.values)}


def density_from_dict(data: Mapping, space: ProductSpace, factors: Sequence[RationalMeasure]) -> Density:
    """
    Re-parse a density; space and base factors are not part of the serialization.

    Raises:
        ModelFileError: If the indices do not match the space
    """
    if list(data["indices"]) != list(space.index_set):
        raise ModelFileError(f"Density indices {data['indices']} do not match {list(space.index_set)}")
    return Density(space, _parse_all(data["values"], "density values"), tuple(factors), data["base"])


def variable_to_dict(Y: RandomVariable) -> dict:
    return {"space": Y.space.display_name, "values": _rationals(Y.values)}


def variable_from_dict(data: Mapping, spaces: Mapping[str, FiniteSpace]) -> RandomVariable:
    return RandomVariable(_space(spaces, data["space"]), _parse_all(data["values"], "variable values"))


def piecewise_to_dict(phi: PiecewiseLinear) -> dict:
    return {
        "breakpoints": _rationals(phi.breakpoints),
        "slopes": _rationals(phi.slopes),
        "offset": format_rational(phi.offset),
    }


def piecewise_from_dict(data: Mapping) -> PiecewiseLinear:
    return PiecewiseLinear(
        _parse_all(data["breakpoints"], "breakpoints"),
        _parse_all(data["slopes"], "slopes"),
        parse_rational(data.get("offset", 0)),
    )


def conditional_to_dict(pc: PointwiseConditional) -> dict:
    return {
        "source": pc.source.display_name,
        "values": _rationals(pc.values),
        "support": sorted(pc.support),
        "null_condition": pc.null_condition,
    }


def solutions_to_dict(m: Scm, solutions: SolutionMap) -> dict:
    """Solution map with exogenous points and endogenous solutions as coordinate lists."""
    return {
        "solutions": [
            {
                "exo": list(m.exo_space.point(e)),
                "endo": [list(m.endo_space.point(x)) for x in found],
            }
            for e, found in solutions.items()
        ]
    }
