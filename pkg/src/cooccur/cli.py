"Command-line interface for the cooccur engine."

import json
from collections.abc import Iterator
from contextlib import contextmanager
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

import typer
from loguru import logger
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from . import __version__
from .checks import run_checks
from .codec import (
    conditional_to_dict,
    density_to_dict,
    dumps,
    kernel_to_dict,
    measure_to_dict,
    solutions_to_dict,
)
from .conditioning import check_cond_independence, cond_kernel
from .constants import DEFAULT_CASES, DEFAULT_PRODUCT_CAP, DEFAULT_SEED, EXIT_CHECK_FAILED
from .cooccurrence import CoocQuery, cond_prob_objects, prob_cooc_objects
from .density import density_wrt_base, density_wrt_marginals, factorize_if_independent
from .eintegral import cond_expectation_event, cond_expectation_object
from .exceptions import CooccurError, ModelFileError, WitnessError
from .logger import setup_logger
from .modelfile import ModelFile
from .models import CheckConfig, EngineConfig
from .rationals import format_decimal, format_rational
from .scm import intervene, observational_distribution, solve
from .space import IndexSet

app = typer.Typer(
    name="cooccur",
    help="Exact finite probability with co-occurrence conditioning",
    add_completion=False,
)
# Results go to stdout without markup or wrapping so golden files stay byte-stable
console = Console(highlight=False, markup=False, emoji=False, soft_wrap=True)
err_console = Console(stderr=True)


class ScmAction(str, Enum):
    solve = "solve"
    observe = "observe"
    intervene = "intervene"


def version_callback(value: bool):
    """Print version and exit."""
    if value:
        console.print(f"cooccur version {__version__}")
        raise typer.Exit()


def _model_option(required: bool = True):
    return typer.Option(
        ... if required else None,
        "--model",
        "-m",
        help="Model file (UTF-8 JSON)",
        dir_okay=False,
    )


def _cap_option():
    return typer.Option(DEFAULT_PRODUCT_CAP, "--product-cap", min=1, help="Largest allowed product space")


def _verbose_option():
    return typer.Option(False, "--verbose", "-v", help="Enable verbose logging on stderr")


def _log_file_option():
    return typer.Option(None, "--log-file", help="Also write logs to this file")


def _decimal_option():
    return typer.Option(None, "--decimal", min=0, help="Add a decimal rendering with this many digits")


def _json_option():
    return typer.Option(False, "--json", help="Print a JSON document instead of text")


@contextmanager
def _reporting(verbose: bool) -> Iterator[None]:
    """Map engine errors to messages and their exit codes."""
    try:
        yield
    except typer.Exit:
        raise
    except CooccurError as e:
        err_console.print(f"[red]Error: {escape(str(e))}[/red]")
        if isinstance(e, WitnessError) and e.witness is not None:
            err_console.print(f"witness: {escape(json.dumps(e.witness))}")
        raise typer.Exit(code=e.exit_code)
    except Exception as e:
        err_console.print(f"[red]Error inesperado: {escape(str(e))}[/red]")
        if verbose:
            err_console.print_exception()
        raise typer.Exit(code=1)


def _load(model: Path, product_cap: int) -> ModelFile:
    return ModelFile.from_path(model, EngineConfig(product_cap=product_cap))


def _inline(text: Optional[str], what: str) -> Any:
    if text is None:
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFileError(f"Invalid inline {what}: {e}") from e


def _one_of(name: Optional[str], inline: Optional[str], flag: str, required: bool = True) -> None:
    if name is not None and inline is not None:
        raise typer.BadParameter(f"Use either {flag} or --inline, not both")
    if required and name is None and inline is None:
        raise typer.BadParameter(f"Give {flag} NAME or --inline JSON")


def _query(mf: ModelFile, name: Optional[str], inline: Optional[str]) -> CoocQuery:
    if name is not None:
        return mf.query(name)
    return mf.build_query(_inline(inline, "query") or {})


def _assignments(values: list[str], flag: str) -> list[tuple[int, str]]:
    """Parse repeated I=VALUE options."""
    parsed = []
    for value in values:
        index, sep, rest = value.partition("=")
        if not sep or not index.strip().isdigit() or not rest.strip():
            raise typer.BadParameter(f"Expected {flag} I=VALUE, got {value!r}")
        parsed.append((int(index), rest.strip()))
    return parsed


def _blocks(text: str) -> list[IndexSet]:
    """Parse index blocks written as '1,2;3'."""
    parts = []
    for part in text.split(";"):
        indices = [i.strip() for i in part.split(",") if i.strip()]
        if not indices or not all(i.isdigit() for i in indices):
            raise typer.BadParameter(f"Invalid index block {part!r} in --blocks")
        parts.append(IndexSet(tuple(sorted(int(i) for i in indices))))
    return parts


def _print_value(value: Fraction, null_condition: bool, decimal: Optional[int], as_json: bool) -> None:
    if null_condition:
        logger.warning("Conditioning event has probability zero, reporting 0")
    if as_json:
        data: dict[str, Any] = {"value": format_rational(value), "null_condition": null_condition}
        if decimal is not None:
            data["decimal"] = format_decimal(value, decimal)
        console.print(dumps(data))
        return
    console.print(format_rational(value))
    if decimal is not None:
        console.print(f"decimal: {format_decimal(value, decimal)}")
    if null_condition:
        console.print("null-condition: true")


@app.command()
def prob(
    model: Path = _model_option(),
    query: Optional[str] = typer.Option(None, "--query", "-q", help="Named query in the model file"),
    inline: Optional[str] = typer.Option(None, "--inline", help="Query as inline JSON"),
    decimal: Optional[int] = _decimal_option(),
    as_json: bool = _json_option(),
    product_cap: int = _cap_option(),
    verbose: bool = _verbose_option(),
    log_file: Optional[Path] = _log_file_option(),
):
    """
    Probability of co-occurrence of the query targets, given its conditions.

    Example usage:

        cooccur prob -m model.json --query joint

        cooccur prob -m model.json --inline '{"targets": [{"object": "X1", "event": ["e"]}]}' --decimal 4
    """
    setup_logger(verbose=verbose, log_file=log_file)
    _one_of(query, inline, "--query")
    with _reporting(verbose):
        q = _query(_load(model, product_cap), query, inline)
        if q.conditions:
            result = cond_prob_objects(q)
            _print_value(result.value, result.null_condition, decimal, as_json)
        else:
            _print_value(prob_cooc_objects(q), False, decimal, as_json)


@app.command()
def kernel(
    model: Path = _model_option(),
    source: str = typer.Option(..., "--source", help="Conditioning object id"),
    target: str = typer.Option(..., "--target", help="Target object id"),
    conditions: Optional[str] = typer.Option(None, "--conditions", help="JSON list of conditions"),
    target_conditions: Optional[str] = typer.Option(
        None, "--target-conditions", help="JSON list of constraints co-occurring with the target"
    ),
    product_cap: int = _cap_option(),
    verbose: bool = _verbose_option(),
    log_file: Optional[Path] = _log_file_option(),
):
    """
    Conditional kernel of the target object given the source object.

    Example usage:

        cooccur kernel -m model.json --source X1 --target X2
    """
    setup_logger(verbose=verbose, log_file=log_file)
    with _reporting(verbose):
        mf = _load(model, product_cap)
        k = cond_kernel(
            mf.engine_model.law,
            mf.get_object(source),
            mf.get_object(target),
            mf.constraints(_inline(conditions, "conditions")),
            mf.constraints(_inline(target_conditions, "target conditions")),
        )
        console.print(dumps(kernel_to_dict(k)))


@app.command()
def density(
    model: Path = _model_option(),
    objects: list[str] = typer.Option(..., "--object", "-o", help="Index assignment I=OBJ, repeatable"),
    bases: Optional[str] = typer.Option(None, "--bases", help="Base family id; marginal laws when omitted"),
    blocks: Optional[str] = typer.Option(
        None, "--blocks", help="Factorize over index blocks, e.g. '1,2;3'"
    ),
    product_cap: int = _cap_option(),
    verbose: bool = _verbose_option(),
    log_file: Optional[Path] = _log_file_option(),
):
    """
    Density of the joint law of the objects against a product measure.

    Example usage:

        cooccur density -m model.json -o 1=X1 -o 2=X2

        cooccur density -m model.json -o 1=X1 -o 2=X2 --blocks '1;2'
    """
    setup_logger(verbose=verbose, log_file=log_file)
    assignments = _assignments(objects, "--object")
    parts = _blocks(blocks) if blocks is not None else None
    with _reporting(verbose):
        mf = _load(model, product_cap)
        family = {i: mf.get_object(ident) for i, ident in assignments}
        index_set = IndexSet.of(i for i, _ in assignments)
        law = mf.engine_model.law
        if bases is not None:
            f = density_wrt_base(law, family, index_set, mf.base_family(bases), product_cap)
        else:
            f = density_wrt_marginals(law, family, index_set, product_cap)
        if parts is None:
            console.print(dumps(density_to_dict(f)))
            return
        marginals = factorize_if_independent(f, parts)
        console.print(dumps({"factors": [density_to_dict(m) for m in marginals]}))


@app.command()
def eint(
    model: Path = _model_option(),
    variable: str = typer.Option(..., "--variable", help="Variable id"),
    subject: str = typer.Option(..., "--subject", help="Object carrying the variable"),
    query: Optional[str] = typer.Option(None, "--query", "-q", help="Named query for targets and conditions"),
    inline: Optional[str] = typer.Option(None, "--inline", help="Query as inline JSON"),
    given: Optional[str] = typer.Option(None, "--given", help="Condition on this object pointwise"),
    decimal: Optional[int] = _decimal_option(),
    as_json: bool = _json_option(),
    product_cap: int = _cap_option(),
    verbose: bool = _verbose_option(),
    log_file: Optional[Path] = _log_file_option(),
):
    """
    Integral of a variable against the subject's co-occurrence law.

    With --given the result is the conditional expectation as a function on
    the given object's codomain.

    Example usage:

        cooccur eint -m model.json --variable Y --subject X2 --query given-even
    """
    setup_logger(verbose=verbose, log_file=log_file)
    _one_of(query, inline, "--query", required=False)
    with _reporting(verbose):
        mf = _load(model, product_cap)
        q = _query(mf, query, inline)
        Y = mf.get_variable(variable)
        carrier = mf.get_object(subject)
        if given is None:
            result = cond_expectation_event(Y, q, carrier)
            _print_value(result.value, result.null_condition, decimal, as_json)
            return
        pc = cond_expectation_object(q.base, Y, mf.get_object(given), carrier, q.conditions, q.targets)
        console.print(dumps(conditional_to_dict(pc)))


@app.command()
def ci(
    model: Path = _model_option(),
    spec: Optional[str] = typer.Option(None, "--spec", help="Named independence statement"),
    inline: Optional[str] = typer.Option(None, "--inline", help="Statement as inline JSON"),
    as_json: bool = _json_option(),
    product_cap: int = _cap_option(),
    verbose: bool = _verbose_option(),
    log_file: Optional[Path] = _log_file_option(),
):
    """
    Decide a conditional independence statement.

    Example usage:

        cooccur ci -m model.json --spec parity-vs-half
    """
    setup_logger(verbose=verbose, log_file=log_file)
    _one_of(spec, inline, "--spec")
    with _reporting(verbose):
        mf = _load(model, product_cap)
        statement = mf.ci_spec(spec) if spec is not None else mf.build_ci(_inline(inline, "statement"))
        result = check_cond_independence(mf.engine_model.law, statement)
        if as_json:
            console.print(
                dumps(
                    {
                        "independent": result.independent,
                        "null_condition": result.null_condition,
                        "witness": list(result.witness) if result.witness else None,
                    }
                )
            )
            return
        console.print(f"independent: {str(result.independent).lower()}")
        if result.null_condition:
            console.print("null-condition: true")
        if result.witness:
            console.print(f"witness: {json.dumps(list(result.witness))}")


@app.command()
def scm(
    model: Path = _model_option(),
    name: str = typer.Option(..., "--name", help="SCM id"),
    action: ScmAction = typer.Option(ScmAction.solve, "--action", help="What to compute"),
    do: Optional[list[str]] = typer.Option(None, "--do", help="Intervention I=V, repeatable"),
    product_cap: int = _cap_option(),
    verbose: bool = _verbose_option(),
    log_file: Optional[Path] = _log_file_option(),
):
    """
    Solve a structural causal model, its observational law or an intervened law.

    Example usage:

        cooccur scm -m model.json --name chain --action observe

        cooccur scm -m model.json --name chain --action intervene --do 1=0
    """
    setup_logger(verbose=verbose, log_file=log_file)
    interventions = _assignments(do or [], "--do")
    if action is ScmAction.intervene and not interventions:
        raise typer.BadParameter("--action intervene needs at least one --do I=V")
    with _reporting(verbose):
        m = _load(model, product_cap).get_scm(name)
        if action is ScmAction.solve:
            # Report missing or multiple solutions with their witness first
            observational_distribution(m)
            console.print(dumps(solutions_to_dict(m, solve(m))))
            return
        for index, value in interventions:
            m = intervene(m, index, value)
        console.print(dumps(measure_to_dict(observational_distribution(m))))


@app.command()
def check(
    model: Optional[Path] = _model_option(required=False),
    theorems: Optional[str] = typer.Option(
        None, "--theorems", "--checks", help="Comma separated check names, all by default"
    ),
    cases: int = typer.Option(DEFAULT_CASES, "--cases", min=0, help="Random models per check"),
    seed: int = typer.Option(DEFAULT_SEED, "--seed", min=0, help="Seed of the random models"),
    as_json: bool = _json_option(),
    product_cap: int = _cap_option(),
    verbose: bool = _verbose_option(),
    log_file: Optional[Path] = _log_file_option(),
):
    """
    Run the property checks on the model and on seeded random models.

    Exits with code 1 when any check fails.

    Example usage:

        cooccur check -m model.json

        cooccur check --theorems tower --cases 100 --seed 7
    """
    setup_logger(verbose=verbose, log_file=log_file)
    names = [n.strip() for n in theorems.split(",") if n.strip()] if theorems else None
    try:
        config = CheckConfig(cases=cases, seed=seed, checks=names)
    except ValidationError as e:
        raise typer.BadParameter(str(e.errors()[0]["msg"])) from e
    with _reporting(verbose):
        engine_model = _load(model, product_cap).engine_model if model is not None else None
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            console=err_console,
            transient=True,
        ) as progress:
            task = progress.add_task("Verificando...", total=None)
            report = run_checks(engine_model, config)
            progress.update(task, completed=True)

        if as_json:
            console.print(dumps(report.to_dict()))
        else:
            table = Table(show_header=True, title="Reporte de verificaciones")
            table.add_column("Verificación", style="cyan")
            table.add_column("Correctos", justify="right", style="green")
            table.add_column("Fallidos", justify="right", style="red")
            table.add_column("Omitidos", justify="right", style="yellow")
            table.add_column("Primer fallo", style="white", max_width=50)
            for check_name, row in report.summary().iterrows():
                table.add_row(check_name, str(row.passed), str(row.failed), str(row.skipped), row.first_failure)
            console.print(table)
            console.print("Todas las verificaciones pasaron" if report.ok else "Hay verificaciones fallidas")
        if not report.ok:
            raise typer.Exit(code=EXIT_CHECK_FAILED)


@app.callback(invoke_without_command=True)
def main(
    ctx: typer.Context,
    version: Optional[bool] = typer.Option(
        None,
        "--version",
        callback=version_callback,
        is_eager=True,
        help="Show version and exit",
    ),
):
    """
    Cooccur - Probabilidad finita exacta con condicionamiento por co-ocurrencia.

    Si no se especifica un comando, se muestra la ayuda.
    """
    if ctx.invoked_subcommand is None:
        console.print(ctx.get_help())


if __name__ == "__main__":
    app()
