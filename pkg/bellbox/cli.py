import json
from enum import StrEnum
from logging import WARNING
from pathlib import Path
from typing import Any, Callable, Final, Optional, Tuple, get_args, get_type_hints

import typer
from rich.table import Table
from typing_extensions import Annotated

from .bell_statistics import BellData, BellDataFormatError, InvalidProbabilitiesError
from .linalg import DimensionError, NotNormalizedError
from .log import error
from .report import (
    DEMOS,
    UnknownDemoError,
    analysis_report,
    construction_report,
    demo_report,
    print_classification,
    print_construction,
    print_demo,
    print_simulation,
    simulation_report,
)
from .settings import JSON_INDENT, SETUP_TITLE, settings
from .simulators import (
    SimulationResult,
    SphereExperimentConfig,
    spheres_simulate,
    vessels_nonlocal_box,
    vessels_simulate,
)
from .utils import console, load_bell_data, logger, write_csv, write_json

cli = typer.Typer(pretty_exceptions_show_locals=False)

EXIT_USAGE: Final[int] = 2
EXIT_INVALID_DATA: Final[int] = 3

StateAmplitudes = Tuple[float, float, float, float, float, float, float, float]


class OutputFormat(StrEnum):
    TEXT = "text"
    JSON = "json"


class SimulationModel(StrEnum):
    SPHERES = "spheres"
    VESSELS = "vessels"
    VESSELS_BOX = "vessels-box"


def fail(msg: str, code: int) -> typer.Exit:
    """Print ``msg`` to standard error and return the `typer.Exit` to raise."""
    error(msg)
    return typer.Exit(code=code)


def read_bell_data(path: Path, normalize: bool) -> BellData:
    """Load ``path``, mapping failures onto the command line exit codes."""
    try:
        return load_bell_data(path, normalize=normalize)
    except BellDataFormatError as err:
        raise fail(str(err), EXIT_USAGE)
    except InvalidProbabilitiesError as err:
        raise fail(str(err), EXIT_INVALID_DATA)


def emit(record: Any, output_format: OutputFormat) -> bool:
    """Echo ``record`` as `JSON` when asked to; `True` if it was."""
    if output_format == OutputFormat.JSON:
        typer.echo(json.dumps(record, indent=JSON_INDENT))
        return True
    return False


def check_tolerances(**tolerances: float) -> None:
    for name, value in tolerances.items():
        if value <= 0:
            raise fail(f"--{name.replace('_', '-')} must be positive", EXIT_USAGE)


@cli.command()
def analyze(
    path: Annotated[
        Path,
        typer.Argument(
            exists=True, dir_okay=False, help="BellData JSON file to classify"
        ),
    ],
    tol_bell: Annotated[
        float, typer.Option(help="Tolerance on the CHSH bounds 2 and 2√2")
    ] = settings.TOL_BELL,
    tol_marginal: Annotated[
        float, typer.Option(help="Tolerance on marginal law deviations")
    ] = settings.TOL_MARGINAL,
    normalize: Annotated[
        bool, typer.Option(help="Rescale tables summing to 1 ± 0.005")
    ] = False,
    output_format: Annotated[
        OutputFormat, typer.Option("--format", case_sensitive=False, help="Report format")
    ] = OutputFormat.TEXT,
    csv: Annotated[
        Optional[Path], typer.Option(help="Also save the tables as CSV")
    ] = None,
    log_level: Annotated[
        int, typer.Option(help="Set logging level for debugging")
    ] = WARNING,
) -> None:
    """Classify the coincidence tables in PATH."""
    logger.setLevel(log_level)
    check_tolerances(tol_bell=tol_bell, tol_marginal=tol_marginal)
    data: BellData = read_bell_data(path, normalize)
    record = analysis_report(data, tol_bell, tol_marginal)
    if csv:
        write_csv(data.to_dataframe(), csv)
    if not emit(record, output_format):
        print_classification(record, data)


@cli.command()
def demo(
    name: Annotated[
        str, typer.Argument(help=f"One of: {', '.join(DEMOS)}")
    ],
    tol_bell: Annotated[
        float, typer.Option(help="Tolerance on the CHSH bounds 2 and 2√2")
    ] = settings.TOL_BELL,
    tol_marginal: Annotated[
        float, typer.Option(help="Tolerance on marginal law deviations")
    ] = settings.TOL_MARGINAL,
    tol_product: Annotated[
        float, typer.Option(help="Tolerance of product tests")
    ] = settings.TOL_PRODUCT,
    alpha: Annotated[
        float, typer.Option(help="Phase α of the nonlocal box model (radians)")
    ] = 0.0,
    beta: Annotated[
        float, typer.Option(help="Phase β of the nonlocal box model (radians)")
    ] = 0.0,
    output_format: Annotated[
        OutputFormat, typer.Option("--format", case_sensitive=False, help="Report format")
    ] = OutputFormat.TEXT,
    csv: Annotated[
        Optional[Path], typer.Option(help="Also save the tables as CSV")
    ] = None,
    log_level: Annotated[
        int, typer.Option(help="Set logging level for debugging")
    ] = WARNING,
) -> None:
    """Run a bundled dataset or model and print its full report."""
    logger.setLevel(log_level)
    check_tolerances(
        tol_bell=tol_bell, tol_marginal=tol_marginal, tol_product=tol_product
    )
    try:
        record = demo_report(name, tol_bell, tol_marginal, tol_product, alpha, beta)
    except UnknownDemoError as err:
        raise fail(str(err), EXIT_USAGE)
    if csv:
        write_csv(BellData.from_dict(record["dataset"]).to_dataframe(), csv)
    if not emit(record, output_format):
        print_demo(record)


@cli.command()
def simulate(
    model: Annotated[
        SimulationModel, typer.Argument(case_sensitive=False, help="Mechanism to run")
    ],
    a: Annotated[
        float, typer.Option("--a", help="Direction of A in degrees (spheres)")
    ] = settings.SPHERE_ANGLES_DEGREES["A"],
    ap: Annotated[
        float, typer.Option("--ap", help="Direction of A' in degrees (spheres)")
    ] = settings.SPHERE_ANGLES_DEGREES["A'"],
    b: Annotated[
        float, typer.Option("--b", help="Direction of B in degrees (spheres)")
    ] = settings.SPHERE_ANGLES_DEGREES["B"],
    bp: Annotated[
        float, typer.Option("--bp", help="Direction of B' in degrees (spheres)")
    ] = settings.SPHERE_ANGLES_DEGREES["B'"],
    trials: Annotated[
        int, typer.Option(min=1, help="Trials per context")
    ] = settings.DEFAULT_TRIALS,
    seed: Annotated[int, typer.Option(help="Seed of the generators")] = settings.DEFAULT_SEED,
    tol_bell: Annotated[
        float, typer.Option(help="Tolerance on the CHSH bounds 2 and 2√2")
    ] = settings.TOL_BELL,
    tol_marginal: Annotated[
        float, typer.Option(help="Tolerance on marginal law deviations")
    ] = settings.TOL_MARGINAL,
    output_format: Annotated[
        OutputFormat, typer.Option("--format", case_sensitive=False, help="Report format")
    ] = OutputFormat.TEXT,
    progress: Annotated[
        bool, typer.Option(help="Show a progress bar per context")
    ] = settings.SHOW_PROGRESS,
    log_level: Annotated[
        int, typer.Option(help="Set logging level for debugging")
    ] = WARNING,
) -> None:
    """Simulate a classical mechanism and classify its coincidence tables."""
    logger.setLevel(log_level)
    check_tolerances(tol_bell=tol_bell, tol_marginal=tol_marginal)
    result: SimulationResult
    if model == SimulationModel.SPHERES:
        result = spheres_simulate(
            SphereExperimentConfig.from_degrees(
                a, ap, b, bp, trials=trials, seed=seed
            ),
            progress=progress,
        )
    elif model == SimulationModel.VESSELS:
        result = vessels_simulate(trials, seed, progress=progress)
    else:
        result = vessels_nonlocal_box(trials, seed, progress=progress)
    record = simulation_report(result, tol_bell, tol_marginal)
    if not emit(record, output_format):
        console.print(func_table(simulate, values=locals()))
        print_simulation(record)


@cli.command()
def construct(
    path: Annotated[
        Path,
        typer.Argument(exists=True, dir_okay=False, help="BellData JSON file to model"),
    ],
    state: Annotated[
        StateAmplitudes,
        typer.Option(
            help="Model state as 4 complex amplitudes: re1 im1 re2 im2 re3 im3 re4 im4"
        ),
    ] = (None, None, None, None, None, None, None, None),  # type: ignore[assignment]
    tol_product: Annotated[
        float, typer.Option(help="Tolerance of product tests")
    ] = settings.TOL_PRODUCT,
    tol_marginal: Annotated[
        float, typer.Option(help="Tolerance on marginal law deviations")
    ] = settings.TOL_MARGINAL,
    normalize: Annotated[
        bool, typer.Option(help="Rescale tables summing to 1 ± 0.005")
    ] = False,
    output_format: Annotated[
        OutputFormat, typer.Option("--format", case_sensitive=False, help="Report format")
    ] = OutputFormat.TEXT,
    output: Annotated[
        Optional[Path], typer.Option(help="Save the model JSON to this path")
    ] = None,
    log_level: Annotated[
        int, typer.Option(help="Set logging level for debugging")
    ] = WARNING,
) -> None:
    """Build measurement bases reproducing the tables in PATH from one state."""
    logger.setLevel(log_level)
    check_tolerances(tol_product=tol_product, tol_marginal=tol_marginal)
    data: BellData = read_bell_data(path, normalize)
    amplitudes: list[complex] | None = (
        None
        if state is None or state[0] is None
        else [complex(re, im) for re, im in zip(state[::2], state[1::2])]
    )
    try:
        record = construction_report(data, amplitudes, tol_product, tol_marginal)
    except (NotNormalizedError, DimensionError) as err:
        raise fail(f"--state: {err}", EXIT_USAGE)
    if output:
        write_json(output, dict(record["verification"]["model"]))
    if not emit(record, output_format):
        print_construction(record)


def show_setup(title: str = SETUP_TITLE, **kwargs) -> None:
    """Generate a `rich.table.Table` for printing configuration to console."""
    table = Table(title=title)

    table.add_column("Setting", justify="right", style="cyan", no_wrap=True)
    table.add_column("Value", style="magenta")

    for key, value in kwargs.items():
        table.add_row(str(key), str(value))

    console.print(table)
    return


@cli.command()
def setup() -> None:
    """Print the default tolerances and run parameters."""
    show_setup(**settings)


def func_table(
    func: Callable, values: dict, title: str = "", extra_dict: dict[str, Any] = {}
) -> Table:
    """Geneate `rich` `Table` from `func` signature and `help` attr.

    Args:
        func:
            Function whose `args` and `type` hints will be converted
            to a table.

        values:
            `dict` of variables covered in `func` signature.
            `local()` often suffices.

        title:
            `str` for table title.

        extra_dict:
            A `dict` of additional rows to add to the table. For each
            `key`, `value` pair: if the `value` is a `tuple`, it will
            be expanded to match the `Type`, `Value`, and `Notes`
            columns; else the `Type` will be inferred and `Notes`
            left blank.

    Example:
        ```pycon
        >>> def test_func(
        ...     trials: Annotated[int, typer.Option(help="Trials per context")] = 10
        ... ) -> None:
        ...     test_func_table: Table = func_table(test_func, values=vars())
        ...     console.print(test_func_table)
        >>> test_func()
                   test_func config
        ┏━━━━━━━━━━┳━━━━━━┳━━━━━━━┳━━━━━━━━━━━━━━━━━━━━┓
        ┃ Variable ┃ Type ┃ Value ┃ Notes              ┃
        ┡━━━━━━━━━━╇━━━━━━╇━━━━━━━╇━━━━━━━━━━━━━━━━━━━━┩
        │   trials │ int  │ 10    │ Trials per context │
        └──────────┴──────┴───────┴────────────────────┘

        ```
    """
    title = title if title else f"{func.__name__} config"
    func_signature: dict = get_type_hints(func, include_extras=True)
    table: Table = Table(title=title)
    table.add_column("Variable", justify="right", style="cyan")
    table.add_column("Type", style="yellow")
    table.add_column("Value", style="magenta")
    table.add_column("Notes")
    for var, info in func_signature.items():
        try:
            var_type, annotation = get_args(info)
            value: Any = values[var]
            if value == "":
                value = "''"
            table.add_row(
                str(var),
                getattr(var_type, "__name__", str(var_type)),
                str(value),
                annotation.help,
            )
        except (ValueError, KeyError):
            continue
    for key, val in extra_dict.items():
        if isinstance(val, tuple):
            table.add_row(key, *val)
        else:
            table.add_row(key, type(val).__name__, str(val))
    return table
