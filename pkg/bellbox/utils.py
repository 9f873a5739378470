import json
import logging
from pathlib import Path
from typing import Any, Generator, Iterable

from pandas import DataFrame
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from .bell_statistics import (
    BellData,
    BellDataFormatError,
    ClassificationReport,
    MarginalDeviation,
)
from .settings import JSON_INDENT, settings

FORMAT: str = "%(message)s"

console: Console = Console()
error_console: Console = Console(stderr=True)

logging.basicConfig(
    level=settings.LOG_LEVEL,
    format=FORMAT,
    datefmt="[%X]",
    handlers=[RichHandler(rich_tracebacks=True, console=error_console)],
)

logger = logging.getLogger("rich")


def get_path_from(p: str | Path) -> Path:
    """Return ``p`` as an expanded `Path`."""
    return Path(p).expanduser()


def write_json(
    p: str | Path, o: dict | list, json_indent: int = JSON_INDENT
) -> Path:
    """
    Write ``o`` to ``p`` as `JSON`, creating parent folders.

    Args:
        p: Path to write `json` to
        o: Object to write to `json` file
        json_indent: What indentation to write the `JSON` file with

    Returns:
        The path written to.

    Example:
        ```pycon
        >>> tmp_path: Path = getfixture('tmp_path')
        >>> path: Path = write_json(tmp_path / 'nested' / 'cats.json',
        ...                         {"label": "cats"})
        >>> load_json(path)
        {'label': 'cats'}

        ```
    """
    p = get_path_from(p)
    if not isinstance(o, (dict, list)):
        raise TypeError(f"Unable to write data of type: {type(o)}")
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(json.dumps(o, indent=json_indent), encoding="utf-8")
    logger.info(f"Saved {p}")
    return p


def load_json(p: str | Path) -> Any:
    """
    Read a `JSON` file.

    Raises:
        BellDataFormatError: the file is unreadable, not UTF-8 or not `JSON`
    """
    p = get_path_from(p)
    try:
        return json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise BellDataFormatError(
            f"Invalid JSON in {p.name} (line {err.lineno}, column {err.colno}): "
            f"{err.msg}"
        ) from err
    except UnicodeDecodeError as err:
        raise BellDataFormatError(
            f"Invalid JSON in {p.name}: not UTF-8 text ({err.reason})"
        ) from err
    except OSError as err:
        raise BellDataFormatError(f"Cannot read {p.name}: {err.strerror}") from err


def load_bell_data(
    p: str | Path,
    normalize: bool = False,
    normalize_tol: float = settings.NORMALIZE_TOL,
) -> BellData:
    """Parse a `BellDataDict` `JSON` file into a `BellData`.

    Example:
        ```pycon
        >>> tmp_path: Path = getfixture('tmp_path')
        >>> uniform = [[0.25, 0.25], [0.25, 0.25]]
        >>> path = write_json(tmp_path / 'uniform.json',
        ...     {"tables": {c: uniform for c in ("AB", "AB'", "A'B", "A'B'")}})
        >>> load_bell_data(path).label
        'uniform'

        ```
    """
    p = get_path_from(p)
    data: BellData = BellData.from_dict(
        load_json(p), normalize=normalize, normalize_tol=normalize_tol
    )
    if not data.label:
        data = BellData(tables=data.tables, label=p.stem, subjects=data.subjects)
    logger.debug(f"Loaded {data.label} from {p}")
    return data


def write_csv(df: DataFrame, p: str | Path) -> Path:
    """Save ``df`` as `CSV`, creating parent folders."""
    p = get_path_from(p)
    p.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(p)
    logger.info(f"Saved {p}")
    return p


def format_number(value: float) -> str:
    """Render a float for text reports.

    Example:
        ```pycon
        >>> format_number(196 / 81)
        '2.41975'
        >>> format_number(-0.0)
        '0'

        ```
    """
    return f"{value + 0.0:.6g}"


def dataframe_table(df: DataFrame, title: str = "", index_name: str = "") -> Table:
    """Render a `DataFrame` as a `rich` `Table`, floats via `format_number`."""
    table: Table = Table(title=title)
    table.add_column(index_name or str(df.index.name or ""), justify="right", style="cyan")
    for column in df.columns:
        table.add_column(str(column), style="magenta")
    for index, row in df.iterrows():
        table.add_row(
            str(index),
            *(
                format_number(v) if isinstance(v, float) else str(v)
                for v in row.tolist()
            ),
        )
    return table


def bell_data_table(data: BellData, title: str = "") -> Table:
    """Probabilities and expectation per context.

    Example:
        ```pycon
        >>> from bellbox.datasets import load_dataset
        >>> table = bell_data_table(load_dataset("cats"))
        >>> [column.header for column in table.columns]
        ['context', 'p11', 'p12', 'p21', 'p22', 'E']

        ```
    """
    return dataframe_table(data.to_dataframe(), title=title or data.label)


def marginal_table(
    deviations: Iterable[MarginalDeviation], tol: float = settings.TOL_MARGINAL
) -> Table:
    table: Table = Table(title="marginal law")
    table.add_column("Outcome", justify="right", style="cyan")
    table.add_column("Contexts", style="yellow")
    table.add_column("lhs", style="magenta")
    table.add_column("rhs", style="magenta")
    table.add_column("Deviation")
    for deviation in deviations:
        table.add_row(
            deviation.setting,
            " / ".join(deviation.contexts),
            format_number(deviation.lhs),
            format_number(deviation.rhs),
            f"[{'green' if deviation.deviation <= tol else 'red'}]"
            f"{format_number(deviation.deviation)}",
        )
    return table


def gen_report_tables(
    report: ClassificationReport,
) -> Generator[Table, None, None]:
    """`rich` tables of the expectations, marginal audit and factorizability."""
    expectations: Table = Table(title="expectations")
    expectations.add_column("Context", justify="right", style="cyan")
    expectations.add_column("E", style="magenta")
    expectations.add_column("Factorizable")
    expectations.add_column("|det|", style="yellow")
    for context, value in report.expectations.items():
        factorization = report.factorizable[context]
        expectations.add_row(
            context,
            format_number(value),
            str(factorization.factorizable),
            format_number(factorization.residual),
        )
    yield expectations
    yield marginal_table(report.marginal_deviations, tol=report.tol_marginal)
