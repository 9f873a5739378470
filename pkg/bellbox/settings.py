"""
The `settings` module provides configuration for running `bellbox`.

Most of these are managed within the `settings` variable within this module.

!!! note
    See the command line interface flags (`--tol-bell`, `--tol-marginal`,
    `--tol-product`, `--normalize`, `--seed`, `--trials`) for means of
    modifying `settings` when run.

Attributes:
    JSON_INDENT:
        Amount of indentation to include in output `JSON` reports
    CONTEXTS:
        The four coincidence measurement names in canonical order
    SETTINGS_PER_SIDE:
        Which measurement settings share a side of each coincidence context
    SETUP_TITLE:
        the title printed at the commandline via `cli.show_setup()` function
    settings:
        a `dotdict` of default tolerances and run parameters

"""
from logging import WARNING
from typing import Final, Literal, TypeAlias

from .types import dotdict

JSON_INDENT: int = 2
SETUP_TITLE: str = "bellbox setup"

ContextName: TypeAlias = Literal["AB", "AB'", "A'B", "A'B'"]
SettingName: TypeAlias = Literal["A", "A'", "B", "B'"]

CONTEXTS: Final[tuple[ContextName, ...]] = ("AB", "AB'", "A'B", "A'B'")
SETTINGS: Final[tuple[SettingName, ...]] = ("A", "A'", "B", "B'")

SETTINGS_PER_SIDE: Final[dict[ContextName, tuple[SettingName, SettingName]]] = {
    "AB": ("A", "B"),
    "AB'": ("A", "B'"),
    "A'B": ("A'", "B"),
    "A'B'": ("A'", "B'"),
}

# Outcome labels on the (11, 12, 21, 22) grid
DEFAULT_OUTCOMES: Final[tuple[float, float]] = (1.0, -1.0)
DEFAULT_GRID_LABELS: Final[tuple[float, float, float, float]] = (1.0, -1.0, -1.0, 1.0)


settings: dotdict = dotdict(
    **{
        "TOL_BELL": 1e-6,
        "TOL_MARGINAL": 1e-6,
        "TOL_PRODUCT": 1e-8,
        "CLUSTER_TOL": 1e-8,
        "HERMITIAN_TOL": 1e-10,
        "NORMALIZED_TOL": 1e-10,
        "TABLE_SUM_TOL": 1e-9,
        "FACTORIZATION_TOL": 1e-9,
        "NORMALIZE_TOL": 0.005,
        "DEFAULT_TRIALS": 100_000,
        "DEFAULT_SEED": 0,
        "LOG_LEVEL": WARNING,
        "SHOW_PROGRESS": False,
        "SPHERE_ANGLES_DEGREES": {"A": 0.0, "A'": 90.0, "B": 135.0, "B'": 45.0},
    }
)
