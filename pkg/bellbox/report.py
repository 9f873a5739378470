"""
Assemble and render the reports printed by the command line interface.

Each `*_report` function returns a `TypedDict` that is the `JSON` output of a
command; each `print_*` function renders the same record as text with `rich`
tables and `colorama` status lines, so both formats carry identical numbers.
"""
from logging import getLogger
from typing import Final

import numpy as np
from numpy.typing import ArrayLike
from rich.console import Console

from .bell_statistics import BellData, ClassificationReport, classify
from .datasets import dataset_dict, load_dataset
from .entanglement import IDENTITY_ISO
from .log import info, verdict
from .models import (
    QuantumBellModel,
    model_for_bell_data,
    nonlocal_box_model,
    reproduction_residual,
    singlet_spin_model,
)
from .settings import ContextName, settings
from .simulators import SimulationResult, SphereExperimentConfig, spheres_bell_data
from .types import (
    AnalysisReportDict,
    ConstructionReportDict,
    DemoReportDict,
    ModelVerificationDict,
    SimulationReportDict,
)
from .utils import bell_data_table, console, format_number, gen_report_tables

logger = getLogger("rich")

DEMOS: Final[dict[str, str]] = {
    "animal-acts": "The Animal Acts concept combination, 81 subjects",
    "vessels": "Two vessels of water connected by a tube",
    "cats": "Glimmer and Inkling, a nonlocal box of cats",
    "nonlocal-box": "Vessels of water in a mixed state, modelled in C4",
    "spheres": "Connected spheres on elastics, analytic tables",
}


class UnknownDemoError(KeyError):
    """A demo name not in `DEMOS`."""

    def __str__(self) -> str:
        return f"Unknown demo {self.args[0]!r}, available: {', '.join(DEMOS)}"


def analysis_report(
    data: BellData,
    tol_bell: float = settings.TOL_BELL,
    tol_marginal: float = settings.TOL_MARGINAL,
) -> AnalysisReportDict:
    """Classify ``data`` and bundle it with its parsed tables."""
    return {
        "label": data.label,
        "dataset": data.to_dict(),
        "classification": classify(data, tol_bell, tol_marginal).to_dict(),
    }


def model_verification(
    model: QuantumBellModel,
    tol_product: float = settings.TOL_PRODUCT,
    tol_marginal: float = settings.TOL_MARGINAL,
    target: BellData | None = None,
) -> ModelVerificationDict:
    """``tr(ρ B)``, Lüders invariance and per context productness of ``model``.

    Example:
        ```pycon
        >>> checks = model_verification(nonlocal_box_model())
        >>> round(checks["chsh_expectation"], 12), checks["marginal_law_holds"]
        (4.0, True)

        ```
    """
    report: ClassificationReport = classify(model.born_tables(), tol_marginal=tol_marginal)
    verification: ModelVerificationDict = {
        "chsh_expectation": model.chsh_expectation(),
        "luders_invariance": dict(model.luders_invariance()),
        "marginal_law_holds": report.marginal_law_holds,
        "model": model.to_dict(IDENTITY_ISO, tol_product, target=target),
    }
    if target is not None:
        verification["reproduction_residual"] = reproduction_residual(model, target)
    return verification


def demo_report(
    name: str,
    tol_bell: float = settings.TOL_BELL,
    tol_marginal: float = settings.TOL_MARGINAL,
    tol_product: float = settings.TOL_PRODUCT,
    alpha: float = 0.0,
    beta: float = 0.0,
) -> DemoReportDict:
    """Run bundled demo ``name``.

    Raises:
        UnknownDemoError: ``name`` is not in `DEMOS`
    """
    if name not in DEMOS:
        raise UnknownDemoError(name)
    model: QuantumBellModel | None = None
    target: BellData | None = None
    if name == "nonlocal-box":
        model = nonlocal_box_model(alpha, beta)
        data: BellData = model.born_tables()
    elif name == "spheres":
        config: SphereExperimentConfig = SphereExperimentConfig()
        data = spheres_bell_data(config)
        model = singlet_spin_model(config.angles())
        target = data
    else:
        data = load_dataset(name)
    record: DemoReportDict = {
        "demo": name,
        "description": DEMOS[name],
        "dataset": data.to_dict(),
        "classification": classify(data, tol_bell, tol_marginal).to_dict(),
    }
    if name == "animal-acts":
        record["verbatim"] = dataset_dict(name)
    if model is not None:
        record["verification"] = model_verification(
            model, tol_product, tol_marginal, target=target
        )
    return record


def simulation_report(
    result: SimulationResult,
    tol_bell: float = settings.TOL_BELL,
    tol_marginal: float = settings.TOL_MARGINAL,
) -> SimulationReportDict:
    record: SimulationReportDict = {
        "simulation": result.to_dict(),
        "classification": classify(result.empirical, tol_bell, tol_marginal).to_dict(),
    }
    if result.analytic is not None:
        record["analytic_classification"] = classify(
            result.analytic, tol_bell, tol_marginal
        ).to_dict()
    return record


def construction_report(
    data: BellData,
    state: ArrayLike | None = None,
    tol_product: float = settings.TOL_PRODUCT,
    tol_marginal: float = settings.TOL_MARGINAL,
) -> ConstructionReportDict:
    """Build a pure state model of ``data`` and check it.

    Example:
        ```pycon
        >>> report = construction_report(load_dataset("uniform"))
        >>> report["verification"]["reproduction_residual"] < 1e-10
        True

        ```
    """
    model: QuantumBellModel = model_for_bell_data(data, state)
    verification: ModelVerificationDict = model_verification(
        model, tol_product, tol_marginal, target=data
    )
    entangled: list[str] = [
        context
        for context, record in verification["model"]["contexts"].items()
        if not record["measurement_product"]["is_product"]
    ]
    return {
        "dataset": data.to_dict(),
        "verification": verification,
        "entangled_contexts": entangled,
    }


def print_classification(
    record: AnalysisReportDict | DemoReportDict | SimulationReportDict,
    data: BellData,
    out: Console = console,
) -> None:
    """Render the tables, audit and verdict of a classification record."""
    report: ClassificationReport = ClassificationReport.from_dict(
        record["classification"]
    )
    out.print(bell_data_table(data))
    for table in gen_report_tables(report):
        out.print(table)
    info(
        f"CHSH: {format_number(report.chsh_fixed)} "
        f"(max over sign placements {format_number(report.chsh_max)})"
    )
    verdict(
        f"marginal law {'satisfied' if report.marginal_law_holds else 'violated'} "
        f"(max deviation {format_number(report.max_marginal_deviation)})",
        ok=report.marginal_law_holds,
    )
    info(f"Verdict: {report.verdict} - {report.verdict.description}")


def print_verbatim(record: DemoReportDict, out: Console = console) -> None:
    """Echo the probabilities exactly as printed with the dataset."""
    verbatim = record["verbatim"]
    info(f"Published probabilities of {record['demo']}:")
    for context, rows in verbatim["tables"].items():
        out.print(
            f"  {context:5}" + "  ".join(str(p) for row in rows for p in row),
            highlight=False,
        )


def print_verification(record: ModelVerificationDict) -> None:
    """Render the checks of a Hilbert space model."""
    info(f"tr(ρB) = {format_number(record['chsh_expectation'])}")
    worst: float = max(record["luders_invariance"].values())
    verdict(
        f"Lüders updates leave the state invariant (max change {format_number(worst)})"
        if worst <= 1e-12
        else f"Lüders updates change the state (max change {format_number(worst)})",
        ok=worst <= 1e-12,
    )
    if "reproduction_residual" in record:
        info(f"Reproduction residual: {format_number(record['reproduction_residual'])}")
    contexts: dict[str, dict] = record["model"]["contexts"]  # type: ignore[assignment]
    for context, context_record in contexts.items():
        measurement: bool = context_record["measurement_product"]["is_product"]
        operator: bool = context_record["operator_product"]["is_product"]
        info(
            f"{context}: measurement {'product' if measurement else 'entangled'}, "
            f"operator {'product' if operator else 'entangled'}"
        )
    if "state_product" in record["model"]:
        is_product: bool = record["model"]["state_product"]["is_product"]
        info(f"state {'product' if is_product else 'entangled'}")


def print_demo(record: DemoReportDict, out: Console = console) -> None:
    data: BellData = BellData.from_dict(record["dataset"])
    info(f"{record['demo']}: {record['description']}")
    if "verbatim" in record:
        print_verbatim(record, out)
    print_classification(record, data, out)
    if "verification" in record:
        print_verification(record["verification"])


def print_simulation(record: SimulationReportDict, out: Console = console) -> None:
    simulation = record["simulation"]
    info(
        f"{simulation['model']}: {simulation['trials']} trials per context, "
        f"seed {simulation['seed']}"
    )
    empirical: BellData = BellData.from_dict(simulation["empirical"])
    print_classification(record, empirical, out)
    if "analytic" in simulation and "analytic_classification" in record:
        analytic: BellData = BellData.from_dict(simulation["analytic"])
        out.print(bell_data_table(analytic, title=f"{simulation['model']} (analytic)"))
        analytic_report: ClassificationReport = ClassificationReport.from_dict(
            record["analytic_classification"]
        )
        info(
            f"Analytic CHSH: {format_number(analytic_report.chsh_max)}, "
            f"verdict {analytic_report.verdict}"
        )
        deviation: float = float(
            np.max(np.abs(empirical.to_dataframe().values - analytic.to_dataframe().values))
        )
        info(f"Largest empirical deviation from analytic: {format_number(deviation)}")


def print_construction(record: ConstructionReportDict, out: Console = console) -> None:
    out.print(bell_data_table(BellData.from_dict(record["dataset"])))
    print_verification(record["verification"])
    entangled: list[ContextName] = record["entangled_contexts"]  # type: ignore[assignment]
    info(
        f"Entangled measurements: {', '.join(entangled)}"
        if entangled
        else "All measurements are product"
    )
