from typing import NotRequired, TypedDict

TableRows = list[list[float]]
ComplexPair = list[float]


class dotdict(dict):
    """dot.notation access to dictionary attributes"""

    __getattr__ = dict.get
    __setattr__ = dict.__setitem__
    __delattr__ = dict.__delitem__


class BellDataDict(TypedDict):
    """A `dict` structure of the `JSON` input schema for `BellData`.

    Attributes:
        tables:
            `AB`, `AB'`, `A'B` and `A'B'` keys, each a 2×2 list of
            probabilities indexed ``[i][j]`` for outcomes ``(A_i, B_j)``.
        outcomes:
            Optional outcome values for each of `A`, `A'`, `B`, `B'`,
            defaulting to ``[1, -1]``.
        subjects:
            Optional count of subjects (trials) behind every table. When
            given each probability is snapped to the nearest multiple of
            ``1 / subjects``.
        label:
            Optional free text name of the dataset.
    """

    tables: dict[str, TableRows]
    outcomes: NotRequired[dict[str, list[float]]]
    subjects: NotRequired[int]
    label: NotRequired[str]


class MarginalDeviationDict(TypedDict):
    """One marginal law comparison.

    Attributes:
        setting: outcome compared, e.g. ``"A'1"``
        side: ``"A"`` or ``"B"``
        contexts: the two contexts whose marginals are compared
        lhs: marginal probability in the first context
        rhs: marginal probability in the second context
        deviation: ``abs(lhs - rhs)``
    """

    setting: str
    side: str
    contexts: list[str]
    lhs: float
    rhs: float
    deviation: float


class FactorizationDict(TypedDict):
    factorizable: bool
    a: list[float]
    b: list[float]
    residual: float


class ClassificationReportDict(TypedDict):
    """`JSON` form of a `ClassificationReport`."""

    expectations: dict[str, float]
    chsh_fixed: float
    chsh_max: float
    marginal_deviations: list[MarginalDeviationDict]
    max_marginal_deviation: float
    factorizable: dict[str, FactorizationDict]
    verdict: str
    verdict_description: str
    tol_bell: float
    tol_marginal: float


class ProductTestDict(TypedDict):
    is_product: bool
    residual: float


class ContextModelDict(TypedDict):
    """A serialized coincidence measurement.

    Attributes:
        vectors: four basis vectors, each a list of ``[real, imag]`` pairs
        outcomes_a: outcome values of the first setting
        outcomes_b: outcome values of the second setting
        measurement_product: productness of the ON set (rank 1 projectors)
        operator_product: productness of the ±1 labelled operator
        residual: largest `abs` difference of reproduced and target tables
    """

    vectors: list[list[ComplexPair]]
    outcomes_a: list[float]
    outcomes_b: list[float]
    measurement_product: ProductTestDict
    operator_product: ProductTestDict
    residual: NotRequired[float]


class QuantumModelDict(TypedDict):
    label: str
    density_matrix: list[list[ComplexPair]]
    state_product: NotRequired[ProductTestDict]
    contexts: dict[str, ContextModelDict]


class SimulationResultDict(TypedDict):
    model: str
    trials: int
    seed: int
    parameters: dict[str, float]
    counts: dict[str, list[list[int]]]
    empirical: BellDataDict
    analytic: NotRequired[BellDataDict]


class AnalysisReportDict(TypedDict):
    """Output of `bellbox analyze`: the parsed input and its classification."""

    label: str
    dataset: BellDataDict
    classification: ClassificationReportDict


class ModelVerificationDict(TypedDict):
    """Checks of a `QuantumBellModel` against the data it represents.

    Attributes:
        chsh_expectation: ``tr(ρ B)`` of the CHSH operator
        luders_invariance: largest ``abs(ρ' - ρ)`` entry per context
        marginal_law_holds: whether the Born tables satisfy the marginal law
        reproduction_residual: largest difference of Born and target tables
        model: the serialized model
    """

    chsh_expectation: float
    luders_invariance: dict[str, float]
    marginal_law_holds: bool
    reproduction_residual: NotRequired[float]
    model: QuantumModelDict


class DemoReportDict(TypedDict):
    demo: str
    description: str
    dataset: BellDataDict
    classification: ClassificationReportDict
    verbatim: NotRequired[BellDataDict]
    verification: NotRequired[ModelVerificationDict]


class SimulationReportDict(TypedDict):
    simulation: SimulationResultDict
    classification: ClassificationReportDict
    analytic_classification: NotRequired[ClassificationReportDict]


class ConstructionReportDict(TypedDict):
    """Output of `bellbox construct`.

    Attributes:
        dataset: the tables the model reproduces
        verification: model checks, including the reproduction residual
        entangled_contexts: contexts whose ON set is not product
    """

    dataset: BellDataDict
    verification: ModelVerificationDict
    entangled_contexts: list[str]
