"""
Hilbert space models of coincidence experiments.

A `QuantumBellModel` pairs a `DensityOperator` on ${\\mathbb C}^4$ with one
`CoincidenceMeasurement` per context. Its Born tables form a `BellData`, so
every model can be fed to `bell_statistics.classify`.
"""
from dataclasses import dataclass, field
from logging import getLogger
from typing import Final, Literal, Mapping, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .bell_statistics import (
    BellData,
    InvalidProbabilitiesError,
    JointTable,
)
from .datasets import animal_acts, load_dataset
from .entanglement import (
    IDENTITY_ISO,
    ProductTestReport,
    is_product_family,
    is_product_measurement,
    is_product_state,
)
from .linalg import (
    ComplexMatrix,
    ComplexVector,
    NotNormalizedError,
    ProductIsomorphism,
    SpectralFamily,
    as_matrix,
    as_vector,
    check_hermitian,
    check_normalized,
    projector,
    tensor_product,
)
from .settings import (
    CONTEXTS,
    DEFAULT_GRID_LABELS,
    DEFAULT_OUTCOMES,
    SETTINGS_PER_SIDE,
    ContextName,
    SettingName,
    settings,
)
from .types import ComplexPair, ContextModelDict, QuantumModelDict

logger = getLogger("rich")

POSITIVITY_TOL: Final[float] = 1e-10
DEFAULT_MODEL_STATE: Final[tuple[float, ...]] = (0.5, 0.5, 0.5, 0.5)
HALF: Final[float] = float(np.sqrt(0.5))


class NotPositiveError(ValueError):
    """A density operator has a negative eigenvalue."""


def _complex_pairs(values: ArrayLike) -> list[ComplexPair]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values).ravel()]


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A state on ${\\mathbb C}^4$ (or ${\\mathbb C}^2$): hermitian, positive, trace one.

    Raises:
        NotHermitianError: ``matrix`` is not hermitian within 1e-10
        NotPositiveError: an eigenvalue is below ``-1e-10``
        NotNormalizedError: the trace is not 1 within 1e-10

    Example:
        ```pycon
        >>> rho = DensityOperator.pure([1, 0, 0, 0])
        >>> round(rho.purity(), 12)
        1.0
        >>> round(DensityOperator.maximally_mixed().purity(), 12)
        0.25

        ```
    """

    matrix: ComplexMatrix

    def __post_init__(self) -> None:
        matrix: ComplexMatrix = check_hermitian(as_matrix(self.matrix))
        trace: float = float(np.trace(matrix).real)
        if abs(trace - 1.0) > settings.NORMALIZED_TOL:
            raise NotNormalizedError(f"Density operator has trace {trace}, not 1")
        smallest: float = float(np.linalg.eigvalsh(matrix).min())
        if smallest < -POSITIVITY_TOL:
            raise NotPositiveError(
                f"Density operator has a negative eigenvalue {smallest}"
            )
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def pure(cls, state: ArrayLike) -> "DensityOperator":
        """``|p><p|`` for a unit vector ``state``."""
        return cls(projector(check_normalized(state)))

    @classmethod
    def mixture(
        cls, weights: Sequence[float], states: Sequence[ArrayLike]
    ) -> "DensityOperator":
        """``sum_k w_k |p_k><p_k|`` for unit vectors ``states``."""
        if len(weights) != len(states):
            raise ValueError(f"{len(weights)} weights for {len(states)} states")
        projectors: list[ComplexMatrix] = [
            projector(check_normalized(s)) for s in states
        ]
        return cls(
            sum(
                (w * p for w, p in zip(weights, projectors)),
                start=np.zeros_like(projectors[0]),
            )
        )

    @classmethod
    def maximally_mixed(cls, dim: int = 4) -> "DensityOperator":
        return cls(np.eye(dim, dtype=np.complex128) / dim)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def expectation(self, operator: ArrayLike) -> float:
        """``tr(ρ M)`` for a hermitian ``M``."""
        return float(np.trace(self.matrix @ as_matrix(operator, dim=self.dim)).real)

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def partial_trace(
        self, keep: Literal["A", "B"] = "A", iso: ProductIsomorphism = IDENTITY_ISO
    ) -> "DensityOperator":
        """Reduced state of one side of ``I ρ I^-1``.

        Example:
            ```pycon
            >>> singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
            >>> reduced = DensityOperator.pure(singlet).partial_trace("A")
            >>> (np.round(reduced.matrix.real, 12) + 0.0).tolist()
            [[0.5, 0.0], [0.0, 0.5]]

            ```
        """
        tensor: ComplexMatrix = iso.apply(as_matrix(self.matrix, dim=4)).reshape(
            2, 2, 2, 2
        )
        if keep == "A":
            return DensityOperator(np.einsum("ijkj->ik", tensor))
        return DensityOperator(np.einsum("ijil->jl", tensor))

    def is_close(self, other: "DensityOperator", tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.matrix - other.matrix)) <= tol)


@dataclass(frozen=True, eq=False)
class CoincidenceMeasurement:
    """A four outcome measurement whose projector ``k`` is outcome ``(i, j)``, ``k = 2i + j``.

    Attributes:
        family: the four projectors on the ``(11, 12, 21, 22)`` grid
        outcomes_a: values of the first side outcomes
        outcomes_b: values of the second side outcomes
        label: the context, e.g. ``"AB'"``
    """

    family: SpectralFamily
    outcomes_a: tuple[float, float] = DEFAULT_OUTCOMES
    outcomes_b: tuple[float, float] = DEFAULT_OUTCOMES
    label: str = ""

    def __post_init__(self) -> None:
        self.family.check(outcomes=4)

    @classmethod
    def from_basis(
        cls,
        vectors: ArrayLike | Sequence[ArrayLike],
        outcomes_a: tuple[float, float] = DEFAULT_OUTCOMES,
        outcomes_b: tuple[float, float] = DEFAULT_OUTCOMES,
        label: str = "",
    ) -> "CoincidenceMeasurement":
        """Build from four ON vectors (or a matrix of column vectors) on the grid."""
        labels: tuple[float, ...] = tuple(
            a * b for a in outcomes_a for b in outcomes_b
        )
        return cls(
            family=SpectralFamily.from_basis(vectors, labels),
            outcomes_a=outcomes_a,
            outcomes_b=outcomes_b,
            label=label,
        )

    @property
    def labels(self) -> tuple[float, float, float, float]:
        """Product outcome values ``λ(A_i) λ(B_j)`` on the grid."""
        a1, a2 = self.outcomes_a
        b1, b2 = self.outcomes_b
        return a1 * b1, a1 * b2, a2 * b1, a2 * b2

    def operator(self) -> ComplexMatrix:
        """The self-adjoint ``sum_k λ_k P_k``."""
        return sum(
            (value * p for value, p in zip(self.labels, self.family.projectors)),
            start=np.zeros((4, 4), dtype=np.complex128),
        )

    def product_reports(
        self, iso: ProductIsomorphism = IDENTITY_ISO, tol: float = settings.TOL_PRODUCT
    ) -> tuple[ProductTestReport, ProductTestReport]:
        """Productness of the projector set and of the labelled operator."""
        return (
            is_product_family(self.family, iso, tol),
            is_product_measurement(self.operator(), iso, tol),
        )


def _as_measurement(m: CoincidenceMeasurement | SpectralFamily) -> CoincidenceMeasurement:
    if isinstance(m, CoincidenceMeasurement):
        return m
    return CoincidenceMeasurement(family=m)


def born_table(
    state: DensityOperator, measurement: CoincidenceMeasurement | SpectralFamily
) -> JointTable:
    """Born probabilities ``tr(ρ P_k)`` arranged on the ``(i, j)`` grid.

    Example:
        ```pycon
        >>> standard = SpectralFamily.from_basis(np.eye(4), (1, -1, -1, 1))
        >>> born_table(DensityOperator.maximally_mixed(), standard).flat()
        (0.25, 0.25, 0.25, 0.25)

        ```
    """
    coincidence: CoincidenceMeasurement = _as_measurement(measurement)
    probabilities: NDArray[np.float64] = np.array(
        [np.trace(state.matrix @ p).real for p in coincidence.family.projectors]
    )
    return JointTable(
        p=np.maximum(probabilities, 0.0).reshape(2, 2),
        outcomes_a=coincidence.outcomes_a,
        outcomes_b=coincidence.outcomes_b,
        label=coincidence.label,
    )


def luders_update(
    state: DensityOperator, measurement: CoincidenceMeasurement | SpectralFamily
) -> DensityOperator:
    """Nonselective post measurement state ``sum_k P_k ρ P_k``."""
    family: SpectralFamily = _as_measurement(measurement).family
    return DensityOperator(
        sum(
            (p @ state.matrix @ p for p in family.projectors),
            start=np.zeros_like(state.matrix),
        )
    )


@dataclass(frozen=True, eq=False)
class QuantumBellModel:
    """A state and the four coincidence measurements of a CHSH experiment.

    Attributes:
        state: the density operator
        measurements: one `CoincidenceMeasurement` per context
        alpha: free phase of the model, radians
        beta: free phase of the model, radians
        label: name of the model
        vector: the state vector when the state is pure
    """

    state: DensityOperator
    measurements: Mapping[ContextName, CoincidenceMeasurement]
    alpha: float = 0.0
    beta: float = 0.0
    label: str = ""
    vector: ComplexVector | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        missing: list[str] = [c for c in CONTEXTS if c not in self.measurements]
        if missing:
            raise ValueError(f"Missing measurements for {', '.join(missing)}")

    def born_tables(self) -> BellData:
        return BellData(
            tables={c: born_table(self.state, m) for c, m in self.measurements.items()},
            label=self.label,
        )

    def chsh_operator(self) -> ComplexMatrix:
        """``B = E_A'B' + E_A'B + E_AB' - E_AB``."""
        operators: dict[ContextName, ComplexMatrix] = {
            c: m.operator() for c, m in self.measurements.items()
        }
        return operators["A'B'"] + operators["A'B"] + operators["AB'"] - operators["AB"]

    def chsh_expectation(self) -> float:
        """``tr(ρ B)``."""
        return self.state.expectation(self.chsh_operator())

    def luders_states(self) -> dict[ContextName, DensityOperator]:
        return {c: luders_update(self.state, m) for c, m in self.measurements.items()}

    def luders_invariance(self) -> dict[ContextName, float]:
        """Largest entry of ``abs(ρ' - ρ)`` after each coincidence measurement."""
        return {
            c: float(np.max(np.abs(updated.matrix - self.state.matrix)))
            for c, updated in self.luders_states().items()
        }

    def state_report(
        self, iso: ProductIsomorphism = IDENTITY_ISO, tol: float = settings.TOL_PRODUCT
    ) -> ProductTestReport | None:
        return None if self.vector is None else is_product_state(self.vector, iso, tol)

    def to_dict(
        self,
        iso: ProductIsomorphism = IDENTITY_ISO,
        tol: float = settings.TOL_PRODUCT,
        target: BellData | None = None,
    ) -> QuantumModelDict:
        """Serialize the model with per context productness.

        Args:
            iso: isomorphism the product tests refer to
            tol: product test tolerance
            target: data the model was built for; adds a `residual` per context
        """
        tables: BellData = self.born_tables()
        contexts: dict[str, ContextModelDict] = {}
        for context, measurement in self.measurements.items():
            family_report, operator_report = measurement.product_reports(iso, tol)
            record: ContextModelDict = {
                "vectors": [
                    _complex_pairs(projector_vector(p))
                    for p in measurement.family.projectors
                ]
                if measurement.family.vectors is None
                else [_complex_pairs(v) for v in measurement.family.vectors],
                "outcomes_a": list(measurement.outcomes_a),
                "outcomes_b": list(measurement.outcomes_b),
                "measurement_product": family_report.to_dict(),  # type: ignore[typeddict-item]
                "operator_product": operator_report.to_dict(),  # type: ignore[typeddict-item]
            }
            if target is not None:
                record["residual"] = float(
                    np.max(np.abs(tables[context].p - target[context].p))
                )
            contexts[context] = record
        model: QuantumModelDict = {
            "label": self.label,
            "density_matrix": [_complex_pairs(row) for row in self.state.matrix],
            "contexts": contexts,
        }
        state_report: ProductTestReport | None = self.state_report(iso, tol)
        if state_report is not None:
            model["state_product"] = state_report.to_dict()  # type: ignore[typeddict-item]
        return model


def projector_vector(p: ArrayLike) -> ComplexVector:
    """A unit vector spanning the range of a rank one projector."""
    matrix: ComplexMatrix = as_matrix(p)
    column: int = int(np.argmax(np.abs(np.diag(matrix))))
    vector: ComplexVector = matrix[:, column]
    return vector / np.linalg.norm(vector)


def reproduction_residual(model: QuantumBellModel, data: BellData) -> float:
    """Largest ``abs`` difference between the model's Born tables and ``data``."""
    tables: BellData = model.born_tables()
    return max(float(np.max(np.abs(tables[c].p - data[c].p))) for c in CONTEXTS)


def nonlocal_box_model(alpha: float = 0.0, beta: float = 0.0) -> QuantumBellModel:
    """The mixture of transparent and non transparent water with entangled measurements.

    ``ρ = ½|p><p| + ½|q><q|`` with ``p = (0, √½ e^{iα}, √½ e^{iβ}, 0)`` and
    ``q = (0, √½ e^{iα}, -√½ e^{iβ}, 0)``. `AB` measures in the standard
    basis; `AB'`, `A'B` and `A'B'` share the ON set ``{p, e_1, e_4, q}``.

    Example:
        ```pycon
        >>> model = nonlocal_box_model()
        >>> round(model.chsh_expectation(), 12)
        4.0
        >>> np.round(np.diag(model.chsh_operator()).real, 12).tolist()
        [-4.0, 4.0, 4.0, -4.0]

        ```
    """
    transparent: ComplexVector = HALF * np.array(
        [0, np.exp(1j * alpha), np.exp(1j * beta), 0], dtype=np.complex128
    )
    opaque: ComplexVector = HALF * np.array(
        [0, np.exp(1j * alpha), -np.exp(1j * beta), 0], dtype=np.complex128
    )
    standard: ComplexMatrix = np.eye(4, dtype=np.complex128)
    entangled_set: list[ComplexVector] = [
        transparent,
        standard[:, 0],
        standard[:, 3],
        opaque,
    ]
    measurements: dict[ContextName, CoincidenceMeasurement] = {
        "AB": CoincidenceMeasurement.from_basis(standard, label="AB")
    }
    for context in CONTEXTS[1:]:
        measurements[context] = CoincidenceMeasurement.from_basis(
            entangled_set, label=context
        )
    return QuantumBellModel(
        state=DensityOperator.mixture((0.5, 0.5), (transparent, opaque)),
        measurements=measurements,
        alpha=alpha,
        beta=beta,
        label="nonlocal-box",
    )


def _check_probability_vector(q: ArrayLike) -> NDArray[np.float64]:
    try:
        probabilities: NDArray[np.float64] = np.asarray(q, dtype=np.float64).ravel()
    except (TypeError, ValueError) as err:
        raise InvalidProbabilitiesError("Probabilities must be numbers") from err
    if probabilities.shape != (4,):
        raise InvalidProbabilitiesError(
            f"Expected 4 probabilities, got {probabilities.shape[0]}"
        )
    if np.any(probabilities < -settings.TABLE_SUM_TOL):
        raise InvalidProbabilitiesError(
            f"Negative probabilities: {probabilities.tolist()}"
        )
    if abs(probabilities.sum() - 1.0) > settings.TABLE_SUM_TOL:
        raise InvalidProbabilitiesError(
            f"Probabilities sum to {probabilities.sum()}, not 1"
        )
    return np.maximum(probabilities, 0.0)


def basis_for_probabilities(
    state: ArrayLike,
    q: ArrayLike,
    labels: Sequence[float] = DEFAULT_GRID_LABELS,
) -> SpectralFamily:
    """An ON basis ``{e_k}`` with ``|<e_k|state>|² = q_k``.

    The basis is the columns of the Householder reflection carrying ``state``
    onto ``e^{iφ} (√q_1, √q_2, √q_3, √q_4)``, the phase chosen so that the
    overlap of the two is real.

    Raises:
        NotNormalizedError: ``state`` is not a unit vector
        InvalidProbabilitiesError: ``q`` is not a probability vector

    Example:
        ```pycon
        >>> family = basis_for_probabilities([0.5, 0.5, 0.5, 0.5], [0.1, 0.2, 0.3, 0.4])
        >>> state = np.full(4, 0.5)
        >>> [round(abs(np.vdot(v, state)) ** 2, 12) for v in family.vectors]
        [0.1, 0.2, 0.3, 0.4]

        ```
    """
    vector: ComplexVector = check_normalized(state, dim=4)
    target: ComplexVector = np.sqrt(_check_probability_vector(q)).astype(np.complex128)
    overlap: complex = complex(np.vdot(target, vector))
    rotated: ComplexVector = target * np.exp(1j * np.angle(overlap))
    w: ComplexVector = vector - rotated
    norm_squared: float = float(np.vdot(w, w).real)
    reflection: ComplexMatrix = (
        np.eye(4, dtype=np.complex128)
        if norm_squared < settings.NORMALIZED_TOL**2
        else np.eye(4) - 2 * np.outer(w, np.conj(w)) / norm_squared
    )
    return SpectralFamily.from_basis(reflection, labels)


def model_for_bell_data(
    data: BellData, state: ArrayLike | None = None, label: str = ""
) -> QuantumBellModel:
    """A pure state model reproducing all four tables of ``data``.

    Each context gets the `basis_for_probabilities` basis of its table, so
    the measurements are in general entangled even when ``state`` is product.
    """
    vector: ComplexVector = check_normalized(
        DEFAULT_MODEL_STATE if state is None else state, dim=4
    )
    measurements: dict[ContextName, CoincidenceMeasurement] = {}
    for context, table in data.tables.items():
        labels: tuple[float, ...] = tuple(
            a * b for a in table.outcomes_a for b in table.outcomes_b
        )
        measurements[context] = CoincidenceMeasurement(
            family=basis_for_probabilities(vector, table.flat(), labels),
            outcomes_a=table.outcomes_a,
            outcomes_b=table.outcomes_b,
            label=context,
        )
    model: QuantumBellModel = QuantumBellModel(
        state=DensityOperator.pure(vector),
        measurements=measurements,
        label=label or data.label,
        vector=vector,
    )
    logger.debug(
        f"Built {model.label or 'model'} with reproduction residual "
        f"{reproduction_residual(model, data):.3e}"
    )
    return model


def animal_acts_model(state: ArrayLike | None = None) -> QuantumBellModel:
    """Entangled measurement model of the Animal Acts data.

    Example:
        ```pycon
        >>> model = animal_acts_model()
        >>> is_product_state(model.vector).is_product
        True

        ```
    """
    return model_for_bell_data(animal_acts(), state, label="animal-acts")


def vessels_model(state: ArrayLike | None = None) -> QuantumBellModel:
    """Model of the vessels of water with the entangled state ``(0, √½, √½, 0)``.

    With this state `AB` is measured in the standard (product) basis while
    `AB'`, `A'B` and `A'B'` need entangled measurements.
    """
    return model_for_bell_data(
        load_dataset("vessels"),
        (0.0, HALF, HALF, 0.0) if state is None else state,
        label="vessels",
    )


def spin_basis(angle: float) -> ComplexMatrix:
    """Columns are the ``+1`` and ``-1`` eigenvectors of ``cos θ σ_z + sin θ σ_x``."""
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def product_coincidence_measurement(
    basis_a: ArrayLike,
    basis_b: ArrayLike,
    iso: ProductIsomorphism = IDENTITY_ISO,
    outcomes_a: tuple[float, float] = DEFAULT_OUTCOMES,
    outcomes_b: tuple[float, float] = DEFAULT_OUTCOMES,
    label: str = "",
) -> CoincidenceMeasurement:
    """Product measurement ``I^-1 (|a_i><a_i| ⊗ |b_j><b_j|) I`` from local ON bases.

    ``basis_a`` and ``basis_b`` are 2×2 matrices whose columns are ``a_1, a_2``
    and ``b_1, b_2``.
    """
    a: ComplexMatrix = as_matrix(basis_a, dim=2)
    b: ComplexMatrix = as_matrix(basis_b, dim=2)
    vectors: list[ComplexVector] = [
        iso.inverse(tensor_product(a[:, i], b[:, j]))
        for i in range(2)
        for j in range(2)
    ]
    return CoincidenceMeasurement.from_basis(
        vectors, outcomes_a=outcomes_a, outcomes_b=outcomes_b, label=label
    )


def local_bell_model(
    state: ArrayLike,
    bases: Mapping[SettingName, ArrayLike],
    iso: ProductIsomorphism = IDENTITY_ISO,
    label: str = "",
) -> QuantumBellModel:
    """Customary model: one local ON basis per setting, product coincidence measurements.

    Args:
        state: a unit vector of ${\\mathbb C}^4$
        bases: 2×2 matrices with ON columns for `A`, `A'`, `B` and `B'`
        iso: isomorphism the measurements are product for
        label: name of the model
    """
    vector: ComplexVector = check_normalized(state, dim=4)
    measurements: dict[ContextName, CoincidenceMeasurement] = {
        context: product_coincidence_measurement(
            bases[SETTINGS_PER_SIDE[context][0]],
            bases[SETTINGS_PER_SIDE[context][1]],
            iso,
            label=context,
        )
        for context in CONTEXTS
    }
    return QuantumBellModel(
        state=DensityOperator.pure(vector),
        measurements=measurements,
        label=label,
        vector=vector,
    )


def singlet_spin_model(angles: Mapping[SettingName, float]) -> QuantumBellModel:
    """Singlet state with spin measurements in a plane, angles in radians.

    Its Born tables equal those of the connected spheres for every angle.

    Example:
        ```pycon
        >>> model = singlet_spin_model({"A": 0, "A'": 0, "B": 0, "B'": 0})
        >>> [round(v, 12) + 0.0 for v in model.born_tables()["AB"].flat()]
        [0.0, 0.5, 0.5, 0.0]

        ```
    """
    singlet: ComplexVector = as_vector([0.0, HALF, -HALF, 0.0])
    return local_bell_model(
        singlet,
        {setting: spin_basis(angle) for setting, angle in angles.items()},
        label="singlet-spin",
    )


def luders_marginals(
    model: QuantumBellModel, iso: ProductIsomorphism = IDENTITY_ISO
) -> dict[ContextName, tuple[DensityOperator, DensityOperator]]:
    """Reduced states ``(tr_B ρ', tr_A ρ')`` of each Lüders updated state."""
    return {
        context: (updated.partial_trace("A", iso), updated.partial_trace("B", iso))
        for context, updated in model.luders_states().items()
    }
