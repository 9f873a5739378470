"""
Product versus entangled states, measurements and evolutions.

Productness is always relative to a `ProductIsomorphism`. States are tested
with a Schmidt decomposition; operators by realigning ``I M I^-1`` so that
product operators become rank one matrices (operator Schmidt rank).
"""
from dataclasses import dataclass
from logging import getLogger
from typing import TYPE_CHECKING, Any, Final, NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .linalg import (
    ComplexMatrix,
    ComplexVector,
    InvalidFamilyError,
    ProductIsomorphism,
    SpectralFamily,
    as_matrix,
    check_hermitian,
    check_normalized,
    check_unitary,
    complete_basis,
    dagger,
    kron,
    spectral_decomposition,
)
from .settings import ContextName, settings

if TYPE_CHECKING:
    from .bell_statistics import BellData

logger = getLogger("rich")

IDENTITY_ISO: Final[ProductIsomorphism] = ProductIsomorphism.identity()
COLLAPSE_TOL: Final[float] = 1e-10


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Schmidt form ``sum_k coefficients[k] * left[:, k] ⊗ right[:, k]``.

    Attributes:
        coefficients: two nonnegative reals sorted descending
        left_vectors: 2×2 matrix whose columns are the first factor vectors
        right_vectors: 2×2 matrix whose columns are the second factor vectors
    """

    coefficients: NDArray[np.float64]
    left_vectors: ComplexMatrix
    right_vectors: ComplexMatrix

    def reconstruct(self) -> ComplexVector:
        """Rebuild the (isomorphism mapped) state from its Schmidt form."""
        return sum(
            (
                c * np.kron(self.left_vectors[:, k], self.right_vectors[:, k])
                for k, c in enumerate(self.coefficients)
            ),
            start=np.zeros(4, dtype=np.complex128),
        )


@dataclass(frozen=True)
class ProductTestReport:
    """Outcome of a product test.

    Attributes:
        is_product: whether ``residual <= tolerance``
        residual: distance to the nearest product object
        tolerance: the tolerance the test used
        witnesses: the factor pair when `is_product`, else `None`
    """

    is_product: bool
    residual: float
    tolerance: float
    witnesses: tuple[Any, Any] | None = None

    def to_dict(self) -> dict[str, bool | float]:
        return {"is_product": self.is_product, "residual": self.residual}


class OperatorSchmidtRank(NamedTuple):
    rank: int
    residual: float


class CollapseFactorization(NamedTuple):
    """Collapse probabilities of a four outcome measurement and their marginals.

    Attributes:
        factorizes: whether ``p[i, j] == a[i] * b[j]`` within tolerance
        probabilities: 2×2 collapse probabilities on the ``(i, j)`` grid
        a: marginal probabilities of the first factor outcomes
        b: marginal probabilities of the second factor outcomes
        residual: largest ``abs(p[i, j] - a[i] * b[j])``
        state_is_product: whether the state is product for the isomorphism used
    """

    factorizes: bool
    probabilities: NDArray[np.float64]
    a: NDArray[np.float64]
    b: NDArray[np.float64]
    residual: float
    state_is_product: bool


def schmidt_decompose(
    state: ArrayLike, iso: ProductIsomorphism = IDENTITY_ISO
) -> SchmidtDecomposition:
    """Schmidt decomposition of a normalized state with respect to ``iso``.

    Raises:
        NotNormalizedError: ``state`` is not a unit vector

    Example:
        ```pycon
        >>> singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
        >>> np.round(schmidt_decompose(singlet).coefficients, 12).tolist()
        [0.707106781187, 0.707106781187]
        >>> np.round(schmidt_decompose([1, 0, 0, 0]).coefficients, 12).tolist()
        [1.0, 0.0]

        ```
    """
    vector: ComplexVector = check_normalized(state, dim=4)
    amplitudes: ComplexMatrix = iso.apply(vector).reshape(2, 2)
    u, s, vh = np.linalg.svd(amplitudes)
    return SchmidtDecomposition(
        coefficients=s, left_vectors=u, right_vectors=vh.T.copy()
    )


def is_product_state(
    state: ArrayLike,
    iso: ProductIsomorphism = IDENTITY_ISO,
    tol: float = settings.TOL_PRODUCT,
) -> ProductTestReport:
    """Whether ``state`` factorizes as ``p_a ⊗ p_b`` with respect to ``iso``.

    The residual is the second Schmidt coefficient.

    Example:
        ```pycon
        >>> singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
        >>> report = is_product_state(singlet)
        >>> report.is_product, round(report.residual, 12)
        (False, 0.707106781187)
        >>> iso = isomorphism_for_state(singlet)
        >>> is_product_state(singlet, iso).is_product
        True

        ```
    """
    decomposition: SchmidtDecomposition = schmidt_decompose(state, iso)
    residual: float = float(decomposition.coefficients[1])
    is_product: bool = residual <= tol
    witnesses: tuple[ComplexVector, ComplexVector] | None = (
        (
            decomposition.left_vectors[:, 0] * decomposition.coefficients[0],
            decomposition.right_vectors[:, 0],
        )
        if is_product
        else None
    )
    return ProductTestReport(
        is_product=is_product, residual=residual, tolerance=tol, witnesses=witnesses
    )


def isomorphism_for_state(state: ArrayLike) -> ProductIsomorphism:
    """Return an isomorphism under which ``state`` is the product ``c_1 ⊗ d_1``.

    Any state is product for a suitable isomorphism: complete it to an ON
    basis and identify that basis with the product basis.
    """
    return ProductIsomorphism(complete_basis(check_normalized(state, dim=4)))


def realign(m: ArrayLike, iso: ProductIsomorphism = IDENTITY_ISO) -> ComplexMatrix:
    """Realignment ``R[(i,k),(j,l)] = (I M I^-1)[(i,j),(k,l)]``.

    ``X ⊗ Y`` realigns to the rank one matrix ``vec(X) vec(Y)^T``.
    """
    mapped: ComplexMatrix = iso.apply(as_matrix(m, dim=4))
    return mapped.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)


def _realigned_svd(
    m: ArrayLike, iso: ProductIsomorphism
) -> tuple[ComplexMatrix, NDArray[np.float64], ComplexMatrix]:
    return np.linalg.svd(realign(m, iso))


def operator_schmidt_rank(
    m: ArrayLike,
    iso: ProductIsomorphism = IDENTITY_ISO,
    tol: float = settings.TOL_PRODUCT,
) -> OperatorSchmidtRank:
    """Operator Schmidt rank of ``m`` and its distance to the nearest product operator.

    Rank 1 means ``I M I^-1 = X ⊗ Y``. The residual is the Frobenius norm of
    the realigned matrix beyond its leading singular value.

    Example:
        ```pycon
        >>> swap = np.eye(4)[[0, 2, 1, 3]]
        >>> operator_schmidt_rank(swap).rank
        4
        >>> operator_schmidt_rank(np.diag([1, -1, -1, 1])).rank
        1

        ```
    """
    _, s, _ = _realigned_svd(m, iso)
    return OperatorSchmidtRank(
        rank=int(np.sum(s > tol)), residual=float(np.sqrt(np.sum(s[1:] ** 2)))
    )


def operator_factors(
    m: ArrayLike, iso: ProductIsomorphism = IDENTITY_ISO
) -> tuple[ComplexMatrix, ComplexMatrix, float]:
    """Nearest product factors ``X, Y`` of ``I M I^-1`` and the realignment residual."""
    u, s, vh = _realigned_svd(m, iso)
    scale: float = float(np.sqrt(s[0]))
    x: ComplexMatrix = scale * u[:, 0].reshape(2, 2)
    y: ComplexMatrix = scale * vh[0, :].reshape(2, 2)
    return x, y, float(np.sqrt(np.sum(s[1:] ** 2)))


def _sign_of_largest(x: ComplexMatrix) -> complex:
    """Unit factor making the largest-magnitude entry of ``x`` point along +1."""
    entry: complex = complex(x.flat[int(np.argmax(np.abs(x)))])
    if abs(entry.real) >= abs(entry.imag):
        return 1.0 if entry.real >= 0 else -1.0
    return 1.0 if entry.imag >= 0 else -1.0


def hermitian_factors(
    x: ComplexMatrix, y: ComplexMatrix
) -> tuple[ComplexMatrix, ComplexMatrix, float]:
    """Move the free scalar of ``X ⊗ Y`` so that both factors are hermitian.

    For ``X = e^{iθ} H`` with ``H`` hermitian, ``tr(X X) / ||X||² = e^{2iθ}``.
    Returns the rephased factors and their largest distance from hermiticity.
    """
    norm_squared: float = float(np.sum(np.abs(x) ** 2))
    if norm_squared == 0:
        return x, y, 0.0
    z: complex = complex(np.trace(x @ x)) / norm_squared
    phase: complex = np.sqrt(z) / np.sqrt(abs(z)) if abs(z) > 0 else 1.0
    x_h: ComplexMatrix = x / phase
    y_h: ComplexMatrix = y * phase
    sign: complex = _sign_of_largest(x_h)
    x_h, y_h = x_h * sign, y_h * sign
    residual: float = max(
        float(np.linalg.norm(x_h - dagger(x_h))),
        float(np.linalg.norm(y_h - dagger(y_h))),
    )
    return x_h, y_h, residual


def unitary_factors(
    x: ComplexMatrix, y: ComplexMatrix
) -> tuple[ComplexMatrix, ComplexMatrix, float]:
    """Rescale ``X ⊗ Y`` into two unitaries with equal determinant phases."""
    scale: float = float(np.linalg.norm(x)) / np.sqrt(2)
    if scale == 0:
        return x, y, float("inf")
    x_u: ComplexMatrix = x / scale
    y_u: ComplexMatrix = y * scale
    psi: float = (np.angle(np.linalg.det(x_u)) - np.angle(np.linalg.det(y_u))) / 4
    x_u, y_u = x_u * np.exp(-1j * psi), y_u * np.exp(1j * psi)
    identity: ComplexMatrix = np.eye(2)
    residual: float = max(
        float(np.linalg.norm(x_u @ dagger(x_u) - identity)),
        float(np.linalg.norm(y_u @ dagger(y_u) - identity)),
    )
    return x_u, y_u, residual


def is_product_measurement(
    m: ArrayLike,
    iso: ProductIsomorphism = IDENTITY_ISO,
    tol: float = settings.TOL_PRODUCT,
) -> ProductTestReport:
    """Whether the self-adjoint ``m`` is ``I^-1 (E_a ⊗ E_b) I`` for hermitian ``E_a, E_b``.

    Raises:
        NotHermitianError: ``m`` is not hermitian

    Example:
        ```pycon
        >>> report = is_product_measurement(np.diag([1, -1, -1, 1]))
        >>> report.is_product
        True
        >>> np.round(np.diag(report.witnesses[0]).real, 12).tolist()
        [1.0, -1.0]
        >>> is_product_measurement(np.eye(4)).is_product
        True

        ```
    """
    matrix: ComplexMatrix = check_hermitian(m)
    x, y, realign_residual = operator_factors(matrix, iso)
    x_h, y_h, hermitian_residual = hermitian_factors(x, y)
    residual: float = max(realign_residual, hermitian_residual)
    is_product: bool = residual <= tol
    return ProductTestReport(
        is_product=is_product,
        residual=residual,
        tolerance=tol,
        witnesses=(x_h, y_h) if is_product else None,
    )


def is_product_unitary(
    u: ArrayLike,
    iso: ProductIsomorphism = IDENTITY_ISO,
    tol: float = settings.TOL_PRODUCT,
) -> ProductTestReport:
    """Whether the unitary ``u`` is ``I^-1 (U_a ⊗ U_b) I`` for unitary ``U_a, U_b``.

    Raises:
        NotUnitaryError: ``u`` is not unitary

    Example:
        ```pycon
        >>> swap = np.eye(4)[[0, 2, 1, 3]]
        >>> is_product_unitary(swap).is_product
        False

        ```
    """
    matrix: ComplexMatrix = check_unitary(u)
    x, y, realign_residual = operator_factors(matrix, iso)
    x_u, y_u, unitary_residual = unitary_factors(x, y)
    residual: float = max(realign_residual, unitary_residual)
    is_product: bool = residual <= tol
    return ProductTestReport(
        is_product=is_product,
        residual=residual,
        tolerance=tol,
        witnesses=(x_u, y_u) if is_product else None,
    )


def is_product_family(
    family: SpectralFamily,
    iso: ProductIsomorphism = IDENTITY_ISO,
    tol: float = settings.TOL_PRODUCT,
) -> ProductTestReport:
    """Whether every projector of ``family`` is a product projector.

    This is the projector level notion of a product measurement: a
    coincidence measurement given by an ON set is product when each of its
    outcome projectors factorizes. Witnesses are the factor pairs of each
    projector.

    Example:
        ```pycon
        >>> h = np.sqrt(0.5)
        >>> entangled_set = SpectralFamily.from_basis(
        ...     [[0, h, h, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, h, -h, 0]],
        ...     (1, -1, -1, 1))
        >>> is_product_family(entangled_set).is_product
        False
        >>> standard = SpectralFamily.from_basis(np.eye(4), (1, -1, -1, 1))
        >>> is_product_family(standard).is_product
        True

        ```
    """
    family.check()
    factors: list[tuple[ComplexMatrix, ComplexMatrix]] = []
    residual: float = 0.0
    for projection in family.projectors:
        x, y, realign_residual = operator_factors(projection, iso)
        x_h, y_h, hermitian_residual = hermitian_factors(x, y)
        residual = max(residual, realign_residual, hermitian_residual)
        factors.append((x_h, y_h))
    is_product: bool = residual <= tol
    return ProductTestReport(
        is_product=is_product,
        residual=residual,
        tolerance=tol,
        witnesses=tuple(factors) if is_product else None,  # type: ignore[arg-type]
    )


def refine_family(
    family: SpectralFamily,
    factor_a: ArrayLike,
    factor_b: ArrayLike,
    iso: ProductIsomorphism = IDENTITY_ISO,
    tol: float = settings.TOL_PRODUCT,
) -> list[ComplexMatrix]:
    """Split degenerate projectors along the eigenprojectors of the local factors.

    Each projector ``P`` of ``family`` is intersected with every
    ``I^-1 (P_a ⊗ P_b) I`` built from the spectral families of ``factor_a``
    and ``factor_b``; non zero intersections are returned. For a product
    measurement the pieces are the product projectors of its spectral family.
    """
    local_a: SpectralFamily = spectral_decomposition(factor_a)
    local_b: SpectralFamily = spectral_decomposition(factor_b)
    pieces: list[ComplexMatrix] = []
    for projection in family.projectors:
        for p_a in local_a.projectors:
            for p_b in local_b.projectors:
                piece: ComplexMatrix = projection @ iso.inverse(kron(p_a, p_b))
                if np.linalg.norm(piece) > tol:
                    pieces.append(piece)
    return pieces


def evolution_between(
    family_from: SpectralFamily, family_to: SpectralFamily
) -> ComplexMatrix:
    """Unitary ``sum_k |to_k><from_k|`` carrying one ON measurement basis onto another.

    Raises:
        InvalidFamilyError: either family was not built from an ON basis
    """
    if family_from.vectors is None or family_to.vectors is None:
        raise InvalidFamilyError("Both families must be built from ON bases")
    return sum(
        (
            np.outer(to_vector, np.conj(from_vector))
            for from_vector, to_vector in zip(family_from.vectors, family_to.vectors)
        ),
        start=np.zeros((4, 4), dtype=np.complex128),
    )


def collapse_factorization(
    state: ArrayLike,
    family: SpectralFamily,
    iso: ProductIsomorphism = IDENTITY_ISO,
    tol: float = COLLAPSE_TOL,
) -> CollapseFactorization:
    """Collapse probabilities ``<p|P_k|p>`` and whether they factorize as ``p(A_i) p(B_j)``.

    Projector ``k`` of ``family`` is outcome ``(i, j)`` with ``k = 2 * i + j``.

    Raises:
        InvalidFamilyError: ``family`` is not a valid four outcome family

    Example:
        ```pycon
        >>> standard = SpectralFamily.from_basis(np.eye(4), (1, -1, -1, 1))
        >>> singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
        >>> check = collapse_factorization(singlet, standard)
        >>> check.factorizes
        False
        >>> (np.round(check.probabilities, 12) + 0.0).ravel().tolist()
        [0.0, 0.5, 0.5, 0.0]

        ```
    """
    vector: ComplexVector = check_normalized(state, dim=4)
    family.check(outcomes=4)
    probabilities: NDArray[np.float64] = np.array(
        [np.vdot(vector, p @ vector).real for p in family.projectors]
    ).reshape(2, 2)
    a: NDArray[np.float64] = probabilities.sum(axis=1)
    b: NDArray[np.float64] = probabilities.sum(axis=0)
    residual: float = float(np.max(np.abs(probabilities - np.outer(a, b))))
    return CollapseFactorization(
        factorizes=residual <= tol,
        probabilities=probabilities,
        a=a,
        b=b,
        residual=residual,
        state_is_product=is_product_state(vector, iso).is_product,
    )


def product_obstructions(
    data: "BellData", tol: float = settings.TOL_MARGINAL
) -> list[tuple[ContextName, ContextName]]:
    """Pairs of contexts that no single isomorphism can render both product.

    Two coincidence measurements sharing a setting can only both be product
    for a common isomorphism if the marginal law holds between them, so each
    pair with a marginal deviation above ``tol`` is an obstruction.
    """
    from .bell_statistics import marginal_law_audit

    pairs: list[tuple[ContextName, ContextName]] = []
    for deviation in marginal_law_audit(data):
        pair: tuple[ContextName, ContextName] = deviation.contexts
        if deviation.deviation > tol and pair not in pairs:
            pairs.append(pair)
    logger.debug(f"{len(pairs)} context pairs violate the marginal law")
    return pairs

