"""
Complex linear algebra on ${\\mathbb C}^2$ and ${\\mathbb C}^4$.

All functions take and return `numpy` arrays and never mutate their inputs.
The index convention identifying ${\\mathbb C}^2 \\otimes {\\mathbb C}^2$ with
${\\mathbb C}^4$ is row-major: the product of basis vectors ``i`` and ``j`` sits
at index ``2 * i + j`` (zero based), which is the ordering `numpy.kron` uses.
"""
from dataclasses import dataclass, field
from typing import Final, Sequence, TypeAlias, overload

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .settings import settings

ComplexVector: TypeAlias = NDArray[np.complex128]
ComplexMatrix: TypeAlias = NDArray[np.complex128]

VALID_DIMENSIONS: Final[tuple[int, ...]] = (2, 4)
ORTHONORMAL_TOL: Final[float] = 1e-12
FAMILY_TOL: Final[float] = 1e-10


class DimensionError(ValueError):
    """An array does not have the shape an operation requires."""


class NotHermitianError(ValueError):
    """A matrix expected to be self-adjoint is not."""


class NotUnitaryError(ValueError):
    """A matrix expected to be unitary is not."""


class NotNormalizedError(ValueError):
    """A state vector expected to have unit norm does not."""


class InvalidFamilyError(ValueError):
    """Projectors do not form a valid spectral family."""


def as_vector(v: ArrayLike, dim: int | None = None) -> ComplexVector:
    """Return ``v`` as a complex vector, checking its dimension.

    Example:
        ```pycon
        >>> as_vector([1, 0]).dtype
        dtype('complex128')
        >>> as_vector([1, 0, 0], dim=4)
        Traceback (most recent call last):
        ...
        bellbox.linalg.DimensionError: Expected a vector of dimension 4, got shape (3,)

        ```
    """
    vector: ComplexVector = np.asarray(v, dtype=np.complex128)
    expected: tuple[int, ...] = (dim,) if dim else VALID_DIMENSIONS
    if vector.ndim != 1 or vector.shape[0] not in expected:
        raise DimensionError(
            f"Expected a vector of dimension {' or '.join(map(str, expected))}, "
            f"got shape {vector.shape}"
        )
    return vector


def as_matrix(m: ArrayLike, dim: int | None = None) -> ComplexMatrix:
    """Return ``m`` as a square complex matrix, checking its dimension."""
    matrix: ComplexMatrix = np.asarray(m, dtype=np.complex128)
    expected: tuple[int, ...] = (dim,) if dim else VALID_DIMENSIONS
    if (
        matrix.ndim != 2
        or matrix.shape[0] != matrix.shape[1]
        or matrix.shape[0] not in expected
    ):
        raise DimensionError(
            f"Expected a square matrix of dimension "
            f"{' or '.join(map(str, expected))}, got shape {matrix.shape}"
        )
    return matrix


def dagger(m: ArrayLike) -> ComplexMatrix:
    """Conjugate transpose."""
    return np.conj(np.asarray(m, dtype=np.complex128)).T


def is_normalized(v: ArrayLike, tol: float = ORTHONORMAL_TOL) -> bool:
    """Whether ``v`` has unit norm within ``tol``."""
    return bool(abs(np.vdot(v, v).real - 1.0) <= tol)


def normalize(v: ArrayLike) -> ComplexVector:
    """Return ``v`` scaled to unit norm.

    Raises:
        NotNormalizedError: ``v`` is the zero vector
    """
    vector: ComplexVector = as_vector(v)
    norm: float = float(np.linalg.norm(vector))
    if norm == 0:
        raise NotNormalizedError("Cannot normalize the zero vector")
    return vector / norm


def check_normalized(
    v: ArrayLike, tol: float = settings.NORMALIZED_TOL, dim: int | None = None
) -> ComplexVector:
    """Return ``v`` as a vector, raising `NotNormalizedError` if its norm is not 1."""
    vector: ComplexVector = as_vector(v, dim=dim)
    if not is_normalized(vector, tol=tol):
        raise NotNormalizedError(
            f"State must be normalized, squared norm is {np.vdot(vector, vector).real}"
        )
    return vector


def projector(v: ArrayLike) -> ComplexMatrix:
    """Rank one projector ``|v><v|`` onto a normalized ``v``."""
    vector: ComplexVector = as_vector(v)
    return np.outer(vector, np.conj(vector))


def tensor_product(a: ArrayLike, b: ArrayLike) -> ComplexVector:
    """Tensor product of two vectors of ${\\mathbb C}^2$ as a vector of ${\\mathbb C}^4$.

    Entry ``2 * i + j`` equals ``a[i] * b[j]``.

    Example:
        ```pycon
        >>> tensor_product([1, 0], [0, 1]).real.tolist()
        [0.0, 1.0, 0.0, 0.0]
        >>> h = np.sqrt(0.5)
        >>> np.round(tensor_product([h, h], [h, h]).real, 12).tolist()
        [0.5, 0.5, 0.5, 0.5]

        ```
    """
    return np.kron(as_vector(a, dim=2), as_vector(b, dim=2))


def kron(x: ArrayLike, y: ArrayLike) -> ComplexMatrix:
    """Tensor product of two 2×2 matrices, consistent with `tensor_product`.

    Example:
        ```pycon
        >>> z = np.diag([1, -1])
        >>> np.diag(kron(z, z)).real.tolist()
        [1.0, -1.0, -1.0, 1.0]
        >>> np.diag(kron(z, np.eye(2))).real.tolist()
        [1.0, 1.0, -1.0, -1.0]

        ```
    """
    return np.kron(as_matrix(x, dim=2), as_matrix(y, dim=2))


def is_hermitian(m: ArrayLike, tol: float = settings.HERMITIAN_TOL) -> bool:
    """Whether ``m`` equals its conjugate transpose within ``tol`` entrywise."""
    matrix: ComplexMatrix = as_matrix(m)
    return bool(np.max(np.abs(matrix - dagger(matrix))) <= tol)


def is_unitary(m: ArrayLike, tol: float = settings.HERMITIAN_TOL) -> bool:
    """Whether ``m @ m^dagger`` equals the identity within ``tol`` entrywise.

    Example:
        ```pycon
        >>> is_unitary(np.eye(4))
        True
        >>> is_unitary(2 * np.eye(2))
        False

        ```
    """
    matrix: ComplexMatrix = as_matrix(m)
    identity: ComplexMatrix = np.eye(matrix.shape[0])
    return bool(np.max(np.abs(matrix @ dagger(matrix) - identity)) <= tol)


def check_hermitian(m: ArrayLike, tol: float = settings.HERMITIAN_TOL) -> ComplexMatrix:
    """Return ``m`` as a matrix, raising `NotHermitianError` if it is not self-adjoint."""
    matrix: ComplexMatrix = as_matrix(m)
    if not is_hermitian(matrix, tol=tol):
        raise NotHermitianError(
            f"Matrix is not hermitian: max |M - M^dagger| = "
            f"{np.max(np.abs(matrix - dagger(matrix))):.3e}"
        )
    return matrix


def check_unitary(m: ArrayLike, tol: float = settings.HERMITIAN_TOL) -> ComplexMatrix:
    """Return ``m`` as a matrix, raising `NotUnitaryError` if it is not unitary."""
    matrix: ComplexMatrix = as_matrix(m)
    if not is_unitary(matrix, tol=tol):
        raise NotUnitaryError("Matrix is not unitary")
    return matrix


@dataclass(frozen=True)
class SpectralFamily:
    """Outcome values with orthogonal projectors resolving the identity.

    Families returned by `spectral_decomposition` have distinct eigenvalues in
    descending order. Families built with `SpectralFamily.from_basis` hold
    one rank one projector per basis vector, and their `eigenvalues` are
    outcome labels which may repeat; the position of a projector is its
    outcome index on the ``(11, 12, 21, 22)`` grid.

    Attributes:
        eigenvalues: outcome value of each projector
        projectors: orthogonal projectors, one per outcome
        multiplicities: rank of each projector
        vectors: the basis vectors when built from an ON basis

    Example:
        ```pycon
        >>> family = SpectralFamily.from_basis(np.eye(4), (1, -1, -1, 1))
        >>> len(family)
        4
        >>> family.multiplicities
        (1, 1, 1, 1)
        >>> np.diag(family.operator()).real.tolist()
        [1.0, -1.0, -1.0, 1.0]

        ```
    """

    eigenvalues: tuple[float, ...]
    projectors: tuple[ComplexMatrix, ...]
    multiplicities: tuple[int, ...] = ()
    vectors: tuple[ComplexVector, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if len(self.eigenvalues) != len(self.projectors):
            raise InvalidFamilyError(
                f"{len(self.eigenvalues)} eigenvalues for "
                f"{len(self.projectors)} projectors"
            )
        if not self.multiplicities:
            object.__setattr__(
                self,
                "multiplicities",
                tuple(int(round(np.trace(p).real)) for p in self.projectors),
            )

    def __len__(self) -> int:
        return len(self.projectors)

    def __repr__(self) -> str:
        return (
            f"<{type(self).__name__}(dim={self.dim}, "
            f"eigenvalues={tuple(round(e, 6) for e in self.eigenvalues)})>"
        )

    @classmethod
    def from_basis(
        cls, vectors: ArrayLike | Sequence[ArrayLike], eigenvalues: Sequence[float]
    ) -> "SpectralFamily":
        """Build a family of rank one projectors from an ON basis.

        Args:
            vectors: the basis, either a sequence of vectors or a matrix whose
                columns are the basis vectors
            eigenvalues: one outcome value per vector
        """
        basis: list[ComplexVector]
        if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
            basis = [as_vector(vectors[:, k]) for k in range(vectors.shape[1])]
        else:
            basis = [as_vector(v) for v in vectors]  # type: ignore[union-attr]
        return cls(
            eigenvalues=tuple(float(e) for e in eigenvalues),
            projectors=tuple(projector(v) for v in basis),
            multiplicities=tuple(1 for _ in basis),
            vectors=tuple(basis),
        )

    @property
    def dim(self) -> int:
        return int(self.projectors[0].shape[0])

    def operator(self) -> ComplexMatrix:
        """Return ``sum_k eigenvalue_k * projector_k``."""
        return sum(
            (e * p for e, p in zip(self.eigenvalues, self.projectors)),
            start=np.zeros((self.dim, self.dim), dtype=np.complex128),
        )

    def residual(self) -> float:
        """Largest entrywise failure of orthogonality, idempotence or completeness."""
        worst: float = float(
            np.max(np.abs(sum(self.projectors) - np.eye(self.dim)))  # type: ignore[arg-type]
        )
        for k, p in enumerate(self.projectors):
            for q in self.projectors[k:]:
                target: ComplexMatrix = p if q is p else np.zeros_like(p)
                worst = max(worst, float(np.max(np.abs(p @ q - target))))
        return worst

    def is_valid(self, tol: float = FAMILY_TOL) -> bool:
        """Whether the projectors are orthogonal idempotents summing to identity."""
        return self.residual() <= tol

    def check(self, tol: float = FAMILY_TOL, outcomes: int | None = None) -> None:
        """Raise `InvalidFamilyError` unless `is_valid` and of ``outcomes`` size."""
        if outcomes is not None and len(self) != outcomes:
            raise InvalidFamilyError(
                f"Expected a {outcomes} outcome family, got {len(self)} outcomes"
            )
        if not self.is_valid(tol):
            raise InvalidFamilyError(
                f"Projectors are not a resolution of the identity "
                f"(residual {self.residual():.3e})"
            )


def spectral_decomposition(
    m: ArrayLike, cluster_tol: float = settings.CLUSTER_TOL
) -> SpectralFamily:
    """Spectral family of a hermitian matrix with clustered degeneracies.

    Eigenvalues within ``cluster_tol`` of a neighbour are merged into one
    eigenvalue (their mean) whose projector spans all their eigenvectors.

    Raises:
        NotHermitianError: ``m`` is not hermitian within 1e-10

    Example:
        ```pycon
        >>> family = spectral_decomposition(np.diag([1, -1, -1, 1]))
        >>> family.eigenvalues
        (1.0, -1.0)
        >>> family.multiplicities
        (2, 2)
        >>> np.diag(family.projectors[0]).real.tolist()
        [1.0, 0.0, 0.0, 1.0]
        >>> spectral_decomposition(np.eye(4)).eigenvalues
        (1.0,)

        ```
    """
    matrix: ComplexMatrix = check_hermitian(m)
    values, vectors = np.linalg.eigh((matrix + dagger(matrix)) / 2)
    clusters: list[list[int]] = [[0]]
    for k in range(1, len(values)):
        if values[k] - values[clusters[-1][-1]] <= cluster_tol:
            clusters[-1].append(k)
        else:
            clusters.append([k])
    clusters.reverse()
    eigenvalues: list[float] = []
    projectors: list[ComplexMatrix] = []
    for cluster in clusters:
        eigenvalues.append(float(np.mean(values[cluster])))
        block: ComplexMatrix = vectors[:, cluster]
        projectors.append(block @ dagger(block))
    return SpectralFamily(
        eigenvalues=tuple(eigenvalues),
        projectors=tuple(projectors),
        multiplicities=tuple(len(c) for c in clusters),
    )


@dataclass(frozen=True)
class ProductIsomorphism:
    """An identification of ${\\mathbb C}^4$ with ${\\mathbb C}^2 \\otimes {\\mathbb C}^2$.

    Column ``k`` of `image_basis` is the vector of ${\\mathbb C}^4$ identified
    with the ``k``-th product basis vector ``c_i ⊗ d_j`` (``k = 2 * i + j``).
    The isomorphism itself is therefore ``image_basis^dagger``: it maps each
    column onto the standard tensor basis.

    Example:
        ```pycon
        >>> iso = ProductIsomorphism.identity()
        >>> iso.apply([1, 0, 0, 0]).real.tolist()
        [1.0, 0.0, 0.0, 0.0]
        >>> singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
        >>> iso = ProductIsomorphism.from_vectors(
        ...     [singlet, [1, 0, 0, 0], [0, 0, 0, 1], np.abs(singlet)])
        >>> (np.round(iso.apply(singlet).real, 12) + 0.0).tolist()
        [1.0, 0.0, 0.0, 0.0]

        ```
    """

    image_basis: ComplexMatrix

    def __post_init__(self) -> None:
        basis: ComplexMatrix = as_matrix(self.image_basis, dim=4)
        if not is_unitary(basis, tol=ORTHONORMAL_TOL * 100):
            raise NotUnitaryError(
                "Isomorphism image vectors must form an orthonormal basis"
            )
        object.__setattr__(self, "image_basis", basis)

    @classmethod
    def identity(cls) -> "ProductIsomorphism":
        return cls(np.eye(4, dtype=np.complex128))

    @classmethod
    def from_vectors(cls, vectors: Sequence[ArrayLike]) -> "ProductIsomorphism":
        """Build from four ON vectors, the images of ``c1⊗d1, c1⊗d2, c2⊗d1, c2⊗d2``."""
        if len(vectors) != 4:
            raise DimensionError(f"Expected 4 image vectors, got {len(vectors)}")
        return cls(np.column_stack([as_vector(v, dim=4) for v in vectors]))

    @property
    def unitary(self) -> ComplexMatrix:
        """The matrix of the isomorphism, mapping each image vector to a product basis vector."""
        return dagger(self.image_basis)

    @overload
    def apply(self, v_or_m: ComplexVector) -> ComplexVector:
        ...

    @overload
    def apply(self, v_or_m: ArrayLike) -> ComplexVector | ComplexMatrix:
        ...

    def apply(self, v_or_m: ArrayLike) -> ComplexVector | ComplexMatrix:
        """Map a vector ``v -> I v`` or conjugate a matrix ``M -> I M I^-1``."""
        array: NDArray = np.asarray(v_or_m, dtype=np.complex128)
        if array.ndim == 1:
            return self.unitary @ as_vector(array, dim=4)
        return self.unitary @ as_matrix(array, dim=4) @ self.image_basis

    def inverse(self, v_or_m: ArrayLike) -> ComplexVector | ComplexMatrix:
        """Map a tensor product space vector or matrix back to ${\\mathbb C}^4$."""
        array: NDArray = np.asarray(v_or_m, dtype=np.complex128)
        if array.ndim == 1:
            return self.image_basis @ as_vector(array, dim=4)
        return self.image_basis @ as_matrix(array, dim=4) @ self.unitary


def apply_isomorphism(
    iso: ProductIsomorphism, v_or_m: ArrayLike
) -> ComplexVector | ComplexMatrix:
    """Apply ``iso`` to a vector (``I v``) or conjugate a matrix (``I M I^-1``)."""
    return iso.apply(v_or_m)


def complete_basis(v: ArrayLike) -> ComplexMatrix:
    """Return a unitary matrix whose first column is the normalized ``v``.

    Example:
        ```pycon
        >>> basis = complete_basis([0, 1, -1, 0])
        >>> is_unitary(basis)
        True
        >>> (np.round(basis[:, 0].real * np.sqrt(2), 12) + 0.0).tolist()
        [0.0, 1.0, -1.0, 0.0]

        ```
    """
    vector: ComplexVector = normalize(v)
    dim: int = vector.shape[0]
    seed: ComplexMatrix = np.column_stack([vector, np.eye(dim)])
    q, r = np.linalg.qr(seed)
    # `qr` fixes columns only up to phase: restore `v` exactly
    q[:, 0] = q[:, 0] * (r[0, 0] / abs(r[0, 0]))
    return q[:, :dim]


def random_unitary(rng: np.random.Generator, dim: int = 2) -> ComplexMatrix:
    """Haar random unitary from the QR decomposition of a Ginibre matrix."""
    z: ComplexMatrix = (
        rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    ) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diagonal: NDArray = np.diag(r)
    return q * (diagonal / np.abs(diagonal))


def random_state(rng: np.random.Generator, dim: int = 4) -> ComplexVector:
    """Uniformly random unit vector."""
    return normalize(rng.standard_normal(dim) + 1j * rng.standard_normal(dim))


def random_hermitian(rng: np.random.Generator, dim: int = 4) -> ComplexMatrix:
    """Random hermitian matrix of order one norm."""
    z: ComplexMatrix = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal(
        (dim, dim)
    )
    return (z + dagger(z)) / 2
