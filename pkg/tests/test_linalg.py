import numpy as np
import pytest

from bellbox.linalg import (
    DimensionError,
    InvalidFamilyError,
    NotHermitianError,
    NotNormalizedError,
    NotUnitaryError,
    ProductIsomorphism,
    SpectralFamily,
    apply_isomorphism,
    check_normalized,
    check_unitary,
    complete_basis,
    kron,
    random_hermitian,
    random_state,
    random_unitary,
    spectral_decomposition,
    tensor_product,
)

RANDOM_INSTANCES: int = 1000


def test_tensor_product_index_convention(rng) -> None:
    """Entry `2 * i + j` of `a ⊗ b` is `a[i] * b[j]`."""
    a = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    product = tensor_product(a, b)
    for i in range(2):
        for j in range(2):
            assert product[2 * i + j] == pytest.approx(a[i] * b[j])


def test_kron_acts_on_tensor_products(rng) -> None:
    x, y = random_unitary(rng), random_unitary(rng)
    a, b = random_state(rng, dim=2), random_state(rng, dim=2)
    np.testing.assert_allclose(
        kron(x, y) @ tensor_product(a, b), tensor_product(x @ a, y @ b), atol=1e-12
    )


@pytest.mark.parametrize("value, dim", (([1, 0, 0], None), ([1, 0], 4)))
def test_bad_dimensions(value: list[int], dim: int | None) -> None:
    with pytest.raises(DimensionError):
        check_normalized(value, dim=dim)
    with pytest.raises(DimensionError):
        tensor_product([[1, 0], [0, 1]], [1, 0])


def test_check_normalized() -> None:
    with pytest.raises(NotNormalizedError, match="State must be normalized"):
        check_normalized([1, 1, 0, 0])
    np.testing.assert_allclose(check_normalized([0, 1j, 0, 0]), [0, 1j, 0, 0])


def test_spectral_decomposition_reconstructs(rng) -> None:
    for _ in range(RANDOM_INSTANCES):
        matrix = random_hermitian(rng)
        family = spectral_decomposition(matrix)
        assert family.is_valid()
        np.testing.assert_allclose(family.operator(), matrix, atol=1e-10)
        assert list(family.eigenvalues) == sorted(family.eigenvalues, reverse=True)


def test_spectrum_is_unitarily_invariant(rng) -> None:
    """`U M U†` has the eigenvalues of `M`, multiplicities included."""
    degenerate = np.diag([1.0, 1.0, -1.0, 0.5])
    for matrix in (*(random_hermitian(rng) for _ in range(50)), degenerate):
        u = random_unitary(rng, dim=4)
        before = spectral_decomposition(matrix)
        after = spectral_decomposition(u @ matrix @ u.conj().T)
        assert after.multiplicities == before.multiplicities
        np.testing.assert_allclose(after.eigenvalues, before.eigenvalues, atol=1e-10)


def test_spectral_decomposition_clusters_degenerate() -> None:
    chsh_like = np.diag([2.0, 2.0 + 1e-12, -2.0, 0.0])
    family = spectral_decomposition(chsh_like)
    assert family.multiplicities == (2, 1, 1)
    assert family.eigenvalues[0] == pytest.approx(2.0)


def test_spectral_decomposition_not_hermitian() -> None:
    with pytest.raises(NotHermitianError):
        spectral_decomposition(np.array([[0, 1], [0, 0]]))


def test_family_checks() -> None:
    with pytest.raises(InvalidFamilyError, match="4 outcome family"):
        spectral_decomposition(np.eye(4)).check(outcomes=4)
    skewed = SpectralFamily.from_basis([[1, 0], [1, 1]], (1, -1))
    assert not skewed.is_valid()
    with pytest.raises(InvalidFamilyError, match="resolution of the identity"):
        skewed.check()


def test_isomorphism_round_trip(rng) -> None:
    iso = ProductIsomorphism(random_unitary(rng, dim=4))
    v = random_state(rng)
    m = random_hermitian(rng)
    np.testing.assert_allclose(iso.inverse(iso.apply(v)), v, atol=1e-12)
    np.testing.assert_allclose(iso.inverse(apply_isomorphism(iso, m)), m, atol=1e-12)


def test_isomorphism_maps_images_to_product_basis(rng) -> None:
    basis = random_unitary(rng, dim=4)
    iso = ProductIsomorphism.from_vectors([basis[:, k] for k in range(4)])
    for k in range(4):
        np.testing.assert_allclose(iso.apply(basis[:, k]), np.eye(4)[k], atol=1e-12)


def test_isomorphism_needs_orthonormal_images() -> None:
    with pytest.raises(NotUnitaryError):
        ProductIsomorphism(2 * np.eye(4))
    with pytest.raises(DimensionError):
        ProductIsomorphism.from_vectors([[1, 0, 0, 0]])


def test_complete_basis(rng) -> None:
    v = random_state(rng)
    basis = check_unitary(complete_basis(v))
    np.testing.assert_allclose(basis[:, 0], v, atol=1e-12)
