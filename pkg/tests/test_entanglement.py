import numpy as np
import pytest

from bellbox.bell_statistics import BellData
from bellbox.entanglement import (
    collapse_factorization,
    evolution_between,
    is_product_family,
    is_product_measurement,
    is_product_state,
    is_product_unitary,
    isomorphism_for_state,
    operator_schmidt_rank,
    product_obstructions,
    refine_family,
    schmidt_decompose,
)
from bellbox.linalg import (
    NotHermitianError,
    NotUnitaryError,
    ProductIsomorphism,
    SpectralFamily,
    is_unitary,
    kron,
    random_hermitian,
    random_state,
    random_unitary,
    spectral_decomposition,
    tensor_product,
)

RANDOM_INSTANCES: int = 1000
SINGLET = np.array([0, 1, -1, 0]) / np.sqrt(2)
CNOT = np.eye(4)[[0, 1, 3, 2]]
GRID_LABELS: tuple[int, ...] = (1, -1, -1, 1)


def product_basis(rng: np.random.Generator) -> np.ndarray:
    """Columns `a_i ⊗ b_j` of two random local bases, at index `2 * i + j`."""
    return kron(random_unitary(rng), random_unitary(rng))


def test_schmidt_reconstructs(rng) -> None:
    for _ in range(100):
        state = random_state(rng)
        decomposition = schmidt_decompose(state)
        np.testing.assert_allclose(decomposition.reconstruct(), state, atol=1e-12)
        assert np.sum(decomposition.coefficients**2) == pytest.approx(1.0)


def test_schmidt_coefficients_survive_local_unitaries(rng) -> None:
    for _ in range(100):
        iso = ProductIsomorphism(random_unitary(rng, dim=4))
        state = random_state(rng)
        local = kron(random_unitary(rng), random_unitary(rng))
        moved = iso.inverse(local @ iso.apply(state))
        np.testing.assert_allclose(
            schmidt_decompose(moved, iso).coefficients,
            schmidt_decompose(state, iso).coefficients,
            atol=1e-10,
        )


def test_random_product_states_are_product(rng) -> None:
    for _ in range(100):
        a, b = random_state(rng, dim=2), random_state(rng, dim=2)
        report = is_product_state(tensor_product(a, b))
        assert report.is_product
        x, y = report.witnesses
        np.testing.assert_allclose(np.kron(x, y), tensor_product(a, b), atol=1e-10)


def test_singlet_is_entangled_but_product_for_its_own_isomorphism() -> None:
    assert not is_product_state(SINGLET).is_product
    iso: ProductIsomorphism = isomorphism_for_state(SINGLET)
    assert is_product_state(SINGLET, iso).is_product


def test_productness_is_relative_to_isomorphism(rng) -> None:
    iso = ProductIsomorphism(random_unitary(rng, dim=4))
    state = iso.inverse(tensor_product(random_state(rng, 2), random_state(rng, 2)))
    assert is_product_state(state, iso).is_product
    measurement = iso.inverse(kron(random_hermitian(rng, 2), random_hermitian(rng, 2)))
    assert is_product_measurement(measurement, iso).is_product


def test_product_measurements(rng) -> None:
    for _ in range(100):
        x, y = random_hermitian(rng, 2), random_hermitian(rng, 2)
        report = is_product_measurement(kron(x, y))
        assert report.is_product
        x_h, y_h = report.witnesses
        np.testing.assert_allclose(kron(x_h, y_h), kron(x, y), atol=1e-10)
        np.testing.assert_allclose(x_h, x_h.conj().T, atol=1e-10)


def test_entangled_measurement() -> None:
    bell_projector = np.outer(SINGLET, SINGLET)
    report = is_product_measurement(bell_projector)
    assert not report.is_product
    assert report.witnesses is None
    assert operator_schmidt_rank(bell_projector).rank == 4


def test_measurement_must_be_hermitian() -> None:
    with pytest.raises(NotHermitianError):
        is_product_measurement(np.triu(np.ones((4, 4))))


def test_product_unitaries(rng) -> None:
    for _ in range(100):
        report = is_product_unitary(kron(random_unitary(rng), random_unitary(rng)))
        assert report.is_product
        u_a, u_b = report.witnesses
        assert is_unitary(u_a) and is_unitary(u_b)
    assert not is_product_unitary(CNOT).is_product
    with pytest.raises(NotUnitaryError):
        is_product_unitary(2 * np.eye(4))


def test_product_family_and_refinement(rng) -> None:
    basis = product_basis(rng)
    family = SpectralFamily.from_basis(basis, GRID_LABELS)
    assert is_product_family(family).is_product
    degenerate = spectral_decomposition(family.operator())
    assert degenerate.multiplicities == (2, 2)
    report = is_product_measurement(family.operator())
    pieces = refine_family(degenerate, *report.witnesses)
    assert len(pieces) == 4
    for piece in pieces:
        assert np.trace(piece).real == pytest.approx(1.0)
        assert operator_schmidt_rank(piece).rank == 1


def test_evolution_between_product_bases_is_product(rng) -> None:
    family_from = SpectralFamily.from_basis(product_basis(rng), GRID_LABELS)
    family_to = SpectralFamily.from_basis(product_basis(rng), GRID_LABELS)
    evolution = evolution_between(family_from, family_to)
    assert is_unitary(evolution)
    for before, after in zip(family_from.vectors, family_to.vectors):
        np.testing.assert_allclose(evolution @ before, after, atol=1e-12)
    assert is_product_unitary(evolution).is_product


def test_collapse_factorizes_for_product_states_and_measurements(rng) -> None:
    """Product state and product measurement give `p(A_i B_j) = p(A_i) p(B_j)`."""
    for _ in range(RANDOM_INSTANCES):
        state = tensor_product(random_state(rng, 2), random_state(rng, 2))
        family = SpectralFamily.from_basis(product_basis(rng), GRID_LABELS)
        check = collapse_factorization(state, family)
        assert check.state_is_product
        assert check.factorizes
        assert check.residual <= 1e-10


def test_collapse_factorizes_for_another_isomorphism(rng) -> None:
    """Productness relative to any isomorphism gives the same factorization."""
    for _ in range(RANDOM_INSTANCES):
        iso = ProductIsomorphism(random_unitary(rng, dim=4))
        state = iso.inverse(tensor_product(random_state(rng, 2), random_state(rng, 2)))
        basis = iso.image_basis @ product_basis(rng)
        family = SpectralFamily.from_basis(basis, GRID_LABELS)
        check = collapse_factorization(state, family, iso)
        assert check.state_is_product
        assert check.factorizes
        assert check.residual <= 1e-10


def test_collapse_does_not_factorize_for_singlet() -> None:
    standard = SpectralFamily.from_basis(np.eye(4), GRID_LABELS)
    check = collapse_factorization(SINGLET, standard)
    assert not check.factorizes
    assert not check.state_is_product
    np.testing.assert_allclose(check.a, [0.5, 0.5])


@pytest.mark.parametrize(
    "dataset, obstructed", (("uniform", False), ("cats", False), ("vessels", True))
)
def test_product_obstructions(dataset: str, obstructed: bool, request) -> None:
    data: BellData = request.getfixturevalue(f"{dataset}_data")
    assert bool(product_obstructions(data)) == obstructed


def test_animal_acts_obstructions(animal_acts_data: BellData) -> None:
    pairs = product_obstructions(animal_acts_data)
    assert ("A'B", "A'B'") in pairs
    assert len(pairs) == len(set(pairs))
