import numpy as np
import pytest

from entanglement_measures import (
    BipartiteCut,
    cren_isotropic,
    cren_pure,
    isotropic_fidelity,
    negativity,
    wootters_concurrence,
)
from qudit_states import (
    IsotropicParams,
    isotropic_state,
    phi_plus,
    random_density_matrix,
    random_pure_state,
    random_unitary,
)
from tensor_core import kron


def schmidt_coefficients(phi, dA, dB):
    return np.linalg.svd(phi.reshape(dA, dB), compute_uv=False)


def test_cut_properties():
    cut = BipartiteCut(4, 2)
    assert cut.d == 2 and cut.total == 8 and cut.smaller_factor == 1
    with pytest.raises(ValueError):
        BipartiteCut(1, 3)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_cren_pure_maximally_entangled(d):
    assert abs(cren_pure(phi_plus(d), BipartiteCut.symmetric(d)) - 1) < 1e-12


def test_cren_pure_product_state():
    state = np.zeros(9)
    state[0] = 1
    assert cren_pure(state, BipartiteCut.symmetric(3)) < 1e-12


def test_cren_pure_is_qubit_concurrence(rng):
    cut = BipartiteCut.symmetric(2)
    for _ in range(20):
        phi = random_pure_state(4, rng)
        s = schmidt_coefficients(phi, 2, 2)
        assert abs(cren_pure(phi, cut) - 2 * s[0] * s[1]) < 1e-10


def test_cren_pure_rectangular_cut(rng):
    phi = random_pure_state(6, rng)
    s = schmidt_coefficients(phi, 2, 3)
    assert abs(cren_pure(phi, BipartiteCut(2, 3)) - (s.sum() ** 2 - 1)) < 1e-10
    assert abs(cren_pure(phi, BipartiteCut(2, 3)) - cren_pure(
        phi.reshape(2, 3).T.ravel(), BipartiteCut(3, 2))) < 1e-10


def test_cren_pure_errors():
    with pytest.raises(ValueError):
        cren_pure(np.ones(4), BipartiteCut.symmetric(2))
    with pytest.raises(ValueError):
        cren_pure(phi_plus(2), BipartiteCut.symmetric(3))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_cren_pure_local_unitary_invariance(d, rng):
    cut = BipartiteCut.symmetric(d)
    for _ in range(10):
        phi = random_pure_state(d * d, rng)
        U = kron(random_unitary(d, rng), random_unitary(d, rng))
        assert abs(cren_pure(U @ phi, cut) - cren_pure(phi, cut)) < 1e-10


def test_negativity_of_product_state(rng):
    rho = kron(random_density_matrix(3, rng), random_density_matrix(3, rng))
    assert negativity(rho, BipartiteCut.symmetric(3)) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_negativity_equals_cren_on_pure_states(d, rng):
    cut = BipartiteCut.symmetric(d)
    for _ in range(10):
        phi = random_pure_state(d * d, rng)
        assert abs(negativity(np.outer(phi, phi.conj()), cut) - cren_pure(phi, cut)) < 1e-10


def test_negativity_shape_error():
    with pytest.raises(ValueError):
        negativity(np.eye(6) / 6, BipartiteCut.symmetric(2))


def test_cren_isotropic_values():
    assert cren_isotropic(IsotropicParams(3, 1.0)) == 1.0
    assert cren_isotropic(IsotropicParams(4, 0.25)) == 0.0
    assert abs(cren_isotropic(IsotropicParams(2, 0.9)) - 0.8) < 1e-15
    assert cren_isotropic(IsotropicParams(3, 0.1)) == 0.0


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_negativity_matches_isotropic_closed_form(d):
    cut = BipartiteCut.symmetric(d)
    for step in range(21):
        params = IsotropicParams(d, step / 20)
        assert abs(negativity(isotropic_state(params), cut) - cren_isotropic(params)) < 1e-10
    # PPT boundary
    assert negativity(isotropic_state(IsotropicParams(d, 1 / d)), cut) < 1e-10


def test_isotropic_fidelity():
    rho = isotropic_state(IsotropicParams(3, 0.42))
    assert abs(isotropic_fidelity(rho, 3) - 0.42) < 1e-14


def test_wootters_concurrence(rng):
    assert abs(wootters_concurrence(isotropic_state(IsotropicParams(2, 0.9))) - 0.8) < 1e-10
    assert wootters_concurrence(np.eye(4) / 4) < 1e-12
    phi = random_pure_state(4, rng)
    assert abs(wootters_concurrence(np.outer(phi, phi.conj())) -
               cren_pure(phi, BipartiteCut.symmetric(2))) < 1e-7
    # concurrence bounds negativity from above for two qubits
    rho = random_density_matrix(4, rng, rank=2)
    assert wootters_concurrence(rho) >= negativity(rho, BipartiteCut.symmetric(2)) - 1e-10
