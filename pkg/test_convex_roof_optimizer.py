import numpy as np
import pytest
import scipy.linalg

from convex_roof_optimizer import (
    ConvexRoofOptimizer,
    _hermitian_from_params,
    convex_roof_upper_bound,
    realize_ensemble,
    spectral_decomposition,
)
from entanglement_measures import (
    BipartiteCut,
    cren_isotropic,
    cren_pure,
    negativity,
    wootters_concurrence,
)
from qudit_states import (
    IsotropicParams,
    isotropic_state,
    random_density_matrix,
    random_pure_state,
)


def test_realize_ensemble_identity_isometry(rng):
    rho = random_density_matrix(4, rng, rank=3)
    values, vectors = spectral_decomposition(rho)
    assert len(values) == 3
    ensemble = realize_ensemble((values, vectors), np.eye(3))
    assert np.abs(ensemble.weights - values).max() < 1e-12
    for k in range(3):
        overlap = abs(np.vdot(vectors[:, k], ensemble.states[k]))
        assert abs(overlap - 1) < 1e-12
    assert np.abs(ensemble.reconstruct() - rho).max() < 1e-10


def test_realize_ensemble_rotation(rng):
    rho = random_density_matrix(4, rng, rank=2)
    values, vectors = spectral_decomposition(rho)
    theta = 0.3
    V = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    ensemble = realize_ensemble((values, vectors), V)
    assert len(ensemble) == 2
    assert np.abs(ensemble.reconstruct() - rho).max() < 1e-10
    assert abs(ensemble.weights.sum() - 1) < 1e-10


def test_realize_ensemble_from_random_isometry(rng):
    rho = random_density_matrix(9, rng)
    values, vectors = spectral_decomposition(rho)
    m = 12
    x = rng.normal(size=m * m)
    V = scipy.linalg.expm(1j * _hermitian_from_params(x, m))[:, :len(values)]
    ensemble = realize_ensemble((values, vectors), V)
    assert abs(ensemble.weights.sum() - 1) < 1e-10
    assert np.all(ensemble.weights >= 0)
    assert np.abs(ensemble.reconstruct() - rho).max() < 1e-9
    assert np.abs(np.linalg.norm(ensemble.states, axis=1) - 1).max() < 1e-12


def test_realize_ensemble_rejects_non_isometry(rng):
    rho = random_density_matrix(4, rng, rank=2)
    with pytest.raises(ValueError):
        realize_ensemble(spectral_decomposition(rho), np.ones((3, 2)))


def test_hermitian_parametrization():
    m = 4
    x = np.arange(m * m, dtype=float)
    H = _hermitian_from_params(x, m)
    assert np.abs(H - H.conj().T).max() == 0
    assert np.abs(np.diag(H) - [0, 1, 2, 3]).max() == 0


def test_objective_gradient_matches_finite_differences(rng):
    cut = BipartiteCut.symmetric(2)
    rho = random_density_matrix(4, rng)
    values, vectors = spectral_decomposition(rho)
    basis = np.sqrt(values)[:, None] * vectors.T
    optimizer = ConvexRoofOptimizer(cut)
    m, r = 5, len(values)
    x = rng.normal(scale=0.5, size=m * m)

    _, grad = optimizer._objective(x, m, r, basis)
    step = 1e-6
    for index in rng.choice(m * m, size=8, replace=False):
        e = np.zeros(m * m)
        e[index] = step
        plus, _ = optimizer._objective(x + e, m, r, basis)
        minus, _ = optimizer._objective(x - e, m, r, basis)
        assert abs((plus - minus) / (2 * step) - grad[index]) < 1e-5


def test_objective_matches_ensemble_average(rng):
    cut = BipartiteCut.symmetric(2)
    rho = random_density_matrix(4, rng)
    values, vectors = spectral_decomposition(rho)
    basis = np.sqrt(values)[:, None] * vectors.T
    m = 6
    x = rng.normal(size=m * m)
    value, _ = ConvexRoofOptimizer(cut)._objective(x, m, len(values), basis)
    V = scipy.linalg.expm(1j * _hermitian_from_params(x, m))[:, :len(values)]
    ensemble = realize_ensemble((values, vectors), V)
    average = sum(p * cren_pure(s, cut) for p, s in zip(ensemble.weights, ensemble.states) if p > 1e-15)
    assert abs(value - average) < 1e-10


@pytest.mark.parametrize("d", [2, 3])
def test_pure_state_value_is_cren_pure(d, rng):
    cut = BipartiteCut.symmetric(d)
    phi = random_pure_state(d * d, rng)
    rho = np.outer(phi, phi.conj())
    expected = cren_pure(phi, cut)
    for m in (1, 3):
        result = convex_roof_upper_bound(rho, cut, m=m, restarts=2, budget=50)
        assert abs(result.value - expected) < 1e-8
        assert abs(result.value - negativity(rho, cut)) < 1e-8


def test_maximally_mixed_qubits_is_separable():
    cut = BipartiteCut.symmetric(2)
    result = convex_roof_upper_bound(np.eye(4) / 4, cut, restarts=3, budget=200)
    assert result.value < 1e-6
    assert result.ensemble_size == 16


def test_isotropic_qubit_converges_to_closed_form():
    cut = BipartiteCut.symmetric(2)
    rho = isotropic_state(IsotropicParams(2, 0.9))
    result = convex_roof_upper_bound(rho, cut, m=4, restarts=20, budget=500, seed=7)
    assert abs(result.value - 0.8) < 1e-4
    assert result.value >= negativity(rho, cut) - 1e-8
    assert result.is_upper_bound
    assert np.abs(result.best.reconstruct() - rho).max() < 1e-9


@pytest.mark.parametrize("F", [0.6, 0.8, 1.0])
def test_isotropic_qubit_default_ensemble(F):
    cut = BipartiteCut.symmetric(2)
    params = IsotropicParams(2, F)
    result = convex_roof_upper_bound(isotropic_state(params), cut, restarts=20, seed=1)
    assert abs(result.value - cren_isotropic(params)) < 1e-4


@pytest.mark.slow
@pytest.mark.parametrize("F", [0.6, 0.8, 1.0])
def test_isotropic_qutrit_default_ensemble(F):
    cut = BipartiteCut.symmetric(3)
    params = IsotropicParams(3, F)
    result = convex_roof_upper_bound(isotropic_state(params), cut, restarts=20, seed=1, workers=4)
    assert abs(result.value - cren_isotropic(params)) < 1e-4


def test_random_qubit_states_respect_bounds(rng):
    cut = BipartiteCut.symmetric(2)
    for _ in range(3):
        rho = random_density_matrix(4, rng, rank=2)
        result = convex_roof_upper_bound(rho, cut, restarts=5, budget=300)
        assert result.value >= negativity(rho, cut) - 1e-8
        # concurrence is the exact convex roof for two qubits
        assert result.value >= wootters_concurrence(rho) - 1e-6


def test_more_restarts_never_worse(rng):
    cut = BipartiteCut.symmetric(2)
    rho = random_density_matrix(4, rng, rank=3)
    few = convex_roof_upper_bound(rho, cut, restarts=2, budget=100, seed=3)
    many = convex_roof_upper_bound(rho, cut, restarts=6, budget=100, seed=3)
    assert many.value <= few.value + 1e-12
    assert many.restart_values[:2] == few.restart_values


def test_parallel_and_serial_agree(rng):
    cut = BipartiteCut.symmetric(2)
    rho = random_density_matrix(4, rng)
    serial = convex_roof_upper_bound(rho, cut, restarts=4, budget=100, seed=11)
    parallel = convex_roof_upper_bound(rho, cut, restarts=4, budget=100, seed=11, workers=4)
    assert serial.restart_values == parallel.restart_values
    assert serial.value == parallel.value


def test_budget_exhaustion_is_flagged(rng):
    cut = BipartiteCut.symmetric(2)
    rho = random_density_matrix(4, rng)
    result = convex_roof_upper_bound(rho, cut, restarts=2, budget=1, seed=5)
    assert result.budget_exhausted
    assert result.value >= negativity(rho, cut) - 1e-8


def test_ensemble_smaller_than_rank_is_rejected(rng):
    rho = random_density_matrix(4, rng)
    with pytest.raises(ValueError):
        convex_roof_upper_bound(rho, BipartiteCut.symmetric(2), m=3)
