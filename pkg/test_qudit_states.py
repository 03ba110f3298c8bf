import numpy as np
import pytest

from qudit_states import (
    IsotropicParams,
    PauliLabel,
    all_pauli_labels,
    bell_basis,
    bell_state,
    clock_operator,
    isotropic_state,
    omega_powers,
    pauli,
    phi_plus,
    phi_plus_projector,
    shift_operator,
)
from tensor_core import kron


def test_label_validation():
    with pytest.raises(ValueError):
        PauliLabel(3, 0, 3)
    with pytest.raises(ValueError):
        PauliLabel(0, 0, 1)
    with pytest.raises(ValueError):
        IsotropicParams(3, 1.2)


def test_qubit_paulis():
    assert np.abs(pauli(PauliLabel(1, 0, 2)) - np.array([[0, 1], [1, 0]])).max() < 1e-15
    assert np.abs(pauli(PauliLabel(0, 1, 2)) - np.diag([1, -1])).max() < 1e-15
    assert np.abs(pauli(PauliLabel(0, 0, 5)) - np.eye(5)).max() == 0


@pytest.mark.parametrize("d", range(2, 9))
def test_pauli_algebra(d):
    X, Z = shift_operator(d), clock_operator(d)
    omega = np.exp(2j * np.pi / d)
    assert np.abs(Z @ X - omega * X @ Z).max() < 1e-12
    assert np.abs(omega_powers(d) - omega ** np.arange(d)).max() < 1e-12
    for label in all_pauli_labels(d):
        P = pauli(label)
        assert np.abs(P.conj().T @ P - np.eye(d)).max() < 1e-12


def test_shift_moves_basis_states():
    X = shift_operator(4)
    for j in range(4):
        assert X[(j + 1) % 4, j] == 1


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_bell_basis_orthonormal_and_complete(d):
    basis = bell_basis(d)
    assert np.abs(basis.conj().T @ basis - np.eye(d * d)).max() < 1e-12
    completeness = sum(np.outer(bell_state(label), bell_state(label).conj())
                       for label in all_pauli_labels(d))
    assert np.abs(completeness - np.eye(d * d)).max() < 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_bell_state_local_forms(d):
    phi = phi_plus(d)
    identity = np.eye(d)
    for label in all_pauli_labels(d):
        right = kron(identity, pauli(label)) @ phi
        split = kron(clock_operator(d, label.l), shift_operator(d, label.k)) @ phi
        assert np.abs(bell_state(label) - right).max() < 1e-12
        assert np.abs(right - split).max() < 1e-12


def test_phi_plus_is_uniform_superposition():
    d = 3
    expected = np.zeros(9)
    expected[[0, 4, 8]] = 1 / np.sqrt(3)
    assert np.abs(phi_plus(d) - expected).max() < 1e-15


@pytest.mark.parametrize("d", [2, 3, 4])
def test_isotropic_limits(d):
    assert np.abs(isotropic_state(IsotropicParams(d, 1.0)) - phi_plus_projector(d)).max() < 1e-15
    mixed = isotropic_state(IsotropicParams(d, 1.0 / d ** 2))
    assert np.abs(mixed - np.eye(d * d) / d ** 2).max() < 1e-15


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_isotropic_fidelity_and_positivity(d):
    phi = phi_plus(d)
    for step in range(11):
        F = step / 10
        rho = isotropic_state(IsotropicParams(d, F))
        assert abs(phi.conj() @ rho @ phi - F) < 1e-12
        assert abs(np.trace(rho) - 1) < 1e-12
        assert np.linalg.eigvalsh(rho).min() > -1e-12


@pytest.mark.parametrize("d", [2, 3, 4])
def test_isotropic_twirl_invariance(d):
    rho = isotropic_state(IsotropicParams(d, 0.7))
    for label in all_pauli_labels(d):
        P = pauli(label)
        U = kron(P, P.conj())
        assert np.abs(U @ rho @ U.conj().T - rho).max() < 1e-10
