# entanglement_measures.py
# CREN of pure states, negativity, closed-form isotropic CREN and two-qubit concurrence

import logging
from dataclasses import dataclass

import numpy as np

from qudit_states import phi_plus, validate_dim
from tensor_core import (
    hermitian_eigh,
    is_hermitian,
    partial_trace,
    partial_transpose,
    trace_norm,
    trace_sqrt,
)

logger = logging.getLogger(__name__)

# Pure-state inputs must be normalized to this tolerance
NORM_TOL = 1e-10
# Round-off below zero that negativity clips instead of reporting
NEGATIVITY_CLIP_TOL = 1e-10


@dataclass(frozen=True)
class BipartiteCut:
    """Split of a state space into dA ⊗ dB; d is the smaller factor"""
    dA: int
    dB: int

    def __post_init__(self):
        object.__setattr__(self, "dA", validate_dim(self.dA))
        object.__setattr__(self, "dB", validate_dim(self.dB))

    @property
    def d(self):
        return min(self.dA, self.dB)

    @property
    def total(self):
        return self.dA * self.dB

    @property
    def dims(self):
        return (self.dA, self.dB)

    @property
    def smaller_factor(self):
        return 0 if self.dA <= self.dB else 1

    @classmethod
    def symmetric(cls, d):
        return cls(d, d)


def _check_state_vector(phi, cut):
    phi = np.asarray(phi, dtype=complex).ravel()
    if phi.size != cut.total:
        raise ValueError(f"State of dimension {phi.size} does not match cut {cut.dims}")
    norm = np.linalg.norm(phi)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"State is not normalized (norm {norm:.12g})")
    return phi


def cren_pure(phi, cut):
    """
    CREN of a pure state

    Parameters:
    - phi: Normalized state vector on dA ⊗ dB
    - cut: BipartiteCut

    Returns:
    - ((tr √ρ₁)² - 1)/(d - 1), ρ₁ the marginal on the smaller factor
    """
    phi = _check_state_vector(phi, cut)
    marginal = partial_trace(np.outer(phi, phi.conj()), cut.dims, keep=[cut.smaller_factor])
    value = (trace_sqrt(marginal) ** 2 - 1.0) / (cut.d - 1)
    return float(np.clip(value, 0.0, 1.0))


def negativity(rho, cut):
    """(‖ρ^{T_B}‖₁ - 1)/(d - 1), clipped at zero"""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (cut.total, cut.total):
        raise ValueError(f"Matrix shape {rho.shape} does not match cut {cut.dims}")
    transposed = partial_transpose(rho, cut.dims, 1)
    value = (trace_norm(transposed) - 1.0) / (cut.d - 1)
    if value < -NEGATIVITY_CLIP_TOL:
        logger.warning("Negativity %.3e below zero; input trace is probably not 1", value)
    return max(float(value), 0.0)


def cren_isotropic(params):
    """Closed-form CREN of ρ_F: max{(dF - 1)/(d - 1), 0}"""
    d, F = params.d, params.F
    return max((d * F - 1.0) / (d - 1), 0.0)


def isotropic_fidelity(rho, d):
    """<Φ+|ρ|Φ+>"""
    d = validate_dim(d)
    phi = phi_plus(d)
    return float(np.real(phi.conj() @ np.asarray(rho, dtype=complex) @ phi))


def wootters_concurrence(rho):
    """Concurrence of a two-qubit state; equals CREN when d = 2"""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4) or not is_hermitian(rho, 1e-9):
        raise ValueError("Concurrence needs a 4x4 Hermitian two-qubit state")

    sigma_y = np.array([[0, -1j], [1j, 0]])
    flip = np.kron(sigma_y, sigma_y)
    rho_tilde = flip @ rho.conj() @ flip

    values, vectors = hermitian_eigh(rho)
    sqrt_rho = (vectors * np.sqrt(np.clip(values, 0.0, None))) @ vectors.conj().T
    product = sqrt_rho @ rho_tilde @ sqrt_rho
    product = 0.5 * (product + product.conj().T)

    lambdas, _ = hermitian_eigh(product)
    lambdas = np.sqrt(np.clip(lambdas, 0.0, None))
    return max(float(lambdas[0] - lambdas[1:].sum()), 0.0)
