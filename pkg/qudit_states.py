# qudit_states.py
# Generalized Pauli operators, generalized Bell states and isotropic states

from dataclasses import dataclass

import numpy as np
from scipy.stats import unitary_group

# Largest local dimension the toolkit is sized for
MAX_QUDIT_DIM = 8


def validate_dim(d):
    """Check a qudit dimension and return it as int"""
    if int(d) != d or d < 2:
        raise ValueError(f"Qudit dimension must be an integer >= 2, got {d}")
    return int(d)


def validate_fidelity(F):
    if not 0.0 <= F <= 1.0:
        raise ValueError(f"Fidelity must lie in [0, 1], got {F}")
    return float(F)


@dataclass(frozen=True)
class PauliLabel:
    """Label (k, l) of X^k Z^l: k is the shift, l the phase"""
    k: int
    l: int
    d: int

    def __post_init__(self):
        d = validate_dim(self.d)
        object.__setattr__(self, "d", d)
        if not (0 <= self.k < d and 0 <= self.l < d):
            raise ValueError(f"Pauli label ({self.k}, {self.l}) out of range for d={d}")

    def as_pair(self):
        return (self.k, self.l)


@dataclass(frozen=True)
class IsotropicParams:
    d: int
    F: float

    def __post_init__(self):
        object.__setattr__(self, "d", validate_dim(self.d))
        object.__setattr__(self, "F", validate_fidelity(self.F))


def omega_powers(d):
    """
    Table of ω^j for j = 0..d-1 with ω = exp(2πi/d)

    Built by repeated multiplication of the principal root; callers reduce
    exponents mod d before indexing.
    """
    d = validate_dim(d)
    omega = np.exp(2j * np.pi / d)
    powers = np.empty(d, dtype=complex)
    powers[0] = 1.0
    for j in range(1, d):
        powers[j] = powers[j - 1] * omega
    return powers


def shift_operator(d, power=1):
    """X^power with X|j> = |j+1 mod d>"""
    d = validate_dim(d)
    return np.roll(np.eye(d, dtype=complex), power % d, axis=0)


def clock_operator(d, power=1):
    """Z^power with Z|j> = ω^j |j>"""
    d = validate_dim(d)
    powers = omega_powers(d)
    exponents = (np.arange(d) * power) % d
    return np.diag(powers[exponents])


def pauli(label):
    """The d×d unitary X^k Z^l"""
    return shift_operator(label.d, label.k) @ clock_operator(label.d, label.l)


def all_pauli_labels(d):
    """All d² labels in (k, l) order, k major; (0, 0) first"""
    d = validate_dim(d)
    return [PauliLabel(k, l, d) for k in range(d) for l in range(d)]


def bell_state(label):
    """|Ψ_{k,l}> = (1/√d) Σ_j ω^{jl} |j, j+k mod d>"""
    d, k, l = label.d, label.k, label.l
    powers = omega_powers(d)
    state = np.zeros(d * d, dtype=complex)
    for j in range(d):
        state[j * d + (j + k) % d] = powers[(j * l) % d]
    return state / np.sqrt(d)


def phi_plus(d):
    return bell_state(PauliLabel(0, 0, d))


def phi_plus_projector(d):
    phi = phi_plus(d)
    return np.outer(phi, phi.conj())


def bell_basis(d):
    """Unitary whose column k*d + l is |Ψ_{k,l}>"""
    return np.column_stack([bell_state(label) for label in all_pauli_labels(d)])


def isotropic_state(params):
    """
    Two-qudit isotropic state ρ_F

    Parameters:
    - params: IsotropicParams (d, F)

    Returns:
    - F|Φ+><Φ+| + (1-F)/(d²-1) (I⊗I - |Φ+><Φ+|)
    """
    d, F = params.d, params.F
    projector = phi_plus_projector(d)
    complement = np.eye(d * d, dtype=complex) - projector
    return F * projector + (1.0 - F) / (d * d - 1) * complement


# Seeded samplers used by tests and the verification suite

def random_unitary(d, rng):
    """Haar-random d×d unitary"""
    return unitary_group.rvs(d, random_state=rng)


def random_pure_state(dim, rng):
    state = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return state / np.linalg.norm(state)


def random_density_matrix(dim, rng, rank=None):
    """Ginibre-distributed density matrix of the given rank (full rank by default)"""
    rank = dim if rank is None else rank
    G = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real
