# depolarizing_channel.py
# Generalized depolarizing channel, its one-sided action and its Choi state

import logging

import numpy as np

from qudit_states import (
    all_pauli_labels,
    pauli,
    phi_plus_projector,
    validate_dim,
    validate_fidelity,
)
from tensor_core import as_shape, kron

logger = logging.getLogger(__name__)

SIDES = ("left", "right")


class DepolarizingChannel:
    def __init__(self, d, F):
        """
        Initialize the generalized depolarizing channel $_F

        Parameters:
        - d: Qudit dimension
        - F: Channel fidelity in [0, 1]
        """
        self.d = validate_dim(d)
        self.F = validate_fidelity(F)
        self._kraus = None

    def __repr__(self):
        return f"DepolarizingChannel(d={self.d}, F={self.F})"

    def kraus_operators(self):
        """
        Kraus operators in a fixed summation order

        Returns:
        - List of (weight, operator) pairs, identity first; the Kraus operator
          is sqrt(weight) * operator
        """
        if self._kraus is None:
            d = self.d
            rest = (1.0 - self.F) / (d * d - 1)
            self._kraus = [
                (self.F if (label.k, label.l) == (0, 0) else rest, pauli(label))
                for label in all_pauli_labels(d)
            ]
        return self._kraus

    def _kraus_sum(self, rho, embed):
        result = np.zeros_like(rho)
        for weight, operator in self.kraus_operators():
            if weight == 0.0:
                continue
            K = embed(operator)
            result += weight * (K @ rho @ K.conj().T)
        return result

    def apply(self, rho):
        """
        Apply $_F to a single-qudit matrix

        Parameters:
        - rho: d×d Hermitian matrix

        Returns:
        - F ρ + (1-F)/(d²-1) Σ_{(j,k)≠(0,0)} X^j Z^k ρ Z^{-k} X^{-j}
        """
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self.d, self.d):
            raise ValueError(f"Expected a {self.d}x{self.d} matrix, got shape {rho.shape}")
        return self._kraus_sum(rho, lambda operator: operator)

    def apply_one_sided(self, rho, side="right", shape=None):
        """
        Apply $_F to one factor of a bipartite matrix

        Parameters:
        - rho: Bipartite matrix
        - side: "left" for ($_F⊗I), "right" for (I⊗$_F)
        - shape: Bipartite SubsystemShape; defaults to (d, d)

        Returns:
        - The evolved bipartite matrix
        """
        if side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}, got {side!r}")
        shape = as_shape(shape if shape is not None else (self.d, self.d))
        if len(shape) != 2:
            raise ValueError(f"One-sided application needs a bipartite shape, got {shape.dims}")
        dA, dB = shape.dims
        acted = dA if side == "left" else dB
        if acted != self.d:
            raise ValueError(f"Acted factor has dimension {acted}, channel acts on d={self.d}")

        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (shape.total, shape.total):
            raise ValueError(f"Matrix shape {rho.shape} does not match subsystem dims {shape.dims}")

        if side == "left":
            identity = np.eye(dB, dtype=complex)
            return self._kraus_sum(rho, lambda operator: kron(operator, identity))
        identity = np.eye(dA, dtype=complex)
        return self._kraus_sum(rho, lambda operator: kron(identity, operator))

    def choi_state(self):
        """(I⊗$_F)(|Φ+><Φ+|)"""
        return self.apply_one_sided(phi_plus_projector(self.d), side="right")

    def check_pauli_covariance(self, rho, label):
        """Max entrywise |$_F(PρP†) - P $_F(ρ) P†| for P = X^k Z^l"""
        if label.d != self.d:
            raise ValueError(f"Label dimension {label.d} does not match channel d={self.d}")
        P = pauli(label)
        lhs = self.apply(P @ rho @ P.conj().T)
        rhs = P @ self.apply(rho) @ P.conj().T
        return float(np.abs(lhs - rhs).max())


def apply_two_sided(left, right, rho):
    """($_left ⊗ $_right)(ρ) on a d_left ⊗ d_right matrix"""
    shape = (left.d, right.d)
    evolved = right.apply_one_sided(rho, side="right", shape=shape)
    return left.apply_one_sided(evolved, side="left", shape=shape)
