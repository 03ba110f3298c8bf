# tensor_core.py
# Dense complex linear algebra and subsystem index manipulation for multipartite states

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

logger = logging.getLogger(__name__)

# Flagged-Hermitian values: max |A - A^H| <= HERMITIAN_TOL * max(1, max |A|)
HERMITIAN_TOL = 1e-12
# The eigensolver accepts round-off from kron/trace chains above HERMITIAN_TOL
EIGEN_HERMITIAN_TOL = 1e-9
# PSD inputs: eigenvalues in [PSD_ERROR_TOL, 0) are clipped, below it is an error
PSD_ERROR_TOL = -1e-8


@dataclass(frozen=True)
class SubsystemShape:
    """Ordered local dimensions of a multipartite space (subsystem 0 is most significant)"""
    dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ValueError("SubsystemShape needs at least one factor")
        for d in dims:
            if d < 2:
                raise ValueError(f"Local dimension must be >= 2, got {d}")
        object.__setattr__(self, "dims", dims)

    @property
    def total(self):
        return int(np.prod(self.dims))

    def __len__(self):
        return len(self.dims)

    def permuted(self, perm):
        """Shape of a state after permute_subsystems(rho, self, perm)"""
        _check_permutation(perm, len(self.dims))
        return SubsystemShape(tuple(self.dims[p] for p in perm))


def as_shape(shape):
    """Accept a SubsystemShape or any sequence of local dimensions"""
    if isinstance(shape, SubsystemShape):
        return shape
    return SubsystemShape(tuple(shape))


def _check_square(rho, shape):
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {rho.shape}")
    if rho.shape[0] != shape.total:
        raise ValueError(
            f"Matrix dimension {rho.shape[0]} does not match subsystem dims {shape.dims}"
        )
    return rho


def _check_permutation(perm, n):
    if sorted(perm) != list(range(n)):
        raise ValueError(f"Invalid permutation {list(perm)} for {n} subsystems")


def kron(A, B):
    """Kronecker product A ⊗ B with block structure A[i][j]·B"""
    return np.kron(np.asarray(A, dtype=complex), np.asarray(B, dtype=complex))


def is_hermitian(A, tol=HERMITIAN_TOL):
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    scale = max(1.0, float(np.abs(A).max(initial=0.0)))
    return float(np.abs(A - A.conj().T).max(initial=0.0)) <= tol * scale


def partial_trace(rho, shape, keep):
    """
    Trace out every subsystem not listed in keep

    Parameters:
    - rho: Square matrix on the space described by shape
    - shape: SubsystemShape (or list of local dimensions)
    - keep: Subsystem indices to keep, in the order they should appear

    Returns:
    - Reduced matrix on the kept subsystems (1x1 trace when keep is empty)
    """
    shape = as_shape(shape)
    rho = _check_square(rho, shape)
    keep = [int(i) for i in keep]
    n = len(shape)

    for i in keep:
        if not 0 <= i < n:
            raise ValueError(f"Subsystem index {i} out of range for {n} subsystems")
    if len(set(keep)) != len(keep):
        raise ValueError(f"Repeated subsystem index in {keep}")

    traced = [i for i in range(n) if i not in keep]
    dims = shape.dims
    kept_dim = int(np.prod([dims[i] for i in keep], dtype=int))
    traced_dim = int(np.prod([dims[i] for i in traced], dtype=int))

    order = keep + traced + [n + i for i in keep] + [n + i for i in traced]
    tensor = rho.reshape(dims + dims).transpose(order)
    tensor = tensor.reshape(kept_dim, traced_dim, kept_dim, traced_dim)
    return np.einsum("ajbj->ab", tensor)


def partial_transpose(rho, shape, subsystem):
    """Transpose the indices of one factor of a bipartite matrix"""
    shape = as_shape(shape)
    if len(shape) != 2:
        raise ValueError(f"Partial transpose needs a bipartite shape, got {shape.dims}")
    if subsystem not in (0, 1):
        raise ValueError(f"Subsystem must be 0 or 1, got {subsystem}")
    rho = _check_square(rho, shape)

    dA, dB = shape.dims
    tensor = rho.reshape(dA, dB, dA, dB)
    if subsystem == 0:
        tensor = tensor.transpose(2, 1, 0, 3)
    else:
        tensor = tensor.transpose(0, 3, 2, 1)
    return tensor.reshape(dA * dB, dA * dB)


def permute_subsystems(rho, shape, perm):
    """
    Reorder tensor factors: factor i of the result is factor perm[i] of rho

    Parameters:
    - rho: Square matrix on the space described by shape
    - shape: SubsystemShape (or list of local dimensions)
    - perm: Permutation of range(len(shape))

    Returns:
    - Matrix on the permuted space, see SubsystemShape.permuted
    """
    shape = as_shape(shape)
    rho = _check_square(rho, shape)
    n = len(shape)
    perm = [int(p) for p in perm]
    _check_permutation(perm, n)

    tensor = rho.reshape(shape.dims + shape.dims)
    tensor = tensor.transpose(perm + [n + p for p in perm])
    return tensor.reshape(shape.total, shape.total)


def _hermitian_part(H):
    H = np.asarray(H, dtype=complex)
    if not is_hermitian(H, EIGEN_HERMITIAN_TOL):
        raise ValueError("Matrix is not Hermitian within tolerance")
    return 0.5 * (H + H.conj().T)


def hermitian_eigh(H):
    """Eigenvalues (descending) and matching eigenvector columns of a Hermitian matrix"""
    values, vectors = scipy.linalg.eigh(_hermitian_part(H))
    return values[::-1], vectors[:, ::-1]


def hermitian_eigenvalues(H):
    """Real eigenvalues of a Hermitian matrix, descending"""
    values = scipy.linalg.eigh(_hermitian_part(H), eigvals_only=True)
    return values[::-1]


def _clipped_spectrum(rho):
    values = hermitian_eigenvalues(rho)
    if values[-1] < PSD_ERROR_TOL:
        raise ValueError(f"Matrix is not positive semidefinite (eigenvalue {values[-1]:.3e})")
    return np.clip(values, 0.0, None)


def trace_sqrt(rho):
    """tr √ρ for a positive semidefinite ρ"""
    return float(np.sqrt(_clipped_spectrum(rho)).sum())


def trace_norm(A):
    """‖A‖₁ for a Hermitian A"""
    return float(np.abs(hermitian_eigenvalues(A)).sum())


def check_density_matrix(rho, tol=1e-8):
    """
    Validate a density matrix: Hermitian, unit trace, positive semidefinite

    Parameters:
    - rho: Candidate density matrix
    - tol: Tolerance for the Hermiticity, trace and eigenvalue checks

    Returns:
    - rho as a complex array
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {rho.shape}")
    if not is_hermitian(rho, tol):
        raise ValueError("Density matrix is not Hermitian")
    trace = np.trace(rho)
    if abs(trace - 1.0) > tol:
        raise ValueError(f"Density matrix trace is {trace.real:.12g}, expected 1")
    smallest = hermitian_eigenvalues(rho)[-1]
    if smallest < -tol:
        raise ValueError(f"Density matrix is not positive semidefinite (eigenvalue {smallest:.3e})")
    return rho
