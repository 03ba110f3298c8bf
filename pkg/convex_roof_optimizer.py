# convex_roof_optimizer.py
# Multi-start numerical upper bound on the convex-roof CREN of a mixed state

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.optimize import minimize

from entanglement_measures import cren_pure
from tensor_core import check_density_matrix, hermitian_eigh

logger = logging.getLogger(__name__)

# Eigenvalues below this are treated as zero when computing the rank
RANK_CUTOFF = 1e-10
# V^H V = I_r must hold to this tolerance
ISOMETRY_TOL = 1e-10
# Ensemble members lighter than this carry a placeholder state
ZERO_WEIGHT = 1e-15
# Relative size below which a singular value counts as zero in the gradient
SINGULAR_CUTOFF = 1e-12
DEFAULT_RESTARTS = 20
DEFAULT_BUDGET = 500
# Standard deviation of the random generator parameters of restarts >= 1
INITIAL_SCALE = 1.0


@dataclass
class EnsembleDecomposition:
    """Pure-state ensemble {p_k, |φ_k>} generated by an isometry V"""
    weights: np.ndarray
    states: np.ndarray  # row k is |φ_k>
    isometry: np.ndarray

    def __len__(self):
        return len(self.weights)

    def reconstruct(self):
        """Σ p_k |φ_k><φ_k|"""
        return (self.states.T * self.weights) @ self.states.conj()


@dataclass
class ConvexRoofResult:
    value: float
    best: EnsembleDecomposition
    ensemble_size: int
    restarts: int
    budget_exhausted: bool
    restart_values: list = field(default_factory=list)
    # Always an upper bound on the convex roof; local search gives no certificate
    is_upper_bound: bool = True


def spectral_decomposition(rho, cutoff=RANK_CUTOFF):
    """Eigenvalues above cutoff (descending) and their eigenvector columns"""
    values, vectors = hermitian_eigh(rho)
    support = values > cutoff
    return values[support], vectors[:, support]


def realize_ensemble(eig, V):
    """
    Ensemble of ρ generated by an isometry (Schrödinger-HJW realization)

    Parameters:
    - eig: (eigenvalues, eigenvector columns) of ρ restricted to its support
    - V: m×r isometry, r the number of eigenvalues

    Returns:
    - EnsembleDecomposition with √p_k |φ_k> = Σ_j V[k][j] √λ_j |e_j>
    """
    values, vectors = eig
    values = np.asarray(values, dtype=float)
    V = np.asarray(V, dtype=complex)
    if V.ndim != 2 or V.shape[1] != len(values):
        raise ValueError(f"Isometry shape {V.shape} does not match rank {len(values)}")
    deviation = np.abs(V.conj().T @ V - np.eye(V.shape[1])).max()
    if deviation > ISOMETRY_TOL:
        raise ValueError(f"V is not an isometry (|V^H V - I| = {deviation:.3e})")

    unnormalized = V @ (np.sqrt(values)[:, None] * vectors.T)
    weights = np.sum(np.abs(unnormalized) ** 2, axis=1)

    states = np.empty_like(unnormalized)
    for k, weight in enumerate(weights):
        if weight > ZERO_WEIGHT:
            states[k] = unnormalized[k] / np.sqrt(weight)
        else:
            states[k] = vectors[:, 0]
    return EnsembleDecomposition(weights=weights, states=states, isometry=V)


def _hermitian_from_params(x, m):
    """Hermitian m×m matrix from m² reals: diagonal, then upper-triangle real and imaginary parts"""
    upper = np.triu_indices(m, 1)
    n_off = len(upper[0])
    H = np.zeros((m, m), dtype=complex)
    H[np.diag_indices(m)] = x[:m]
    H[upper] = x[m:m + n_off] + 1j * x[m + n_off:]
    return H + np.triu(H, 1).conj().T


def _params_gradient(G, m):
    """Pull a gradient with respect to A = iH back to the parameters of H"""
    upper = np.triu_indices(m, 1)
    lower = (upper[1], upper[0])
    return np.concatenate([
        np.diag(G).imag,
        G[upper].imag + G[lower].imag,
        G[lower].real - G[upper].real,
    ])


class ConvexRoofOptimizer:
    def __init__(self, cut, ensemble_size=None, restarts=DEFAULT_RESTARTS,
                 budget=DEFAULT_BUDGET, seed=0, workers=1):
        """
        Initialize the convex-roof optimizer

        Parameters:
        - cut: BipartiteCut of the states to be optimized
        - ensemble_size: Number of ensemble members m (default r², r = rank)
        - restarts: Number of local searches; restart 0 starts at the eigen-ensemble
        - budget: Iteration cap per restart
        - seed: Seed of the per-restart random streams
        - workers: Threads used to run restarts
        """
        if restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {restarts}")
        if budget < 1:
            raise ValueError(f"budget must be >= 1, got {budget}")
        self.cut = cut
        self.ensemble_size = ensemble_size
        self.restarts = int(restarts)
        self.budget = int(budget)
        self.seed = int(seed)
        self.workers = max(1, int(workers))

    def restart_rng(self, index):
        """Counter-based stream for one restart, independent of execution order"""
        return np.random.Generator(np.random.Philox(np.random.SeedSequence([self.seed, index])))

    def _objective(self, x, m, r, basis):
        cut = self.cut
        A = 1j * _hermitian_from_params(x, m)
        V = scipy.linalg.expm(A)[:, :r]
        psi = V @ basis
        blocks = psi.reshape(m, cut.dA, cut.dB)

        u, s, vh = np.linalg.svd(blocks, full_matrices=False)
        nuclear = s.sum(axis=1)
        norms = np.sum(np.abs(psi) ** 2, axis=1)
        value = float((nuclear ** 2 - norms).sum()) / (cut.d - 1)

        # Null singular directions contribute nothing (minimal-norm subgradient)
        support = s > SINGULAR_CUTOFF * max(1.0, float(s.max(initial=0.0)))
        polar = (u * support[:, None, :]) @ vh
        grad_blocks = 2.0 * (nuclear[:, None, None] * polar - blocks) / (cut.d - 1)
        grad_V = grad_blocks.reshape(m, -1) @ basis.conj().T
        grad_U = np.zeros((m, m), dtype=complex)
        grad_U[:, :r] = grad_V
        grad_A = scipy.linalg.expm_frechet(A.conj().T, grad_U, compute_expm=False)
        return value, _params_gradient(grad_A, m)

    def _run_restart(self, index, m, r, basis):
        if index == 0:
            x0 = np.zeros(m * m)
        else:
            x0 = self.restart_rng(index).normal(scale=INITIAL_SCALE, size=m * m)
        result = minimize(
            self._objective, x0, args=(m, r, basis), jac=True, method="L-BFGS-B",
            options={"maxiter": self.budget, "ftol": 1e-15, "gtol": 1e-12},
        )
        exhausted = result.status == 1
        logger.debug("Restart %d: value %.12g after %d iterations", index, result.fun, result.nit)
        return float(result.fun), result.x, exhausted

    def optimize(self, rho):
        """
        Search pure-state decompositions of ρ for the smallest average CREN

        Parameters:
        - rho: Density matrix on the optimizer's cut

        Returns:
        - ConvexRoofResult; value is an upper bound on the convex roof
        """
        rho = check_density_matrix(rho)
        if rho.shape[0] != self.cut.total:
            raise ValueError(f"Matrix dimension {rho.shape[0]} does not match cut {self.cut.dims}")

        values, vectors = spectral_decomposition(rho)
        r = len(values)
        m = r * r if self.ensemble_size is None else int(self.ensemble_size)
        if m < r:
            raise ValueError(f"Ensemble size {m} is smaller than the rank {r}")
        basis = np.sqrt(values)[:, None] * vectors.T

        def run(index):
            return self._run_restart(index, m, r, basis)

        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                outcomes = list(pool.map(run, range(self.restarts)))
        else:
            outcomes = [run(index) for index in range(self.restarts)]

        # min() keeps the first of equal values: ties go to the lowest restart index
        best_index = min(range(len(outcomes)), key=lambda i: outcomes[i][0])
        best_x = outcomes[best_index][1]
        exhausted = any(outcome[2] for outcome in outcomes)
        if exhausted:
            logger.warning("Iteration budget %d exhausted in at least one restart", self.budget)

        V = scipy.linalg.expm(1j * _hermitian_from_params(best_x, m))[:, :r]
        ensemble = realize_ensemble((values, vectors), V)
        value = sum(
            weight * cren_pure(state, self.cut)
            for weight, state in zip(ensemble.weights, ensemble.states)
            if weight > ZERO_WEIGHT
        )
        return ConvexRoofResult(
            value=float(value),
            best=ensemble,
            ensemble_size=m,
            restarts=self.restarts,
            budget_exhausted=exhausted,
            restart_values=[outcome[0] for outcome in outcomes],
        )


def convex_roof_upper_bound(rho, cut, m=None, restarts=DEFAULT_RESTARTS,
                            budget=DEFAULT_BUDGET, seed=0, workers=1):
    """Best average pure-state CREN found over explored decompositions of ρ"""
    optimizer = ConvexRoofOptimizer(cut, ensemble_size=m, restarts=restarts,
                                    budget=budget, seed=seed, workers=workers)
    return optimizer.optimize(rho)
