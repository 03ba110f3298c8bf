# verification_suite.py
# Property checks and parameter sweeps behind the verify and sweep commands

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np
import pandas as pd

from depolarizing_channel import DepolarizingChannel
from distribution_analyzer import (
    DENSE_SLOW_MAX_DIM,
    MIN_SCAN_RESOLUTION,
    SATURATION_TOL,
    RouteDisagreementError,
    corollary2_report,
    dense_dim_cap,
    fidelity_axis,
    lemma1_fidelity,
    on_saturation_boundary,
    saturation_boundary_scan,
    theorem1_report,
    verify_lemma1,
)
from entanglement_measures import BipartiteCut, cren_isotropic, negativity
from qudit_states import (
    MAX_QUDIT_DIM,
    IsotropicParams,
    PauliLabel,
    all_pauli_labels,
    bell_basis,
    clock_operator,
    isotropic_state,
    omega_powers,
    pauli,
    phi_plus_projector,
    random_density_matrix,
    shift_operator,
)

logger = logging.getLogger(__name__)

MODES = ("fast", "slow")
CSV_COLUMNS = ["d", "F0", "F1", "Fprime", "lhs", "rhs", "gap", "saturated"]
CSV_FLOAT_FORMAT = "%.12g"

LEMMA1_AXIS = [0.0, 0.25, 0.5, 0.75, 1.0]
CREN_AXIS_POINTS = 21
COVARIANCE_TRIALS = 100


@dataclass
class SweepConfig:
    dims: list = field(default_factory=lambda: [2, 3, 4])
    grid: int = 11
    tol: float = 1e-9
    mode: str = "fast"
    seed: int = 0
    output_path: str = None
    workers: int = 1

    def __post_init__(self):
        if self.grid < 2:
            raise ValueError(f"grid must be >= 2, got {self.grid}")
        if not self.tol > 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.dims:
            raise ValueError("at least one dimension is required")
        for d in self.dims:
            if not 2 <= d <= MAX_QUDIT_DIM:
                raise ValueError(f"d must lie in [2, {MAX_QUDIT_DIM}], got {d}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")

    @property
    def slow(self):
        return self.mode == "slow"

    def require_dense_dims(self):
        """Dense verification needs slow mode above d = 4"""
        cap = dense_dim_cap(self.slow)
        too_large = [d for d in self.dims if d > cap]
        if too_large:
            hint = "run with --slow" if not self.slow else f"the dense route stops at d = {cap}"
            raise ValueError(f"d = {too_large} needs dense simulation beyond d = {cap}; {hint}")

    def parallel_map(self, func, items):
        """Map in input order, on a thread pool when workers > 1"""
        if self.workers == 1:
            return [func(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(func, items))


@dataclass
class CheckResult:
    name: str
    worst: float
    passed: bool

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} worst={self.worst:.3e}"


class VerificationSuite:
    def __init__(self, config):
        """
        Initialize the verification suite

        Parameters:
        - config: SweepConfig with dims, grid, tolerance, mode and seed
        """
        self.config = config
        self.checks = [
            ("pauli_algebra", self.check_pauli_algebra),
            ("bell_basis", self.check_bell_basis),
            ("choi_identity", self.check_choi_identity),
            ("pauli_covariance", self.check_pauli_covariance),
            ("lemma1", self.check_lemma1),
            ("isotropic_cren", self.check_isotropic_cren),
            ("theorem1", self.check_theorem1),
            ("equivalence", self.check_equivalence),
            ("saturation", self.check_saturation),
            ("chain_associativity", self.check_chain_associativity),
        ]

    def run(self):
        """
        Run every check

        Returns:
        - List of CheckResult in check order
        """
        results = []
        for name, check in self.checks:
            logger.info("Running check %s", name)
            try:
                worst = float(check())
            except RouteDisagreementError as e:
                logger.error("%s: %s", name, e)
                worst = float("inf")
            results.append(CheckResult(name, worst, worst <= self.config.tol))
        return results

    def _grid(self, d):
        return list(product(fidelity_axis(self.config.grid, d), repeat=2))

    def check_pauli_algebra(self):
        worst = 0.0
        for d in self.config.dims:
            X, Z = shift_operator(d), clock_operator(d)
            omega = omega_powers(d)[1]
            worst = max(worst, np.abs(Z @ X - omega * X @ Z).max())
            for label in all_pauli_labels(d):
                P = pauli(label)
                worst = max(worst, np.abs(P.conj().T @ P - np.eye(d)).max())
        return worst

    def check_bell_basis(self):
        worst = 0.0
        for d in self.config.dims:
            basis = bell_basis(d)
            identity = np.eye(d * d)
            worst = max(worst, np.abs(basis.conj().T @ basis - identity).max())
            worst = max(worst, np.abs(basis @ basis.conj().T - identity).max())
        return worst

    def check_choi_identity(self):
        worst = 0.0
        for d in self.config.dims:
            projector = phi_plus_projector(d)
            for step in range(11):
                F = step / 10
                channel = DepolarizingChannel(d, F)
                target = isotropic_state(IsotropicParams(d, F))
                for side in ("left", "right"):
                    evolved = channel.apply_one_sided(projector, side=side)
                    worst = max(worst, np.abs(evolved - target).max())
        return worst

    def check_pauli_covariance(self):
        rng = np.random.default_rng(self.config.seed)
        worst = 0.0
        for d in self.config.dims:
            for _ in range(COVARIANCE_TRIALS):
                channel = DepolarizingChannel(d, rng.uniform())
                rho = random_density_matrix(d, rng)
                label = PauliLabel(int(rng.integers(d)), int(rng.integers(d)), d)
                worst = max(worst, channel.check_pauli_covariance(rho, label))
        return worst

    def check_lemma1(self):
        cap = dense_dim_cap(self.config.slow)
        points = [
            (d, F0, F1)
            for d in self.config.dims if d <= cap
            for F0, F1 in product(LEMMA1_AXIS, repeat=2)
        ]
        deviations = self.config.parallel_map(
            lambda p: verify_lemma1(p[1], p[2], p[0], tol=self.config.tol, slow=self.config.slow),
            points,
        )
        return max(deviations, default=0.0)

    def check_isotropic_cren(self):
        worst = 0.0
        for d in self.config.dims:
            cut = BipartiteCut.symmetric(d)
            for step in range(CREN_AXIS_POINTS):
                params = IsotropicParams(d, step / (CREN_AXIS_POINTS - 1))
                value = negativity(isotropic_state(params), cut)
                worst = max(worst, abs(value - cren_isotropic(params)))
        return worst

    def check_theorem1(self):
        cap = dense_dim_cap(self.config.slow)
        worst = 0.0
        for d in self.config.dims:
            dense = d <= cap
            reports = self.config.parallel_map(
                lambda p: theorem1_report(p[0], p[1], d, dense=dense, slow=self.config.slow),
                self._grid(d),
            )
            worst = max(worst, max(max(0.0, -report.gap) for report in reports))
        return worst

    def check_equivalence(self):
        worst = 0.0
        for d in self.config.dims:
            deviations = self.config.parallel_map(
                lambda p: theorem1_report(p[0], p[1], d, dense=False).max_deviation(
                    corollary2_report(p[0], p[1], d)),
                self._grid(d),
            )
            worst = max(worst, max(deviations))
        return worst

    def check_saturation(self):
        resolution = max(self.config.grid, MIN_SCAN_RESOLUTION)
        worst = 0.0
        for d in self.config.dims:
            for F0, F1, gap in saturation_boundary_scan(d, resolution):
                if on_saturation_boundary(F0, F1, d):
                    worst = max(worst, abs(gap))
                elif gap <= SATURATION_TOL:
                    logger.error("Unexpected saturation at d=%d F0=%g F1=%g", d, F0, F1)
                    worst = float("inf")
        return worst

    def check_chain_associativity(self):
        worst = 0.0
        for d in self.config.dims:
            for a, b, c in product(LEMMA1_AXIS, repeat=3):
                left = lemma1_fidelity(lemma1_fidelity(a, b, d), c, d)
                right = lemma1_fidelity(a, lemma1_fidelity(b, c, d), d)
                worst = max(worst, abs(left - right))
        return worst


def sweep_table(config):
    """
    Bound reports over the fidelity grid of every configured dimension

    Parameters:
    - config: SweepConfig; slow mode adds the dense cross-check for d <= 6

    Returns:
    - pandas DataFrame with the CSV columns, in (d, F0, F1) order
    """
    rows = []
    for d in config.dims:
        dense = config.slow and d <= DENSE_SLOW_MAX_DIM
        axis = fidelity_axis(config.grid, d)
        reports = config.parallel_map(
            lambda p: theorem1_report(p[0], p[1], d, dense=dense, slow=config.slow),
            list(product(axis, repeat=2)),
        )
        rows.extend(report.as_row() for report in reports)
        logger.info("Swept d=%d over %d points", d, len(reports))
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def write_sweep_csv(table, output_path):
    """Write the sweep table with 12 significant digits and lowercase booleans"""
    table = table.copy()
    table["saturated"] = table["saturated"].map({True: "true", False: "false"})
    table.to_csv(output_path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
