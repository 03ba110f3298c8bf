# distribution_analyzer.py
# Remote entanglement distribution by generalized Bell measurement and its entanglement bounds

import logging
from dataclasses import asdict, dataclass, field
from functools import reduce

import numpy as np

from convex_roof_optimizer import convex_roof_upper_bound
from depolarizing_channel import DepolarizingChannel, apply_two_sided
from entanglement_measures import (
    BipartiteCut,
    cren_isotropic,
    isotropic_fidelity,
    negativity,
)
from qudit_states import (
    IsotropicParams,
    all_pauli_labels,
    bell_state,
    isotropic_state,
    pauli,
    phi_plus_projector,
    validate_dim,
    validate_fidelity,
)
from tensor_core import kron, partial_trace, permute_subsystems

logger = logging.getLogger(__name__)

# Outcomes with Q below this carry no state
ZERO_PROBABILITY = 1e-14
# Analytic and dense routes of a report must agree to this tolerance
ROUTE_AGREEMENT_TOL = 1e-9
SATURATION_TOL = 1e-9
# Largest d simulated densely (d^4-dimensional states) with and without slow mode
DENSE_MAX_DIM = 4
DENSE_SLOW_MAX_DIM = 6
MIN_SCAN_RESOLUTION = 11

# Order (1, 4, 2, 3) of the four-qudit factors 1, 2, 3, 4
MEASUREMENT_ORDER = (0, 3, 1, 2)


class RouteDisagreementError(RuntimeError):
    """Two independent computations of the same quantity disagree"""


@dataclass
class REDOutcome:
    """One Bell-measurement branch; state is None when the outcome has zero probability"""
    k: int
    l: int
    probability: float
    state: np.ndarray = field(default=None, repr=False)

    @property
    def defined(self):
        return self.state is not None


@dataclass
class BoundReport:
    d: int
    F0: float
    F1: float
    Fprime: float
    lhs: float
    rhs: float
    gap: float
    saturated: bool

    def as_row(self):
        return asdict(self)

    def max_deviation(self, other):
        """Largest field-by-field difference to another report"""
        fields = ("Fprime", "lhs", "rhs", "gap")
        deviation = max(abs(getattr(self, name) - getattr(other, name)) for name in fields)
        if (self.d, self.saturated) != (other.d, other.saturated):
            return float("inf")
        return max(deviation, abs(self.F0 - other.F0), abs(self.F1 - other.F1))


def dense_dim_cap(slow=False):
    return DENSE_SLOW_MAX_DIM if slow else DENSE_MAX_DIM


def _check_dense_dim(d, slow):
    cap = dense_dim_cap(slow)
    if d > cap:
        hint = "" if slow else "; use slow mode for d <= 6"
        raise ValueError(f"Dense simulation is limited to d <= {cap}{hint}")


def conjugate_pauli(k, l, d):
    """(X^k Z^l)*: the local unitary relating outcome (k, l) to outcome (0, 0)"""
    return pauli(all_pauli_labels(d)[k * d + l]).conj()


def bell_measure_23(rho12, rho34, d):
    """
    Measure subsystems 2, 3 of ρ12 ⊗ ρ34 in the generalized Bell basis

    Parameters:
    - rho12: d²×d² density matrix on subsystems 1, 2
    - rho34: d²×d² density matrix on subsystems 3, 4
    - d: Qudit dimension

    Returns:
    - d² REDOutcome entries in (k, l) order with Q_{k,l} and σ_{k,l} on subsystems 1, 4
    """
    d = validate_dim(d)
    for name, rho in (("rho12", rho12), ("rho34", rho34)):
        if np.shape(rho) != (d * d, d * d):
            raise ValueError(f"{name} has shape {np.shape(rho)}, expected ({d * d}, {d * d})")

    shape = (d, d, d, d)
    joint = permute_subsystems(kron(rho12, rho34), shape, MEASUREMENT_ORDER)
    # Factors are now (1, 4, 2, 3): contract the projector into the 23 block
    tensor = joint.reshape(d * d, d * d, d * d, d * d)

    outcomes = []
    skipped = 0
    for label in all_pauli_labels(d):
        psi = bell_state(label)
        projector = np.outer(psi, psi.conj())
        projected = np.einsum("ij,ajbk->aibk", projector, tensor).reshape(d ** 4, d ** 4)
        unnormalized = partial_trace(projected, shape, keep=[0, 1])
        probability = float(np.trace(unnormalized).real)
        if probability < ZERO_PROBABILITY:
            skipped += 1
            outcomes.append(REDOutcome(label.k, label.l, max(probability, 0.0), None))
            continue
        state = unnormalized / probability
        state = 0.5 * (state + state.conj().T)
        outcomes.append(REDOutcome(label.k, label.l, probability, state))

    if skipped:
        logger.warning("%d zero-probability outcomes carry no state", skipped)
    return outcomes


def lemma1_fidelity(F0, F1, d):
    """F' = (d²F0F1 - F0 - F1 + 1)/(d² - 1)"""
    F0, F1, d = validate_fidelity(F0), validate_fidelity(F1), validate_dim(d)
    value = (d * d * F0 * F1 - F0 - F1 + 1.0) / (d * d - 1)
    return float(np.clip(value, 0.0, 1.0))


def lhs_closed_form(F0, F1, d):
    """Expanded lhs (d³F0F1 - d² - dF0 - dF1 + d + 1)/((d-1)(d²-1)), valid when F' > 1/d"""
    return (d ** 3 * F0 * F1 - d * d - d * F0 - d * F1 + d + 1.0) / ((d - 1) * (d * d - 1))


def simulate_isotropic_pair(F0, F1, d, slow=False):
    """Bell-measurement outcomes for ρ_{F0} ⊗ ρ_{F1}"""
    d = validate_dim(d)
    _check_dense_dim(d, slow)
    rho12 = isotropic_state(IsotropicParams(d, F0))
    rho34 = isotropic_state(IsotropicParams(d, F1))
    return bell_measure_23(rho12, rho34, d)


def verify_lemma1(F0, F1, d, tol=1e-10, slow=False):
    """
    Check that every outcome of the isotropic-pair measurement is ρ_{F'} up to local unitaries

    Parameters:
    - F0, F1: Fidelities of the two isotropic pairs
    - d: Qudit dimension
    - tol: Contract tolerance; exceeding it is logged
    - slow: Allow dense simulation up to d = 6

    Returns:
    - Worst entrywise deviation over all comparisons
    """
    outcomes = simulate_isotropic_pair(F0, F1, d, slow=slow)
    target = isotropic_state(IsotropicParams(d, lemma1_fidelity(F0, F1, d)))
    sigma00 = outcomes[0].state

    deviations = [np.abs(sigma00 - target).max()]
    # σ_00 = ($_{F0} ⊗ $_{F1})(|Φ+><Φ+|) = (I ⊗ $_{F1})(ρ_{F0})
    by_channels = apply_two_sided(DepolarizingChannel(d, F0), DepolarizingChannel(d, F1),
                                  phi_plus_projector(d))
    by_dynamics = DepolarizingChannel(d, F1).apply_one_sided(
        isotropic_state(IsotropicParams(d, F0)), side="right")
    deviations.append(np.abs(sigma00 - by_channels).max())
    deviations.append(np.abs(sigma00 - by_dynamics).max())

    identity = np.eye(d, dtype=complex)
    for outcome in outcomes:
        deviations.append(abs(outcome.probability - 1.0 / (d * d)))
        U = kron(identity, conjugate_pauli(outcome.k, outcome.l, d))
        unrotated = U.conj().T @ outcome.state @ U
        deviations.append(np.abs(unrotated - target).max())

    worst = float(max(deviations))
    if worst > tol:
        logger.warning("Swapped-state deviation %.3e exceeds %.1e at d=%d F0=%g F1=%g",
                       worst, tol, d, F0, F1)
    return worst


def _saturated(gap):
    return gap <= SATURATION_TOL


def theorem1_report(F0, F1, d, dense=True, slow=False, convex_roof=False, seed=0):
    """
    Both sides of the distribution bound Σ Q N_c(σ) <= N_c(ρ_{F0}) N_c(ρ_{F1})

    Parameters:
    - F0, F1: Fidelities of the two isotropic pairs
    - d: Qudit dimension
    - dense: Cross-check the analytic lhs against a dense simulation
    - slow: Allow the dense simulation up to d = 6
    - convex_roof: Also bound CREN(σ_00) with the convex-roof optimizer
    - seed: Seed for the optimizer cross-check

    Returns:
    - BoundReport built from the analytic route
    """
    d = validate_dim(d)
    F0, F1 = validate_fidelity(F0), validate_fidelity(F1)
    Fprime = lemma1_fidelity(F0, F1, d)
    lhs = cren_isotropic(IsotropicParams(d, Fprime))
    rhs = cren_isotropic(IsotropicParams(d, F0)) * cren_isotropic(IsotropicParams(d, F1))

    if Fprime > 1.0 / d:
        expanded = lhs_closed_form(F0, F1, d)
        if abs(expanded - lhs) > ROUTE_AGREEMENT_TOL:
            raise RouteDisagreementError(
                f"Closed-form lhs {expanded:.12g} differs from {lhs:.12g} (d={d}, F0={F0}, F1={F1})")

    if dense:
        cut = BipartiteCut.symmetric(d)
        outcomes = simulate_isotropic_pair(F0, F1, d, slow=slow)
        numeric = sum(o.probability * negativity(o.state, cut) for o in outcomes if o.defined)
        if abs(numeric - lhs) > ROUTE_AGREEMENT_TOL:
            raise RouteDisagreementError(
                f"Dense lhs {numeric:.12g} differs from analytic {lhs:.12g} (d={d}, F0={F0}, F1={F1})")

        if convex_roof:
            bound = convex_roof_upper_bound(outcomes[0].state, cut, seed=seed)
            if bound.value < lhs - 1e-8:
                raise RouteDisagreementError(
                    f"Convex-roof value {bound.value:.12g} undercuts closed form {lhs:.12g}")

    gap = rhs - lhs
    return BoundReport(d, F0, F1, Fprime, lhs, rhs, gap, _saturated(gap))


def corollary2_report(F0, F1, d):
    """
    Both sides of the dynamics bound N[(I⊗$_{F1})(ρ_{F0})] <= N[(I⊗$_{F1})(Φ+)] N(ρ_{F0})

    The evolved states are isotropic, so negativity equals CREN on them.
    """
    d = validate_dim(d)
    F0, F1 = validate_fidelity(F0), validate_fidelity(F1)
    cut = BipartiteCut.symmetric(d)
    channel = DepolarizingChannel(d, F1)

    evolved = channel.apply_one_sided(isotropic_state(IsotropicParams(d, F0)), side="right")
    choi = channel.apply_one_sided(phi_plus_projector(d), side="right")

    lhs = negativity(evolved, cut)
    rhs = negativity(choi, cut) * cren_isotropic(IsotropicParams(d, F0))
    gap = rhs - lhs
    return BoundReport(d, F0, F1, isotropic_fidelity(evolved, d), lhs, rhs, gap, _saturated(gap))


def fidelity_axis(resolution, d=None):
    """Uniform grid on [0, 1] with both endpoints, plus 1/d as a probe point"""
    axis = [i / (resolution - 1) for i in range(resolution)]
    if d is not None:
        axis.append(1.0 / d)
    return sorted(set(axis))


def saturation_boundary_scan(d, resolution):
    """
    Gap of the distribution bound over a fidelity grid

    Parameters:
    - d: Qudit dimension
    - resolution: Points per fidelity axis (>= 11); 1/d is added as a probe

    Returns:
    - List of (F0, F1, gap) in row-major order
    """
    d = validate_dim(d)
    if resolution < MIN_SCAN_RESOLUTION:
        raise ValueError(f"Grid resolution must be >= {MIN_SCAN_RESOLUTION}, got {resolution}")
    axis = fidelity_axis(resolution, d)
    return [
        (F0, F1, theorem1_report(F0, F1, d, dense=False).gap)
        for F0 in axis
        for F1 in axis
    ]


def on_saturation_boundary(F0, F1, d):
    """Where the bound is tight: an F = 1 edge or a separable pair (F <= 1/d)"""
    threshold = 1.0 / d + 1e-12
    return F0 == 1.0 or F1 == 1.0 or F0 <= threshold or F1 <= threshold


@dataclass
class ChainReport:
    d: int
    link_fidelities: list
    hop_fidelities: list
    final_cren: float
    product_bound: float

    @property
    def gap(self):
        return self.product_bound - self.final_cren


def chain_fidelity(fidelities, d):
    """Fidelity after swapping along a chain of isotropic links"""
    if not fidelities:
        raise ValueError("A repeater chain needs at least one link")
    return reduce(lambda F0, F1: lemma1_fidelity(F0, F1, d), fidelities)


def chain_report(fidelities, d):
    """
    Entanglement left after swapping along a repeater chain

    Parameters:
    - fidelities: Link fidelities, in order along the chain
    - d: Qudit dimension

    Returns:
    - ChainReport; the final CREN never exceeds the product of link CRENs
    """
    d = validate_dim(d)
    fidelities = [validate_fidelity(F) for F in fidelities]
    if not fidelities:
        raise ValueError("A repeater chain needs at least one link")

    hops = [fidelities[0]]
    for F in fidelities[1:]:
        hops.append(lemma1_fidelity(hops[-1], F, d))

    product = float(np.prod([cren_isotropic(IsotropicParams(d, F)) for F in fidelities]))
    final = cren_isotropic(IsotropicParams(d, hops[-1]))
    return ChainReport(d, fidelities, hops, final, product)
