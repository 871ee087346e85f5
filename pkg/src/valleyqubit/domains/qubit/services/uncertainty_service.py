"""Entropic and Heisenberg-Robertson uncertainty relations and coherence bounds.

Bounds come from explicit matrix algebra (observable eigenvectors, commutator
traces) so they hold for any Hermitian pair; the equatorial closed forms are
kept as test oracles.
"""

import math
from typing import List, Sequence, Tuple

import numpy as np

from valleyqubit.core.exceptions import DomainError
from valleyqubit.domains.qubit.models.qstate import (
    DensityMatrix,
    binary_entropy,
    born_probability,
    expectation,
    measurement_observable,
    von_neumann_entropy,
)
from valleyqubit.domains.qubit.schemas.results import ObservablePair, UncertaintyReport
from valleyqubit.utils.logging import get_logger

logger = get_logger(__name__)


def shannon_entropy_of_measurement(rho: DensityMatrix, alpha: float) -> float:
    """H_b(p(α)): entropy of the dephased state in the basis of Π̂_α."""
    return binary_entropy(born_probability(rho, alpha))


def maximal_overlap(pair: ObservablePair) -> float:
    """c(R̂, Q̂) = max_{j,k} |⟨r_j|q_k⟩|²."""
    r_vectors = measurement_observable(pair.r_angle).eigenvectors()
    q_vectors = measurement_observable(pair.q_angle).eigenvectors()
    overlaps = np.abs(r_vectors.conj().T @ q_vectors) ** 2
    return float(min(1.0, np.max(overlaps)))


def entropic_bound(pair: ObservablePair) -> float:
    """log₂(1/c(R̂, Q̂)); 1 bit for mutually unbiased observables."""
    return max(0.0, -math.log2(maximal_overlap(pair)))


def entropic_uncertainty(rho: DensityMatrix, pair: ObservablePair) -> Tuple[float, float]:
    """(H(R̂) + H(Q̂), log₂(1/c))."""
    total = shannon_entropy_of_measurement(rho, pair.r_angle) + shannon_entropy_of_measurement(rho, pair.q_angle)
    return total, entropic_bound(pair)


def _variance(obs, rho: DensityMatrix) -> float:
    second = float(np.trace(obs.entries @ obs.entries @ rho.entries).real)
    return max(0.0, second - expectation(obs, rho) ** 2)


def robertson_uncertainty(rho: DensityMatrix, pair: ObservablePair) -> Tuple[float, float]:
    """(ΔR̂·ΔQ̂, |⟨[R̂, Q̂]⟩|/2)."""
    r_obs = measurement_observable(pair.r_angle)
    q_obs = measurement_observable(pair.q_angle)
    product = math.sqrt(_variance(r_obs, rho) * _variance(q_obs, rho))
    commutator = r_obs.entries @ q_obs.entries - q_obs.entries @ r_obs.entries
    bound = abs(np.trace(commutator @ rho.entries)) / 2.0
    return product, float(bound)


def relative_entropy_of_coherence(rho: DensityMatrix, alpha: float) -> float:
    """C = S(M̂(ρ)) − S(ρ) for the dephasing M̂ in the basis of Π̂_α."""
    return max(0.0, shannon_entropy_of_measurement(rho, alpha) - von_neumann_entropy(rho))


def coherence_bound(rho: DensityMatrix, pair: ObservablePair) -> float:
    """Lower bound on C(R̂) + C(Q̂): log₂(1/c) − S(ρ).

    Follows from H(R̂) + H(Q̂) ≥ log₂(1/c) + S(ρ) and C = H − S. Equals
    log₂(1/c) on pure states; the form log₂(1/c) + 2S(ρ) fails for mixed
    states (the maximally mixed state has zero coherence in every basis).
    """
    return entropic_bound(pair) - von_neumann_entropy(rho)


def uncertainty_report(rho: DensityMatrix, pair: ObservablePair) -> UncertaintyReport:
    entropy_sum, e_bound = entropic_uncertainty(rho, pair)
    product, r_bound = robertson_uncertainty(rho, pair)
    return UncertaintyReport(
        alpha=pair.q_angle,
        entropy_sum=entropy_sum,
        entropic_bound=e_bound,
        deviation_product=product,
        robertson_bound=r_bound,
        coherence_r=relative_entropy_of_coherence(rho, pair.r_angle),
        coherence_q=relative_entropy_of_coherence(rho, pair.q_angle),
        coherence_bound=coherence_bound(rho, pair),
    )


def uncertainty_sweep(rho: DensityMatrix, r_angle: float, alpha_grid: Sequence[float]) -> List[UncertaintyReport]:
    """One report per detection angle, in grid order."""
    if len(alpha_grid) == 0:
        raise DomainError("Sweep grid must not be empty", field="alpha_grid")
    reports = [uncertainty_report(rho, ObservablePair(r_angle=r_angle, q_angle=a)) for a in alpha_grid]
    logger.debug("Uncertainty sweep over %d angles", len(reports))
    return reports


def sweep_min_slack(reports: Sequence[UncertaintyReport]) -> Tuple[float, float]:
    """Smallest entropic slack over a sweep and the α where it occurs."""
    worst = min(reports, key=lambda r: r.entropic_slack)
    return worst.entropic_slack, worst.alpha
