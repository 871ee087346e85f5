"""Valley-pseudospin precession in a longitudinal magnetic field."""

import math
from typing import List, Sequence, Tuple

import numpy as np
from scipy.integrate import simpson

from valleyqubit.core.constants import (
    BOHR_MAGNETON,
    DEFAULT_QUADRATURE_STEPS,
    HBAR,
    MIN_QUADRATURE_STEPS,
    QUADRATURE_CUTOFF,
)
from valleyqubit.core.exceptions import DomainError
from valleyqubit.domains.qubit.schemas.params import FieldParams
from valleyqubit.domains.qubit.schemas.results import PrecessionResult
from valleyqubit.utils.logging import get_logger

logger = get_logger(__name__)


def larmor_frequency(params: FieldParams) -> float:
    """Ω = g·μ_B·B/ħ in rad/s, signed."""
    return params.g_factor * BOHR_MAGNETON * params.b_field / HBAR


def precession(params: FieldParams) -> PrecessionResult:
    """Rotation φ̃/2 and contrast [1 + (ΩT₂*)²]^{−1/2} of the time-integrated pattern.

    The sign of the rotation follows the sign of g·B.
    """
    omega = larmor_frequency(params)
    x = omega * params.t2_star
    phi_tilde = math.atan(x)
    return PrecessionResult(
        omega=omega,
        phi_tilde=phi_tilde,
        rotation_angle=phi_tilde / 2.0,
        contrast_factor=1.0 / math.sqrt(1.0 + x * x),
    )


def evolve_equatorial_state(t: float, params: FieldParams) -> Tuple[float, float]:
    """(azimuthal phase Ωt, coherence magnitude e^{−t/T₂*}/2) of the θ=π/2, φ=0 preparation."""
    if t < 0.0:
        raise DomainError("Time must be non-negative", field="t")
    return larmor_frequency(params) * t, 0.5 * math.exp(-t / params.t2_star)


def precession_trajectory(times: Sequence[float], params: FieldParams) -> List[Tuple[float, float]]:
    """Equatorial Bloch components (x, y) along the decaying precession."""
    trajectory = []
    for t in times:
        phase, magnitude = evolve_equatorial_state(t, params)
        trajectory.append((2.0 * magnitude * math.cos(phase), 2.0 * magnitude * math.sin(phase)))
    return trajectory


def integrated_pl_pattern(alpha: float, params: FieldParams) -> float:
    """1/2 + (T₂*/2T₁)[1 + (ΩT₂*)²]^{−1/2}·cos(φ̃ − 2α), normalized by T₁."""
    result = precession(params)
    ratio = params.t2_star / params.t1
    return 0.5 + 0.5 * ratio * result.contrast_factor * math.cos(result.phi_tilde - 2.0 * alpha)


def rotated_pattern(alpha_grid: Sequence[float], params: FieldParams) -> List[Tuple[float, float]]:
    return [(a, integrated_pl_pattern(a, params)) for a in alpha_grid]


def verify_integral(
    alpha: float,
    params: FieldParams,
    n_steps: int = DEFAULT_QUADRATURE_STEPS,
) -> Tuple[float, float, float]:
    """(closed form, composite-Simpson quadrature, |difference|).

    Integrates [e^{−t/T₁} + e^{−t/T₂*}cos(Ωt − 2α)]/2 over
    [0, 20·max(T₁, T₂*)] in units of T₁, so it compares directly with
    ``integrated_pl_pattern``.
    """
    if n_steps < MIN_QUADRATURE_STEPS:
        raise DomainError(f"Quadrature needs at least {MIN_QUADRATURE_STEPS} steps", field="n_steps")
    omega = larmor_frequency(params)
    t1, t2s = params.t1, params.t2_star

    u = np.linspace(0.0, QUADRATURE_CUTOFF * max(t1, t2s) / t1, n_steps + 1)
    integrand = (np.exp(-u) + np.exp(-u * t1 / t2s) * np.cos(omega * t1 * u - 2.0 * alpha)) / 2.0
    numeric = float(simpson(integrand, x=u))

    closed = integrated_pl_pattern(alpha, params)
    diff = abs(closed - numeric)
    logger.debug("Quadrature check at alpha=%.4g: closed=%.12g numeric=%.12g", alpha, closed, numeric)
    return closed, numeric, diff
