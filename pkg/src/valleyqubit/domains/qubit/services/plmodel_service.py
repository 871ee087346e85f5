"""Forward model: polarization-resolved PL of a prepared valley state."""

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from valleyqubit.core.constants import MIN_SCAN_POINTS
from valleyqubit.core.exceptions import DomainError
from valleyqubit.domains.qubit.schemas.params import NoiseSpec, PhysicalParams
from valleyqubit.domains.qubit.schemas.scan import PLScan
from valleyqubit.domains.qubit.schemas.state import PureStateAngles
from valleyqubit.utils.logging import get_logger

logger = get_logger(__name__)


def ideal_intensity(prepared: PureStateAngles, alpha: float, params: PhysicalParams) -> float:
    """I₃[1 + v·sinθ·cos(φ − 2α)]/2 + I₁ + I₂ with v = (T₂*/T₁)e^{−Γ}.

    I₂ enters as an α-independent offset under the analyzer.
    """
    modulation = params.visibility * math.sin(prepared.theta) * math.cos(prepared.phi - 2.0 * alpha)
    return params.i3 * (1.0 + modulation) / 2.0 + params.i1 + params.i2


def circular_intensities(prepared: PureStateAngles, params: PhysicalParams) -> Tuple[float, float]:
    """I(σ±) = I₁ + I₂ + (1 ± cosθ)I₃."""
    floor = params.i1 + params.i2
    c = math.cos(prepared.theta)
    return floor + (1.0 + c) * params.i3, floor + (1.0 - c) * params.i3


def _polarization_degree(a: float, b: float, name: str) -> float:
    total = a + b
    if total <= 0.0:
        raise DomainError(f"{name} needs a positive total intensity", field=name)
    return (a - b) / total


def circular_polarization(scan: PLScan) -> float:
    """η_C = [I(σ⁺) − I(σ⁻)]/[I(σ⁺) + I(σ⁻)]."""
    if scan.sigma_plus is None or scan.sigma_minus is None:
        raise DomainError("Scan carries no circular-basis intensities", field="sigma_plus")
    return _polarization_degree(scan.sigma_plus, scan.sigma_minus, "eta_c")


def linear_polarization(i_x: float, i_y: float) -> float:
    """η_L = [I(σ^X) − I(σ^Y)]/[I(σ^X) + I(σ^Y)]."""
    return _polarization_degree(i_x, i_y, "eta_l")


def scan_linear_polarization(scan: PLScan) -> float:
    """η_L from the α = 0 (σ^X) and α = π/2 (σ^Y) samples of a scan."""
    i_x = scan.intensity_at(0.0)
    i_y = scan.intensity_at(math.pi / 2.0)
    if i_x is None or i_y is None:
        raise DomainError("Scan grid must contain 0 and 90 degrees", field="angles")
    return linear_polarization(i_x, i_y)


def coherency_matrix(prepared: PureStateAngles, params: PhysicalParams) -> np.ndarray:
    """Three-part coherency matrix I_th + I_pol + I_PL of the detected light."""
    theta, phi = prepared.theta, prepared.phi
    thermal = params.i1 * np.eye(2)
    polarized = params.i2 * np.ones((2, 2))
    off = math.exp(-params.gamma) * math.sin(theta)
    pl = params.i3 * np.array(
        [
            [1.0 + math.cos(theta), off * np.exp(-1j * phi)],
            [off * np.exp(1j * phi), 1.0 - math.cos(theta)],
        ],
        dtype=complex,
    )
    return thermal + polarized + pl


def scan_visibility(scan: PLScan, background: float = 0.0) -> float:
    """(I_max − I_min)/(I_max + I_min − 2·background)."""
    i_min, i_max = scan.extrema()
    denom = i_max + i_min - 2.0 * background
    if denom <= 0.0:
        raise DomainError("Scan has no intensity above the background", field="intensities")
    return (i_max - i_min) / denom


def synthesize_scan(
    prepared: PureStateAngles,
    angle_grid: Sequence[float],
    params: PhysicalParams,
    noise: Optional[NoiseSpec] = None,
    seed: int = 0,
) -> PLScan:
    """Simulated PL scan; deterministic for a fixed seed.

    Without noise the intensities are exact ``ideal_intensity`` values. With
    Poisson noise each analyzer setting (and each circular channel) records
    counts with mean intensity × exposure, independently.
    """
    if len(angle_grid) < MIN_SCAN_POINTS:
        raise DomainError(f"Scan grid needs at least {MIN_SCAN_POINTS} angles", field="angle_grid")
    noise = noise or NoiseSpec()
    if noise.exposure < 0.0:
        raise DomainError("Exposure scale must be non-negative", field="exposure")

    ideal: List[float] = [ideal_intensity(prepared, a, params) for a in angle_grid]
    sigma_plus, sigma_minus = circular_intensities(prepared, params)

    if noise.kind == "poisson":
        rng = np.random.default_rng(seed)
        means = np.asarray(ideal + [sigma_plus, sigma_minus]) * noise.exposure
        counts = rng.poisson(means).astype(float)
        intensities = [float(x) for x in counts[:-2]]
        sigma_plus, sigma_minus = float(counts[-2]), float(counts[-1])
        logger.debug("Poisson scan: seed=%d exposure=%g points=%d", seed, noise.exposure, len(ideal))
    else:
        intensities = ideal

    return PLScan(
        angles=[float(a) for a in angle_grid],
        intensities=intensities,
        sigma_plus=sigma_plus,
        sigma_minus=sigma_minus,
        params=params,
        prepared=prepared,
        noise=noise,
        seed=seed,
    )
