"""Inverse problem: density matrix from normalized PL scans and circular polarization."""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import eigh

from valleyqubit.config import settings
from valleyqubit.core.constants import DIAGONAL_SUM_TOL, PROJECTION_HERMITIAN_TOL
from valleyqubit.core.exceptions import CalibrationError, ConfigError, DomainError, FitError
from valleyqubit.domains.qubit.models.qstate import (
    DensityMatrix,
    as_matrix,
    bloch_vector,
    density_matrix_violation,
    fidelity,
    hermiticity_defect,
    pure_state,
    purity,
)
from valleyqubit.domains.qubit.schemas.results import DiagonalCalibration, TomographyResult
from valleyqubit.domains.qubit.schemas.scan import NormalizedScan, PLScan
from valleyqubit.domains.qubit.schemas.state import PureStateAngles, matrix_to_entries
from valleyqubit.domains.qubit.services.plmodel_service import circular_polarization
from valleyqubit.utils.logging import get_logger

logger = get_logger(__name__)

ExtremaMethod = Literal["sample", "fit"]

_METADATA_FIELDS = ("t1", "t2", "gamma", "i1", "i2", "i3")


def _distinct(values: Sequence[float], period: Optional[float] = None) -> int:
    if period is not None:
        values = [v % period for v in values]
        values = [0.0 if math.isclose(v, period, abs_tol=1e-9) else v for v in values]
    return len({round(v, 9) for v in values})


def _trig_fit(angles: Sequence[float], values: Sequence[float]) -> Tuple[np.ndarray, float]:
    """Least squares of values ≈ a + b·cos2α + c·sin2α via the 3x3 normal equations.

    Angles are folded by the period π before fitting.
    """
    folded = np.mod(np.asarray(angles, dtype=float), math.pi)
    y = np.asarray(values, dtype=float)
    if _distinct(folded.tolist(), math.pi) < 3:
        raise FitError("Need at least three distinct detection angles modulo 180 degrees", rank=None)

    design = np.column_stack([np.ones_like(folded), np.cos(2.0 * folded), np.sin(2.0 * folded)])
    rank = int(np.linalg.matrix_rank(design))
    if rank < 3:
        raise FitError(f"Design matrix is rank deficient (rank {rank})", rank=rank)

    normal = design.T @ design
    coeffs = np.linalg.solve(normal, design.T @ y)
    residuals = y - design @ coeffs
    rms = float(math.sqrt(np.mean(residuals ** 2)))
    return coeffs, rms


def _scan_extrema(scan: PLScan, method: ExtremaMethod) -> Tuple[float, float]:
    if method == "sample":
        return scan.extrema()
    (a, b, c), _ = _trig_fit(scan.angles, scan.intensities)
    amplitude = math.hypot(b, c)
    return max(0.0, a - amplitude), a + amplitude


def _warn_on_mismatch(scan: PLScan, calibration: PLScan) -> None:
    if scan.params is None or calibration.params is None:
        return
    differing = [f for f in _METADATA_FIELDS if getattr(scan.params, f) != getattr(calibration.params, f)]
    if differing:
        logger.warning(
            "Calibration scan parameters differ from the measured scan (%s); "
            "normalization assumes same-session conditions",
            ", ".join(differing),
        )


def normalize_scan(
    scan: PLScan,
    calibration: Optional[PLScan] = None,
    extrema: ExtremaMethod = "sample",
    background: float = 0.0,
    reference_visibility: Optional[float] = None,
) -> NormalizedScan:
    """p(α) = (r·I_θ(α) − I^min_ref)/(I^max_ref − I^min_ref), r = ΣI_ref/ΣI_θ over the extrema.

    With a θ=π/2 ``calibration`` the reference extrema are taken over its own
    grid and its recorded visibility becomes the reference visibility
    (``reference_visibility`` overrides it). Without one the reference is
    synthesized from the scan's own midpoint and ``background`` as a fully
    coherent equatorial state.
    """
    s_min, s_max = _scan_extrema(scan, extrema)
    scan_sum = s_max + s_min
    if scan_sum <= 0.0:
        raise CalibrationError("Scan has zero total intensity", field="intensities")

    if calibration is None:
        if background < 0.0 or 2.0 * background >= scan_sum:
            raise CalibrationError("Background must lie below the scan midpoint", field="background")
        c_min, c_max = background, scan_sum - background
        v_ref = 1.0
        self_calibrated = True
    else:
        _warn_on_mismatch(scan, calibration)
        c_min, c_max = _scan_extrema(calibration, extrema)
        if reference_visibility is not None:
            v_ref = reference_visibility
        elif calibration.params is not None:
            v_ref = calibration.params.visibility
        else:
            logger.warning("Calibration carries no parameters; assuming a fully coherent reference")
            v_ref = 1.0
        self_calibrated = False

    if not c_max > c_min:
        raise CalibrationError("Degenerate calibration: I_max equals I_min", field="calibration")
    if c_min < 0.0:
        raise CalibrationError("Calibration minimum must be non-negative", field="calibration")

    r = (c_max + c_min) / scan_sum
    span = c_max - c_min
    probabilities = [(r * i - c_min) / span for i in scan.intensities]
    logger.debug("Normalized scan: r=%.6g reference=(%.6g, %.6g) v_ref=%.4g", r, c_min, c_max, v_ref)

    return NormalizedScan(
        angles=list(scan.angles),
        probabilities=probabilities,
        reference=(c_min, c_max),
        reference_visibility=v_ref,
        self_calibrated=self_calibrated,
    )


def fit_diagonal(eta_c_samples: Sequence[Tuple[float, float]]) -> DiagonalCalibration:
    """Slope through the origin of η_C against cosθ of the prepared states: q₃ = Σxy/Σx²."""
    xs = np.array([s[0] for s in eta_c_samples], dtype=float)
    ys = np.array([s[1] for s in eta_c_samples], dtype=float)
    if _distinct(xs.tolist()) < 2:
        raise FitError("Need at least two distinct cos(theta) values", rank=1)

    sxx = float(np.dot(xs, xs))
    q3 = float(np.dot(xs, ys)) / sxx
    if q3 <= 0.0:
        raise CalibrationError(f"Regressed q3 = {q3:.4g} is not positive", field="q3")
    rms = float(math.sqrt(np.mean((ys - q3 * xs) ** 2)))
    return DiagonalCalibration(q3=q3, residual_rms=rms, samples=len(xs))


def fit_offdiagonal(nscan: NormalizedScan) -> Tuple[float, float, float]:
    """(Re, Im, residual_rms) of ρ₀₁ from p(α) = a + b·cos2α + c·sin2α.

    Returns (b, c) as fitted, before any frame rescaling or decay compensation.
    """
    (_, b, c), rms = _trig_fit(nscan.angles, nscan.probabilities)
    logger.debug("Off-diagonal fit: re=%.6g im=%.6g rms=%.3g", b, c, rms)
    return float(b), float(c), rms


def physicality_projection(raw) -> DensityMatrix:
    """Nearest density matrix: clip negative eigenvalues to zero and renormalize the trace."""
    matrix = as_matrix(raw)
    if hermiticity_defect(matrix) > PROJECTION_HERMITIAN_TOL:
        raise DomainError("Raw matrix is not Hermitian", field="raw")
    matrix = (matrix + matrix.conj().T) / 2.0
    trace = float(np.trace(matrix).real)
    if trace <= 0.0:
        raise DomainError("Raw matrix must have positive trace", field="raw")
    matrix = matrix / trace

    if not density_matrix_violation(matrix):
        return DensityMatrix(matrix)

    values, vectors = eigh(matrix)
    values = np.clip(values, 0.0, None)
    values = values / values.sum()
    projected = vectors @ np.diag(values) @ vectors.conj().T
    return DensityMatrix((projected + projected.conj().T) / 2.0)


def decay_compensation(offdiag_fitted: Tuple[float, float], visibility: float) -> Tuple[float, float]:
    """Divide the fitted coherence by the visibility to recover the prepared state's."""
    if not 0.0 < visibility <= 1.0:
        raise DomainError("Visibility must lie in (0, 1]", field="visibility")
    re, im = offdiag_fitted
    return re / visibility, im / visibility


def assemble_rho(
    diag: Tuple[float, float],
    offdiag: Tuple[float, float],
    target: Optional[PureStateAngles] = None,
    residual_rms: float = 0.0,
    visibility_estimate: Optional[float] = None,
    **diagnostics,
) -> TomographyResult:
    """Build ρ with ρ₀₀ = p_K and ρ₀₁ = re − i·im, projecting onto physical states if needed."""
    p_k, p_kp = diag
    total = p_k + p_kp
    if total <= 0.0:
        raise DomainError("Diagonal elements must sum to a positive value", field="diag")
    if abs(total - 1.0) > DIAGONAL_SUM_TOL:
        logger.debug("Renormalizing diagonal elements that sum to %.6g", total)
    p_k, p_kp = p_k / total, p_kp / total

    re, im = offdiag
    coherence = complex(re, -im)
    raw = np.array([[p_k, coherence], [coherence.conjugate(), p_kp]], dtype=complex)

    projection_applied = bool(density_matrix_violation(raw))
    rho = physicality_projection(raw)
    if projection_applied:
        logger.warning("Reconstructed matrix was unphysical; projected onto the nearest density matrix")

    return TomographyResult(
        rho=matrix_to_entries(rho.entries),
        raw_rho=matrix_to_entries(raw),
        residual_rms=residual_rms,
        fidelity_to_target=fidelity(rho, pure_state(target)) if target is not None else None,
        target=target,
        projection_applied=projection_applied,
        visibility_estimate=2.0 * abs(coherence) if visibility_estimate is None else visibility_estimate,
        bloch_vector=bloch_vector(rho),
        purity=purity(rho),
        **diagnostics,
    )


def _resolve_q3(scan: PLScan, q3: Optional[float]) -> float:
    if q3 is not None:
        return q3
    if scan.params is not None:
        logger.warning("No q3 supplied; using q3=%.6g from the scan's parameter record", scan.params.q3)
        return scan.params.q3
    raise ConfigError("q3 must be supplied when the scan carries no parameter record", field="q3")


def reconstruct(
    scan: PLScan,
    calibration: Optional[PLScan] = None,
    q3: Optional[float] = None,
    compensate: Optional[float] = None,
    target: Optional[PureStateAngles] = None,
    extrema: ExtremaMethod = "sample",
    background: float = 0.0,
    reference_visibility: Optional[float] = None,
) -> TomographyResult:
    """Full pipeline: normalize, fit coherences, retrieve populations, assemble.

    Coherences are reported for the emitting state unless ``compensate`` gives
    the visibility to divide out.
    """
    q3 = _resolve_q3(scan, q3)
    nscan = normalize_scan(scan, calibration, extrema, background, reference_visibility)
    re, im, rms = fit_offdiagonal(nscan)
    re, im = re * nscan.reference_visibility, im * nscan.reference_visibility
    visibility_estimate = 2.0 * math.hypot(re, im)
    if compensate is not None:
        re, im = decay_compensation((re, im), compensate)

    diag = DiagonalCalibration(q3=q3).populations(circular_polarization(scan))
    return assemble_rho(
        diag,
        (re, im),
        target,
        residual_rms=rms,
        visibility_estimate=visibility_estimate,
        q3=q3,
        reference_visibility=nscan.reference_visibility,
        decay_compensation=compensate,
    )


def reconstruct_batch(
    scans: Sequence[PLScan],
    calibration: Optional[PLScan] = None,
    workers: Optional[int] = None,
    **options,
) -> List[TomographyResult]:
    """Reconstruct many scans on a thread pool; results follow input order."""
    with ThreadPoolExecutor(max_workers=workers or settings.WORKER_POOL_SIZE) as pool:
        return list(pool.map(lambda s: reconstruct(s, calibration, **options), scans))
