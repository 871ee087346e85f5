import math
from typing import Dict, Optional, Tuple

from pydantic import BaseModel, Field

from valleyqubit.domains.qubit.schemas.state import MatrixEntries, PureStateAngles, entries_to_matrix


class DiagonalCalibration(BaseModel):
    """Through-origin regression η_C = q₃·cosθ and the population retriever it defines."""
    q3: float = Field(..., gt=0.0)
    residual_rms: float = Field(0.0, ge=0.0)
    samples: int = 0

    def populations(self, eta_c: float) -> Tuple[float, float]:
        """(ρ_KK, ρ_K′K′) = ((1 + η_C/q₃)/2, (1 − η_C/q₃)/2), clamped to [0, 1]."""
        p_k = min(1.0, max(0.0, (1.0 + eta_c / self.q3) / 2.0))
        return p_k, 1.0 - p_k


class TomographyResult(BaseModel):
    """Reconstructed density matrix with fit diagnostics."""
    rho: MatrixEntries
    raw_rho: MatrixEntries
    residual_rms: float = Field(0.0, ge=0.0)
    fidelity_to_target: Optional[float] = Field(None, ge=0.0, le=1.0)
    target: Optional[PureStateAngles] = None
    projection_applied: bool = False
    visibility_estimate: float = 0.0
    q3: Optional[float] = None
    reference_visibility: float = 1.0
    decay_compensation: Optional[float] = None
    bloch_vector: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    purity: float = 1.0

    def density_matrix(self):
        from valleyqubit.domains.qubit.models.qstate import DensityMatrix

        return DensityMatrix(entries_to_matrix(self.rho))


class ObservablePair(BaseModel):
    """R̂ = Π̂_r − Π̂_r^⊥ and Q̂ = Π̂_q − Π̂_q^⊥."""
    r_angle: float = 0.0
    q_angle: float

    @property
    def delta(self) -> float:
        return self.q_angle - self.r_angle


class UncertaintyReport(BaseModel):
    """Both uncertainty relations and the coherence bound at one detection angle."""
    alpha: float
    entropy_sum: float
    entropic_bound: float
    deviation_product: float
    robertson_bound: float
    coherence_r: float
    coherence_q: float
    coherence_bound: float

    @property
    def coherence_sum(self) -> float:
        return self.coherence_r + self.coherence_q

    @property
    def entropic_slack(self) -> float:
        return self.entropy_sum - self.entropic_bound

    @property
    def robertson_slack(self) -> float:
        return self.deviation_product - self.robertson_bound

    @property
    def coherence_slack(self) -> float:
        return self.coherence_sum - self.coherence_bound


class PrecessionResult(BaseModel):
    """Larmor precession and its effect on the time-integrated PL pattern."""
    omega: float
    phi_tilde: float
    rotation_angle: float
    contrast_factor: float = Field(..., gt=0.0, le=1.0)

    @property
    def phi_tilde_deg(self) -> float:
        return math.degrees(self.phi_tilde)

    @property
    def rotation_deg(self) -> float:
        return math.degrees(self.rotation_angle)

    def summary(self) -> Dict[str, float]:
        return {
            "omega": self.omega,
            "phi_tilde_deg": self.phi_tilde_deg,
            "rotation_deg": self.rotation_deg,
            "contrast": self.contrast_factor,
        }
