import math
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from valleyqubit.domains.qubit.schemas.params import NoiseSpec, PhysicalParams
from valleyqubit.domains.qubit.schemas.state import PureStateAngles
from valleyqubit.utils.validators import validate_strictly_increasing


class PLScan(BaseModel):
    """Angle-resolved PL record plus the circular-basis intensities I(σ±)."""
    angles: List[float] = Field(..., min_length=1, description="Detection angles α in radians")
    intensities: List[float]
    sigma_plus: Optional[float] = Field(None, ge=0.0)
    sigma_minus: Optional[float] = Field(None, ge=0.0)
    params: Optional[PhysicalParams] = None
    prepared: Optional[PureStateAngles] = None
    noise: Optional[NoiseSpec] = None
    seed: Optional[int] = None

    @field_validator("angles")
    @classmethod
    def angles_increasing(cls, v):
        return validate_strictly_increasing(v)

    @field_validator("intensities")
    @classmethod
    def intensities_nonnegative(cls, v):
        if any(x < 0.0 or not math.isfinite(x) for x in v):
            raise ValueError("Intensities must be finite and non-negative")
        return v

    @model_validator(mode="after")
    def matching_lengths(self):
        if len(self.angles) != len(self.intensities):
            raise ValueError("angles and intensities must have the same length")
        return self

    @property
    def angles_deg(self) -> List[float]:
        return [math.degrees(a) for a in self.angles]

    def extrema(self) -> Tuple[float, float]:
        """(I_min, I_max) over the scan's own grid."""
        return min(self.intensities), max(self.intensities)

    def intensity_at(self, alpha: float, tol: float = 1e-9) -> Optional[float]:
        """Sample at α (mod π) when it lies on the grid."""
        for angle, value in zip(self.angles, self.intensities):
            d = math.remainder(angle - alpha, math.pi)
            if abs(d) <= tol:
                return value
        return None


class NormalizedScan(BaseModel):
    """Equatorial detection probabilities p(α) derived from a PL scan.

    ``reference`` holds the calibration extrema (I_min, I_max). Probabilities
    are left unclamped for fitting. ``reference_visibility`` is the coherence
    visibility of the reference; min/max normalization maps that contrast
    onto [0, 1].
    """
    angles: List[float]
    probabilities: List[float]
    reference: Tuple[float, float]
    reference_visibility: float = Field(1.0, gt=0.0, le=1.0)
    self_calibrated: bool = False

    @field_validator("reference")
    @classmethod
    def reference_ordered(cls, v):
        i_min, i_max = v
        if not (i_max > i_min >= 0.0):
            raise ValueError("Calibration extrema must satisfy I_max > I_min >= 0")
        return v

    @model_validator(mode="after")
    def matching_lengths(self):
        if len(self.angles) != len(self.probabilities):
            raise ValueError("angles and probabilities must have the same length")
        return self

    def clamped(self) -> List[float]:
        """Probabilities clipped to [0, 1], for reporting only."""
        return [min(1.0, max(0.0, p)) for p in self.probabilities]
