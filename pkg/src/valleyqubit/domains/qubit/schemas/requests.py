import math
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from valleyqubit.core.constants import DEFAULT_G_FACTOR, DEFAULT_SCAN_GRID, DEFAULT_SWEEP_GRID, DEFAULT_T1, DEFAULT_T2_STAR
from valleyqubit.domains.qubit.schemas.params import FieldParams, NoiseSpec, PhysicalParams
from valleyqubit.domains.qubit.schemas.results import TomographyResult, UncertaintyReport
from valleyqubit.domains.qubit.schemas.scan import PLScan
from valleyqubit.domains.qubit.schemas.state import MatrixEntries, PureStateAngles
from valleyqubit.utils.validators import degrees_to_radians, parse_grid, parse_scan_grid


class SimulateRequest(BaseModel):
    """Prepared state in degrees; ``visibility`` wins over ``params`` lifetimes when both are given."""
    model_config = ConfigDict(extra="forbid")

    theta_deg: float = Field(..., ge=0.0, le=180.0)
    phi_deg: float = 0.0
    visibility: Optional[float] = Field(None, gt=0.0, le=1.0)
    params: PhysicalParams = Field(default_factory=PhysicalParams)
    grid: str = DEFAULT_SCAN_GRID
    noise: NoiseSpec = Field(default_factory=NoiseSpec)
    seed: int = 0

    @field_validator("grid")
    @classmethod
    def valid_grid(cls, v):
        parse_scan_grid(v)
        return v

    @field_validator("noise")
    @classmethod
    def nonnegative_exposure(cls, v):
        if v.exposure < 0.0:
            raise ValueError("exposure must be non-negative")
        return v

    def prepared(self) -> PureStateAngles:
        return PureStateAngles.from_degrees(self.theta_deg, self.phi_deg)

    def physical_params(self) -> PhysicalParams:
        if self.visibility is None:
            return self.params
        extra = self.params.model_dump(exclude={"t1", "t2"})
        return PhysicalParams.from_visibility(self.visibility, t1=self.params.t1, **extra)

    def angle_grid(self) -> List[float]:
        return degrees_to_radians(parse_scan_grid(self.grid))


class TargetAngles(BaseModel):
    theta_deg: float = Field(..., ge=0.0, le=180.0)
    phi_deg: float = 0.0

    def angles(self) -> PureStateAngles:
        return PureStateAngles.from_degrees(self.theta_deg, self.phi_deg)


class TomographyOptions(BaseModel):
    model_config = ConfigDict(extra="forbid")

    calibration: Optional[PLScan] = None
    q3: Optional[float] = Field(None, gt=0.0)
    compensate_decay: Optional[float] = Field(None, gt=0.0, le=1.0)
    reference_visibility: Optional[float] = Field(None, gt=0.0, le=1.0)
    target: Optional[TargetAngles] = None
    extrema: Literal["sample", "fit"] = "sample"
    background: float = Field(0.0, ge=0.0)

    def reconstruct_options(self) -> dict:
        return dict(
            q3=self.q3,
            compensate=self.compensate_decay,
            target=self.target.angles() if self.target else None,
            extrema=self.extrema,
            background=self.background,
            reference_visibility=self.reference_visibility,
        )


class TomographyRequest(TomographyOptions):
    """Without ``calibration`` the scan is self-calibrated."""
    scan: PLScan


class BatchTomographyRequest(TomographyOptions):
    scans: List[PLScan] = Field(..., min_length=1)


class BatchTomographyResponse(BaseModel):
    results: List[TomographyResult]
    projections: int


class UncertaintySweepRequest(BaseModel):
    """State as pure-state angles in degrees or as explicit density-matrix entries."""
    model_config = ConfigDict(extra="forbid")

    theta_deg: Optional[float] = Field(None, ge=0.0, le=180.0)
    phi_deg: float = 0.0
    rho: Optional[MatrixEntries] = None
    r_angle_deg: float = 0.0
    grid: str = DEFAULT_SWEEP_GRID

    @field_validator("grid")
    @classmethod
    def valid_grid(cls, v):
        parse_grid(v)
        return v

    @model_validator(mode="after")
    def one_state_source(self):
        if (self.theta_deg is None) == (self.rho is None):
            raise ValueError("Give exactly one of theta_deg or rho")
        return self

    def angle_grid(self) -> List[float]:
        return degrees_to_radians(parse_grid(self.grid))

    @property
    def r_angle(self) -> float:
        return math.radians(self.r_angle_deg)


class UncertaintySweepResponse(BaseModel):
    reports: List[UncertaintyReport]
    min_slack: float
    min_slack_alpha_deg: float


class DynamicsRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    b_field: float = 0.0
    g_factor: float = DEFAULT_G_FACTOR
    t1: float = Field(DEFAULT_T1, gt=0.0)
    t2_star: float = Field(DEFAULT_T2_STAR, gt=0.0)
    grid: str = DEFAULT_SCAN_GRID

    @field_validator("grid")
    @classmethod
    def valid_grid(cls, v):
        parse_grid(v)
        return v

    def field_params(self) -> FieldParams:
        return FieldParams(b_field=self.b_field, g_factor=self.g_factor, t1=self.t1, t2_star=self.t2_star)

    def angle_grid(self) -> List[float]:
        return degrees_to_radians(parse_grid(self.grid))


class PatternPoint(BaseModel):
    alpha_deg: float
    intensity: float


class DynamicsResponse(BaseModel):
    omega: float
    phi_tilde_deg: float
    rotation_deg: float
    contrast: float
    pattern: List[PatternPoint]
