import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from valleyqubit.core.constants import (
    DEFAULT_EXPOSURE,
    DEFAULT_G_FACTOR,
    DEFAULT_QUADRATURE_STEPS,
    DEFAULT_SCAN_GRID,
    DEFAULT_SWEEP_GRID,
    DEFAULT_T1,
    DEFAULT_T2_STAR,
    MIN_QUADRATURE_STEPS,
)
from valleyqubit.core.exceptions import ConfigError, StorageError
from valleyqubit.domains.qubit.schemas.params import FieldParams, NoiseSpec, PhysicalParams
from valleyqubit.domains.qubit.schemas.state import PureStateAngles
from valleyqubit.utils.validators import degrees_to_radians, parse_angle_pair, parse_grid, parse_scan_grid

C = TypeVar("C", bound="RunConfig")


def describe_validation_error(exc: ValidationError) -> str:
    """One ``field: message`` clause per violated constraint."""
    parts = []
    for err in exc.errors():
        loc = ".".join(str(x) for x in err["loc"]) or "config"
        parts.append(f"{loc}: {err['msg']}")
    return "; ".join(parts)


class RunConfig(BaseModel):
    """Base for command configurations: unknown keys are rejected, angles are degrees."""
    model_config = ConfigDict(extra="forbid")

    @classmethod
    def load(cls: Type[C], config_file: Optional[Path] = None, overrides: Optional[Dict[str, Any]] = None) -> C:
        """Merge a JSON config file with explicit overrides (``None`` values are ignored)."""
        values: Dict[str, Any] = {}
        if config_file is not None:
            try:
                payload = json.loads(Path(config_file).read_text(encoding="utf-8"))
            except OSError as e:
                raise StorageError(f"Cannot read config {config_file}: {e}", path=str(config_file), original_error=e) from e
            except json.JSONDecodeError as e:
                raise ConfigError(f"{config_file}:{e.lineno}: invalid JSON: {e.msg}", field="config") from e
            if not isinstance(payload, dict):
                raise ConfigError(f"{config_file}: config must be a JSON object", field="config")
            values.update(payload)
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        try:
            return cls(**values)
        except ValidationError as e:
            raise ConfigError(f"Invalid {cls.__name__}: {describe_validation_error(e)}", field="config") from e


def _check_grid(v: str) -> str:
    parse_grid(v)
    return v


class SimulateConfig(RunConfig):
    theta: float = Field(..., ge=0.0, le=180.0)
    phi: float = 0.0
    visibility: Optional[float] = Field(None, gt=0.0, le=1.0)
    t1: float = Field(DEFAULT_T1, gt=0.0)
    t2: Optional[float] = Field(None, gt=0.0)
    gamma: float = Field(0.0, ge=0.0)
    i1: float = Field(0.0, ge=0.0)
    i2: float = Field(0.0, ge=0.0)
    i3: float = Field(1.0, ge=0.0)
    temperature: Optional[float] = Field(None, ge=0.0)
    grid: str = DEFAULT_SCAN_GRID
    noise: Literal["none", "poisson"] = "none"
    exposure: float = Field(DEFAULT_EXPOSURE, ge=0.0)
    seed: int = 0
    out: Path = Path(".")
    name: str = Field("scan", min_length=1)

    @field_validator("grid")
    @classmethod
    def valid_grid(cls, v):
        parse_scan_grid(v)
        return v

    @model_validator(mode="after")
    def one_coherence_source(self):
        if self.visibility is not None and self.t2 is not None:
            raise ValueError("Give either visibility or t2, not both")
        if self.i1 + self.i2 + self.i3 <= 0.0:
            raise ValueError("i1 + i2 + i3 must be positive")
        return self

    def prepared(self) -> PureStateAngles:
        return PureStateAngles.from_degrees(self.theta, self.phi)

    def physical_params(self) -> PhysicalParams:
        extra = dict(gamma=self.gamma, i1=self.i1, i2=self.i2, i3=self.i3, temperature_label=self.temperature)
        if self.visibility is not None:
            return PhysicalParams.from_visibility(self.visibility, t1=self.t1, **extra)
        if self.t2 is not None:
            return PhysicalParams(t1=self.t1, t2=self.t2, **extra)
        return PhysicalParams(t1=self.t1, **extra)

    def noise_spec(self) -> NoiseSpec:
        return NoiseSpec(kind=self.noise, exposure=self.exposure)

    def angle_grid(self) -> List[float]:
        return degrees_to_radians(parse_scan_grid(self.grid))

    def output_paths(self) -> Tuple[Path, Path]:
        return self.out / f"{self.name}.csv", self.out / f"{self.name}.meta.json"


class _TomoOptions(RunConfig):
    calibration: Optional[Path] = None
    self_calibrate: bool = False
    q3: Optional[float] = Field(None, gt=0.0)
    compensate_decay: Optional[float] = Field(None, gt=0.0, le=1.0)
    reference_visibility: Optional[float] = Field(None, gt=0.0, le=1.0)
    target: Optional[str] = None
    extrema: Literal["sample", "fit"] = "sample"
    background: float = Field(0.0, ge=0.0)

    @field_validator("target")
    @classmethod
    def valid_target(cls, v):
        if v is not None:
            theta, _ = parse_angle_pair(v)
            if not 0.0 <= theta <= 180.0:
                raise ValueError("Target theta must lie in [0, 180] degrees")
        return v

    @model_validator(mode="after")
    def calibration_source(self):
        if self.calibration is None and not self.self_calibrate:
            raise ValueError("A calibration scan is required unless self_calibrate is set")
        if self.calibration is not None and self.self_calibrate:
            raise ValueError("Use either a calibration scan or self_calibrate, not both")
        return self

    def target_angles(self) -> Optional[PureStateAngles]:
        if self.target is None:
            return None
        return PureStateAngles.from_degrees(*parse_angle_pair(self.target))

    def reconstruct_options(self) -> Dict[str, Any]:
        return dict(
            q3=self.q3,
            compensate=self.compensate_decay,
            target=self.target_angles(),
            extrema=self.extrema,
            background=self.background,
            reference_visibility=self.reference_visibility,
        )


class TomoConfig(_TomoOptions):
    scan: Path
    out: Path = Path("tomo.json")


class BatchTomoConfig(_TomoOptions):
    scans: List[Path] = Field(..., min_length=1)
    out_dir: Path = Path(".")
    workers: Optional[int] = Field(None, ge=1)

    def output_for(self, scan: Path) -> Path:
        return self.out_dir / f"{scan.stem}.tomo.json"


class UncertaintyConfig(RunConfig):
    theta: Optional[float] = Field(None, ge=0.0, le=180.0)
    phi: float = 0.0
    rho: Optional[Path] = None
    r_angle: float = 0.0
    grid: str = DEFAULT_SWEEP_GRID
    out: Path = Path("sweep.csv")

    @field_validator("grid")
    @classmethod
    def valid_grid(cls, v):
        return _check_grid(v)

    @model_validator(mode="after")
    def one_state_source(self):
        if (self.theta is None) == (self.rho is None):
            raise ValueError("Give exactly one of theta or rho")
        return self

    def angles(self) -> PureStateAngles:
        return PureStateAngles.from_degrees(self.theta, self.phi)

    def angle_grid(self) -> List[float]:
        return degrees_to_radians(parse_grid(self.grid))


class DynamicsConfig(RunConfig):
    b_field: float = 0.0
    g_factor: float = DEFAULT_G_FACTOR
    t1: float = Field(DEFAULT_T1, gt=0.0)
    t2_star: float = Field(DEFAULT_T2_STAR, gt=0.0)
    grid: str = DEFAULT_SCAN_GRID
    out: Path = Path("pattern.csv")
    summary: Path = Path("summary.json")
    verify: bool = False
    n_steps: int = Field(DEFAULT_QUADRATURE_STEPS, ge=MIN_QUADRATURE_STEPS)

    @field_validator("grid")
    @classmethod
    def valid_grid(cls, v):
        return _check_grid(v)

    def field_params(self) -> FieldParams:
        return FieldParams(b_field=self.b_field, g_factor=self.g_factor, t1=self.t1, t2_star=self.t2_star)

    def angle_grid(self) -> List[float]:
        return degrees_to_radians(parse_grid(self.grid))
