import math
from typing import Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from valleyqubit.core.constants import (
    DEFAULT_EXPOSURE,
    DEFAULT_G_FACTOR,
    DEFAULT_T1,
    DEFAULT_T2_STAR,
    LOW_TEMPERATURE_VISIBILITY,
)
from valleyqubit.utils.validators import validate_visibility

# T2 that, with DEFAULT_T1, yields DEFAULT_T2_STAR
DEFAULT_T2 = 1.0 / (1.0 / DEFAULT_T2_STAR - 1.0 / DEFAULT_T1)


class PhysicalParams(BaseModel):
    """Lifetimes, coherence suppression and intensity weights of the emitted light.

    ``t2=None`` means no pure dephasing, so T₂* = T₁. ``temperature_label`` is
    metadata only; temperature enters through the parameter set itself.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    t1: float = Field(DEFAULT_T1, gt=0.0)
    t2: Optional[float] = Field(DEFAULT_T2, gt=0.0)
    gamma: float = Field(0.0, ge=0.0)
    i1: float = Field(0.0, ge=0.0)
    i2: float = Field(0.0, ge=0.0)
    i3: float = Field(1.0, ge=0.0)
    temperature_label: Optional[float] = Field(None, ge=0.0)

    @model_validator(mode="after")
    def positive_total_intensity(self):
        if self.i1 + self.i2 + self.i3 <= 0.0:
            raise ValueError("i1 + i2 + i3 must be positive")
        return self

    @classmethod
    def from_visibility(
        cls,
        visibility: float,
        t1: float = DEFAULT_T1,
        **kwargs,
    ) -> "PhysicalParams":
        """Parameter set whose time-integrated ratio T₂*/T₁ equals ``visibility``."""
        validate_visibility(visibility)
        t2 = None if visibility == 1.0 else t1 * visibility / (1.0 - visibility)
        return cls(t1=t1, t2=t2, **kwargs)

    @classmethod
    def low_temperature(cls, **kwargs) -> "PhysicalParams":
        """The 4.7 K preset, T₂*/T₁ ≃ 0.2."""
        kwargs.setdefault("temperature_label", 4.7)
        return cls.from_visibility(LOW_TEMPERATURE_VISIBILITY, **kwargs)

    @property
    def t2_star(self) -> float:
        if self.t2 is None:
            return self.t1
        return 1.0 / (1.0 / self.t1 + 1.0 / self.t2)

    @property
    def visibility(self) -> float:
        """Effective coherence visibility v = (T₂*/T₁)·e^{−Γ}."""
        return (self.t2_star / self.t1) * math.exp(-self.gamma)

    @property
    def total_intensity(self) -> float:
        return self.i1 + self.i2 + self.i3

    @property
    def fractions(self) -> Tuple[float, float, float]:
        """(q₁, q₂, q₃)."""
        total = self.total_intensity
        return self.i1 / total, self.i2 / total, self.i3 / total

    @property
    def q3(self) -> float:
        return self.fractions[2]


class NoiseSpec(BaseModel):
    """Counting noise on each analyzer setting; ``exposure`` is counts per unit intensity."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["none", "poisson"] = "none"
    exposure: float = DEFAULT_EXPOSURE


class FieldParams(BaseModel):
    """Longitudinal magnetic field and the lifetimes that set the precession pattern."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    b_field: float = 0.0
    g_factor: float = DEFAULT_G_FACTOR
    t1: float = Field(DEFAULT_T1, gt=0.0)
    t2_star: float = Field(DEFAULT_T2_STAR, gt=0.0)
