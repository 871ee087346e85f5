import math
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class PureStateAngles(BaseModel):
    """Bloch angles of cos(θ/2)|K⟩ + sin(θ/2)e^{iφ}|K′⟩, in radians."""
    model_config = ConfigDict(frozen=True)

    theta: float = Field(..., ge=0.0, le=math.pi)
    phi: float = Field(0.0, ge=0.0, lt=2.0 * math.pi)

    @classmethod
    def from_degrees(cls, theta_deg: float, phi_deg: float = 0.0) -> "PureStateAngles":
        """Build from CLI-style degrees; φ is wrapped into [0°, 360°)."""
        phi = math.radians(phi_deg % 360.0)
        # Tiny negative inputs wrap to exactly 2π.
        if phi >= 2.0 * math.pi:
            phi = 0.0
        return cls(theta=math.radians(theta_deg), phi=phi)

    @property
    def theta_deg(self) -> float:
        return math.degrees(self.theta)

    @property
    def phi_deg(self) -> float:
        return math.degrees(self.phi)


class ComplexEntry(BaseModel):
    """JSON form of one complex matrix element."""
    re: float
    im: float


MatrixEntries = List[List[ComplexEntry]]


def matrix_to_entries(matrix: np.ndarray) -> MatrixEntries:
    return [[ComplexEntry(re=float(z.real), im=float(z.imag)) for z in row] for row in matrix]


def entries_to_matrix(entries: MatrixEntries) -> np.ndarray:
    if len(entries) != 2 or any(len(row) != 2 for row in entries):
        raise ValueError("Matrix must be 2x2")
    return np.array([[complex(e.re, e.im) for e in row] for row in entries], dtype=complex)
