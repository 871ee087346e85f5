"""Exact 2x2 linear algebra for valley-qubit states.

Basis convention: index 0 is |K⟩ (couples to σ⁺), index 1 is |K′⟩. For the
pure state cos(θ/2)|K⟩ + sin(θ/2)e^{iφ}|K′⟩ the coherence is
ρ₀₁ = ⟨K|ρ|K′⟩ = (1/2)sinθ e^{−iφ}; tomography assembles matrices with the
same sign. All angles are radians and all entropies are in bits.
"""

import math
from dataclasses import dataclass, field
from typing import Tuple, Union

import numpy as np
import numpy.typing as npt

from valleyqubit.core.constants import HERMITIAN_TOL, PSD_TOL, TRACE_TOL
from valleyqubit.core.exceptions import DomainError
from valleyqubit.domains.qubit.schemas.state import PureStateAngles

ComplexMatrix2 = npt.NDArray[np.complex128]

IDENTITY = np.eye(2, dtype=complex)


def as_matrix(entries) -> ComplexMatrix2:
    matrix = np.array(entries, dtype=complex)
    if matrix.shape != (2, 2):
        raise DomainError(f"Expected a 2x2 matrix, got shape {matrix.shape}", field="entries")
    return matrix


def hermiticity_defect(matrix: ComplexMatrix2) -> float:
    """max|A − A†|."""
    return float(np.max(np.abs(matrix - matrix.conj().T)))


def eigenvalues(matrix: ComplexMatrix2) -> Tuple[float, float]:
    """Eigenvalues of a Hermitian 2x2 matrix from its characteristic polynomial, largest first."""
    a, d = matrix[0, 0].real, matrix[1, 1].real
    b = matrix[0, 1]
    mean = (a + d) / 2.0
    radius = math.hypot((a - d) / 2.0, abs(b))
    return mean + radius, mean - radius


def _readonly(matrix: ComplexMatrix2) -> ComplexMatrix2:
    matrix = matrix.copy()
    matrix.setflags(write=False)
    return matrix


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian 2x2 operator."""
    entries: ComplexMatrix2 = field(repr=False)

    def __post_init__(self):
        matrix = as_matrix(self.entries)
        if hermiticity_defect(matrix) > HERMITIAN_TOL:
            raise DomainError("Observable must be Hermitian", field="entries")
        object.__setattr__(self, "entries", _readonly(matrix))

    def squares_to_identity(self, tol: float = HERMITIAN_TOL) -> bool:
        return bool(np.max(np.abs(self.entries @ self.entries - IDENTITY)) <= tol)

    def eigenvectors(self) -> np.ndarray:
        """Orthonormal eigenvectors as columns."""
        _, vectors = np.linalg.eigh(self.entries)
        return vectors


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite 2x2 matrix."""
    entries: ComplexMatrix2 = field(repr=False)

    def __post_init__(self):
        matrix = as_matrix(self.entries)
        violation = density_matrix_violation(matrix)
        if violation:
            raise DomainError(f"Not a density matrix: {violation}", field="rho")
        object.__setattr__(self, "entries", _readonly(matrix))

    @classmethod
    def from_bloch(cls, x: float, y: float, z: float) -> "DensityMatrix":
        """(I + xσ_x + yσ_y + zσ_z)/2 with |r| ≤ 1."""
        return cls(np.array([[1.0 + z, x - 1j * y], [x + 1j * y, 1.0 - z]], dtype=complex) / 2.0)

    @classmethod
    def maximally_mixed(cls) -> "DensityMatrix":
        return cls(IDENTITY / 2.0)

    @property
    def populations(self) -> Tuple[float, float]:
        return float(self.entries[0, 0].real), float(self.entries[1, 1].real)

    @property
    def coherence(self) -> complex:
        """ρ₀₁ = ⟨K|ρ|K′⟩."""
        return complex(self.entries[0, 1])

    def eigenvalues(self) -> Tuple[float, float]:
        return eigenvalues(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return bool(np.array_equal(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash(self.entries.tobytes())


def density_matrix_violation(matrix: ComplexMatrix2) -> str:
    """Name of the first violated density-matrix invariant, or an empty string."""
    if not np.all(np.isfinite(matrix)):
        return "entries must be finite"
    if abs(matrix[0, 1] - np.conj(matrix[1, 0])) > HERMITIAN_TOL or hermiticity_defect(matrix) > HERMITIAN_TOL:
        return "Hermitian (rho01 == conj(rho10))"
    if abs(np.trace(matrix).real - 1.0) > TRACE_TOL:
        return "unit trace"
    if eigenvalues(matrix)[1] < -PSD_TOL:
        return "positive semidefinite (eigenvalues >= 0)"
    return ""


def _checked_angles(angles: Union[PureStateAngles, Tuple[float, float]]) -> Tuple[float, float]:
    if isinstance(angles, PureStateAngles):
        theta, phi = angles.theta, angles.phi
    else:
        theta, phi = angles
    if not 0.0 <= theta <= math.pi:
        raise DomainError("theta must lie in [0, pi]", field="theta")
    if not 0.0 <= phi < 2.0 * math.pi:
        raise DomainError("phi must lie in [0, 2pi)", field="phi")
    return float(theta), float(phi)


def pure_state(angles: Union[PureStateAngles, Tuple[float, float]]) -> DensityMatrix:
    """|ψ⟩⟨ψ| for ψ = cos(θ/2)|K⟩ + sin(θ/2)e^{iφ}|K′⟩."""
    theta, phi = _checked_angles(angles)
    psi = np.array([math.cos(theta / 2.0), math.sin(theta / 2.0) * np.exp(1j * phi)], dtype=complex)
    return DensityMatrix(np.outer(psi, psi.conj()))


def equatorial_projector(alpha: float) -> Observable:
    """Projector onto (|K⟩ + e^{i2α}|K′⟩)/√2; period π in α."""
    alpha = math.fmod(alpha, math.pi)
    half = 0.5 * np.exp(-2j * alpha)
    return Observable(np.array([[0.5, half], [np.conj(half), 0.5]], dtype=complex))


def measurement_observable(alpha: float) -> Observable:
    """Π̂_α − Π̂_α^⊥ = 2Π̂_α − I, the R̂/Q̂ family."""
    return Observable(2.0 * equatorial_projector(alpha).entries - IDENTITY)


def born_probability(rho: DensityMatrix, alpha: float) -> float:
    """Tr(Π̂_α ρ)."""
    p = float(np.trace(equatorial_projector(alpha).entries @ rho.entries).real)
    return min(1.0, max(0.0, p))


def expectation(obs: Observable, rho: DensityMatrix) -> float:
    """Tr(obs·ρ)."""
    return float(np.trace(obs.entries @ rho.entries).real)


def _as_density(value, name: str) -> DensityMatrix:
    if isinstance(value, DensityMatrix):
        return value
    try:
        return DensityMatrix(value)
    except DomainError as e:
        raise DomainError(f"{name}: {e.message}", field=name) from e


def fidelity(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    """Tr√(√ρ₁ρ₂√ρ₁), via the qubit identity F = √(Tr ρ₁ρ₂ + 2√(det ρ₁ det ρ₂))."""
    rho1 = _as_density(rho1, "rho1")
    rho2 = _as_density(rho2, "rho2")
    overlap = float(np.trace(rho1.entries @ rho2.entries).real)
    det1 = max(0.0, float(np.linalg.det(rho1.entries).real))
    det2 = max(0.0, float(np.linalg.det(rho2.entries).real))
    value = overlap + 2.0 * math.sqrt(det1 * det2)
    return min(1.0, math.sqrt(max(0.0, value)))


def binary_entropy(p: float) -> float:
    """H_b(p) in bits, with 0·log 0 := 0."""
    p = min(1.0, max(0.0, p))
    return -sum(x * math.log2(x) for x in (p, 1.0 - p) if x > 0.0)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """−Σλ log₂λ over eigenvalues clipped at zero."""
    lam = [max(0.0, x) for x in rho.eigenvalues()]
    total = sum(lam)
    return -sum((x / total) * math.log2(x / total) for x in lam if x > 0.0)


def purity(rho: DensityMatrix) -> float:
    return float(np.trace(rho.entries @ rho.entries).real)


def bloch_vector(rho: DensityMatrix) -> Tuple[float, float, float]:
    """(2Re ρ₀₁, −2Im ρ₀₁, ρ₀₀ − ρ₁₁); pure(θ, φ) → (sinθcosφ, sinθsinφ, cosθ)."""
    c = rho.coherence
    p0, p1 = rho.populations
    return 2.0 * c.real, -2.0 * c.imag, p0 - p1


def excitation_polarization(angles: PureStateAngles) -> Tuple[float, float]:
    """Circular and linear polarization degrees of the light that prepares the state."""
    return math.cos(angles.theta), math.sin(angles.theta)


def preparation_from_excitation(eta_c: float, phi: float = 0.0) -> PureStateAngles:
    """Bloch angles prepared by elliptical excitation with circular degree η_C."""
    if not -1.0 <= eta_c <= 1.0:
        raise DomainError("Circular polarization degree must lie in [-1, 1]", field="eta_c")
    return PureStateAngles(theta=math.acos(eta_c), phi=phi % (2.0 * math.pi))
