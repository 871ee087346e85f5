# constants.py - Physical constants, numeric tolerances and default grids.
# One table so every module agrees on the same values.

# CODATA 2018
BOHR_MAGNETON = 9.2740100783e-24  # J/T
HBAR = 1.054571817e-34  # J*s

# Valley exciton in monolayer WSe2
DEFAULT_G_FACTOR = -3.7
DEFAULT_T2_STAR = 0.37e-12  # s
DEFAULT_T1 = 1.85e-12  # s, gives T2*/T1 = 0.2 together with DEFAULT_T2_STAR

# Time-integrated coherence visibility T2*/T1 at 4.7 K
LOW_TEMPERATURE_VISIBILITY = 0.2

# Tolerances
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-12
DIAGONAL_SUM_TOL = 1e-9
BOUND_TOL = 1e-9

# Grids (degrees at the CLI boundary)
DEFAULT_SCAN_GRID = "0:360:15"
DEFAULT_SWEEP_GRID = "0:180:2.5"
MIN_SCAN_POINTS = 4

# Photon counts per unit intensity for Poisson noise
DEFAULT_EXPOSURE = 1.0e6

# Composite Simpson quadrature
DEFAULT_QUADRATURE_STEPS = 200_000
MIN_QUADRATURE_STEPS = 1_000
QUADRATURE_CUTOFF = 20.0  # multiples of max(T1, T2*)

# Raw fitted matrices may carry rounding noise before the physicality projection
PROJECTION_HERMITIAN_TOL = 1e-9
