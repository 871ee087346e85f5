import math
import re
from typing import List, Optional, Tuple

import numpy as np

from valleyqubit.core.constants import MIN_SCAN_POINTS

GRID_REGEX = r"^\s*(-?\d+(\.\d+)?)\s*:\s*(-?\d+(\.\d+)?)\s*:\s*(\d+(\.\d+)?)\s*$"


def parse_grid(text: str, min_points: int = 1) -> List[float]:
    """Parse a ``start:stop:step`` grid in degrees, stop inclusive.

    Returns:
        Grid points in degrees, strictly increasing.

    Raises:
        ValueError: For malformed grids, non-positive steps or too few points.
    """
    match = re.match(GRID_REGEX, text or "")
    if not match:
        raise ValueError(f"Grid must look like start:stop:step, got {text!r}")
    start, stop, step = float(match.group(1)), float(match.group(3)), float(match.group(5))
    if step <= 0:
        raise ValueError("Grid step must be positive")
    if stop < start:
        raise ValueError("Grid stop must not be below start")

    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    points = [start + k * step for k in range(count)]
    if len(points) < min_points:
        raise ValueError(f"Grid needs at least {min_points} points, got {len(points)}")
    return points


def parse_scan_grid(text: str) -> List[float]:
    return parse_grid(text, min_points=MIN_SCAN_POINTS)


def parse_angle_pair(text: str) -> Tuple[float, float]:
    """Parse ``theta,phi`` in degrees."""
    parts = [p.strip() for p in (text or "").split(",")]
    if len(parts) != 2:
        raise ValueError(f"Expected 'theta,phi' in degrees, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as e:
        raise ValueError(f"Angles must be numeric, got {text!r}") from e


def degrees_to_radians(values: List[float]) -> List[float]:
    return [float(v) for v in np.deg2rad(np.asarray(values, dtype=float))]


def validate_strictly_increasing(values: List[float], name: str = "angles") -> List[float]:
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"{name} must be strictly increasing")
    return values


def validate_visibility(v: Optional[float]) -> Optional[float]:
    """Coherence visibility lies in (0, 1]."""
    if v is None:
        return v
    if not (0.0 < v <= 1.0):
        raise ValueError("Visibility must lie in (0, 1]")
    return v
