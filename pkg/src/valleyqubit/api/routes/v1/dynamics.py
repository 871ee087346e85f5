# dynamics.py - Magnetic-field precession endpoint

import math

from fastapi import APIRouter

from valleyqubit.domains.qubit.schemas.requests import DynamicsRequest, DynamicsResponse, PatternPoint
from valleyqubit.domains.qubit.services.dynamics_service import precession, rotated_pattern


router = APIRouter(tags=["dynamics"])


@router.post("", response_model=DynamicsResponse)
def precession_pattern(request: DynamicsRequest):
    """
    Larmor frequency, pattern rotation and contrast, plus the rotated pattern.
    """
    params = request.field_params()
    pattern = [
        PatternPoint(alpha_deg=math.degrees(a), intensity=i)
        for a, i in rotated_pattern(request.angle_grid(), params)
    ]
    return DynamicsResponse(**precession(params).summary(), pattern=pattern)
