# uncertainty.py - Uncertainty-relation sweep endpoint

import math

from fastapi import APIRouter

from valleyqubit.core.exceptions import DomainError
from valleyqubit.domains.qubit.models.qstate import DensityMatrix, pure_state
from valleyqubit.domains.qubit.schemas.requests import UncertaintySweepRequest, UncertaintySweepResponse
from valleyqubit.domains.qubit.schemas.state import PureStateAngles, entries_to_matrix
from valleyqubit.domains.qubit.services.uncertainty_service import sweep_min_slack, uncertainty_sweep


router = APIRouter(tags=["uncertainty"])


@router.post("/sweep", response_model=UncertaintySweepResponse)
def sweep_uncertainty(request: UncertaintySweepRequest):
    """
    Entropic, Robertson and coherence relations for Q̂ over the grid, R̂ fixed.
    """
    if request.rho is not None:
        try:
            matrix = entries_to_matrix(request.rho)
        except ValueError as e:
            raise DomainError(str(e), field="rho") from e
        rho = DensityMatrix(matrix)
    else:
        rho = pure_state(PureStateAngles.from_degrees(request.theta_deg, request.phi_deg))
    reports = uncertainty_sweep(rho, request.r_angle, request.angle_grid())
    slack, alpha = sweep_min_slack(reports)
    return UncertaintySweepResponse(reports=reports, min_slack=slack, min_slack_alpha_deg=math.degrees(alpha))
