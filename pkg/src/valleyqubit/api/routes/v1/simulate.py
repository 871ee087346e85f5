# simulate.py - Forward-model endpoint: synthetic angle-resolved PL scans

from fastapi import APIRouter

from valleyqubit.domains.qubit.schemas.requests import SimulateRequest
from valleyqubit.domains.qubit.schemas.scan import PLScan
from valleyqubit.domains.qubit.services.plmodel_service import synthesize_scan


router = APIRouter(tags=["simulate"])


@router.post("", response_model=PLScan)
def simulate_scan(request: SimulateRequest):
    """
    Synthesize a PL scan for the prepared state; deterministic per seed.
    Angles in the returned scan are radians.
    """
    return synthesize_scan(
        request.prepared(),
        request.angle_grid(),
        request.physical_params(),
        noise=request.noise,
        seed=request.seed,
    )
