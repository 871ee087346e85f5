# tomography.py - Density-matrix reconstruction endpoints

from fastapi import APIRouter, Depends

from valleyqubit.api.deps import get_worker_pool_size
from valleyqubit.domains.qubit.schemas.requests import (
    BatchTomographyRequest,
    BatchTomographyResponse,
    TomographyRequest,
)
from valleyqubit.domains.qubit.schemas.results import TomographyResult
from valleyqubit.domains.qubit.services.tomography_service import reconstruct, reconstruct_batch
from valleyqubit.utils.logging import get_logger


logger = get_logger(__name__)


router = APIRouter(tags=["tomography"])


@router.post("", response_model=TomographyResult)
def reconstruct_state(request: TomographyRequest):
    """
    Reconstruct ρ from one scan. A result with ``projection_applied`` set is
    still a success.
    """
    return reconstruct(request.scan, request.calibration, **request.reconstruct_options())


@router.post("/batch", response_model=BatchTomographyResponse)
def reconstruct_states(
    request: BatchTomographyRequest,
    workers: int = Depends(get_worker_pool_size),
):
    """
    Reconstruct many scans against one calibration; results follow input order.
    """
    results = reconstruct_batch(request.scans, request.calibration, workers=workers, **request.reconstruct_options())
    projections = sum(r.projection_applied for r in results)
    logger.info("Batch tomography: %d scans, %d projected", len(results), projections)
    return BatchTomographyResponse(results=results, projections=projections)
