# health.py - Health check endpoint for the valley-qubit service

from fastapi import APIRouter, Depends

from valleyqubit.api.deps import get_settings
from valleyqubit.config import Settings


router = APIRouter(tags=["health"])


@router.get("/")
async def health_check(config: Settings = Depends(get_settings)):
    """
    Service liveness plus the environment it runs in.
    """
    return {"status": "healthy", "environment": config.ENVIRONMENT}
