# router.py - Main API router for the v1 valley-qubit endpoints

from fastapi import APIRouter

from valleyqubit.api.routes.v1.dynamics import router as dynamics_router
from valleyqubit.api.routes.v1.simulate import router as simulate_router
from valleyqubit.api.routes.v1.tomography import router as tomography_router
from valleyqubit.api.routes.v1.uncertainty import router as uncertainty_router


api_router = APIRouter()
api_router.include_router(simulate_router, prefix="/simulate", tags=["simulate"])
api_router.include_router(tomography_router, prefix="/tomography", tags=["tomography"])
api_router.include_router(uncertainty_router, prefix="/uncertainty", tags=["uncertainty"])
api_router.include_router(dynamics_router, prefix="/dynamics", tags=["dynamics"])
