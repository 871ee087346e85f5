from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from valleyqubit.api.routes.health import router as health_router
from valleyqubit.api.routes.v1.router import api_router
from valleyqubit.config import settings
from valleyqubit.core.exceptions import (
    CalibrationError,
    ConfigError,
    DomainError,
    FitError,
    ScanParseError,
    StorageError,
)
from valleyqubit.core.middleware import LoggingMiddleware
from valleyqubit.utils.logging import configure_logging, get_logger

logger = get_logger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    configure_logging(settings.LOG_LEVEL)
    logger.info("valley-qubit service starting (%s)", settings.ENVIRONMENT)
    yield


app = FastAPI(title="valley-qubit-kit", debug=settings.DEBUG, lifespan=lifespan)

app.add_middleware(LoggingMiddleware)


def _detail(exc, **context) -> dict:
    body = {"detail": exc.message}
    body.update({k: v for k, v in context.items() if v is not None})
    return body


# Global exception handlers
@app.exception_handler(DomainError)
async def domain_error_handler(request: Request, exc: DomainError):
    return JSONResponse(status_code=422, content=_detail(exc, field=exc.field))


@app.exception_handler(CalibrationError)
async def calibration_error_handler(request: Request, exc: CalibrationError):
    return JSONResponse(status_code=422, content=_detail(exc, field=exc.field))


@app.exception_handler(FitError)
async def fit_error_handler(request: Request, exc: FitError):
    return JSONResponse(status_code=422, content=_detail(exc, rank=exc.rank))


@app.exception_handler(ScanParseError)
async def scan_parse_error_handler(request: Request, exc: ScanParseError):
    return JSONResponse(status_code=422, content=_detail(exc, line=exc.line))


@app.exception_handler(ConfigError)
async def config_error_handler(request: Request, exc: ConfigError):
    return JSONResponse(status_code=400, content=_detail(exc, field=exc.field))


@app.exception_handler(StorageError)
async def storage_error_handler(request: Request, exc: StorageError):
    logger.error("Storage failure at %s: %s", exc.path, exc.message)
    return JSONResponse(status_code=500, content={"detail": "Storage error"})


@app.exception_handler(Exception)
async def generic_exception_handler(request: Request, exc: Exception):
    logger.exception("Unhandled error on %s %s", request.method, request.url.path)
    return JSONResponse(status_code=500, content={"detail": "Internal server error"})


# Register health check
app.include_router(health_router, prefix="/api/health", tags=["health"])

# Register v1 endpoints (simulate, tomography, uncertainty, dynamics)
app.include_router(api_router, prefix="/api/v1")
