from starlette.middleware.base import BaseHTTPMiddleware
from starlette.requests import Request
import time
import uuid
from valleyqubit.utils.logging import get_logger


logger = get_logger("valleyqubit.access")


class LoggingMiddleware(BaseHTTPMiddleware):
    """Logs every request with its latency and echoes a request id header."""

    async def dispatch(self, request: Request, call_next):
        request_id = request.headers.get("X-Request-ID") or uuid.uuid4().hex
        start_time = time.perf_counter()
        response = await call_next(request)
        process_time = (time.perf_counter() - start_time) * 1000
        response.headers["X-Request-ID"] = request_id

        if response.status_code >= 500:
            log = logger.error
        elif response.status_code >= 400:
            log = logger.warning
        else:
            log = logger.info
        log(
            "[%s] %s %s - %d - %.2fms",
            request_id,
            request.method,
            request.url.path,
            response.status_code,
            process_time,
        )
        return response
