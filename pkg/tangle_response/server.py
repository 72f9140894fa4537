"""
HTTP service exposing the response, convex-roof and critical-noise computations.
"""

import logging
import time
from contextlib import asynccontextmanager

from fastapi import FastAPI, HTTPException
from fastapi.concurrency import run_in_threadpool

from . import __version__
from .critical import critical_q
from .models import (
    CriticalRequest, CriticalResult, Family, HealthResponse, ResponseReport,
    RoofReport, RoofRequest, SymParams,
)
from .response import lrt
from .verification import roof_report

# Get logger (configuration done in cli.py)
logger = logging.getLogger(__name__)


class TangleResponseServer:
    """
    FastAPI application wrapping the library.

    Requests are stateless; the server only tracks uptime and a request
    counter for /health. Heavy endpoints run in the thread pool.
    """

    def __init__(self, port: int = 5001, host: str = "127.0.0.1"):
        """
        Initialize the server.

        Args:
            port: Port to bind the server to
            host: Interface to bind
        """
        self.port = port
        self.host = host

        # Statistics
        self.start_time = time.time()
        self.request_count = 0

        @asynccontextmanager
        async def lifespan(app: FastAPI):
            logger.info("Server ready")
            yield
            logger.info(f"Server shutting down after {self.request_count} requests")

        self.app = FastAPI(
            title="tangle-response",
            description="Linear response of entanglement to W-type noise",
            version=__version__,
            lifespan=lifespan
        )

        self._setup_routes()

    def _update_activity(self):
        self.request_count += 1

    def _setup_routes(self):
        """Setup FastAPI routes."""

        @self.app.get("/health", response_model=HealthResponse)
        async def health_check():
            """Health check endpoint."""
            return HealthResponse(
                status="ok",
                version=__version__,
                uptime=time.time() - self.start_time,
                requests=self.request_count
            )

        @self.app.post("/report", response_model=ResponseReport)
        async def report(req: SymParams):
            """Linear response of the three-tangle."""
            try:
                self._update_activity()
                return lrt(req)
            except ArithmeticError as e:
                logger.error(f"Error in report: {e}", exc_info=True)
                raise HTTPException(status_code=500, detail=str(e))

        @self.app.post("/roof", response_model=RoofReport, response_model_by_alias=True)
        async def roof(req: RoofRequest):
            """Convex-roof oracle against the ansatz decomposition."""
            try:
                self._update_activity()
                return await run_in_threadpool(roof_report, req.state, req.q, req.m, req.restarts, req.seed)
            except ValueError as e:
                logger.debug(f"Invalid roof request: {e}")
                raise HTTPException(status_code=422, detail=str(e))
            except Exception as e:
                logger.error(f"Error in roof: {e}", exc_info=True)
                raise HTTPException(status_code=500, detail=str(e))

        @self.app.post("/critical", response_model=CriticalResult)
        async def critical(req: CriticalRequest):
            """Critical noise of a G or J state."""
            try:
                self._update_activity()
                param = req.beta if req.family is Family.G else req.alpha
                if param is None:
                    raise ValueError(f"{'beta' if req.family is Family.G else 'alpha'} is required for family {req.family.value}")
                return await run_in_threadpool(critical_q, req.family, param, req.gamma)
            except ValueError as e:
                logger.debug(f"Invalid critical request: {e}")
                raise HTTPException(status_code=422, detail=str(e))
            except Exception as e:
                logger.error(f"Error in critical: {e}", exc_info=True)
                raise HTTPException(status_code=500, detail=str(e))

    def start(self):
        """Start the server (blocking)."""
        import uvicorn

        logger.info(f"Starting server on {self.host}:{self.port}...")
        uvicorn.run(
            self.app,
            host=self.host,
            port=self.port,
            log_level="warning"
        )
