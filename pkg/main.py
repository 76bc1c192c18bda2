from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from app.routers import constants, fixtures, groups, suites
from app.core.config import settings
from app.core.exceptions import FixtureError
from app.services.fixture_loader import fixture_loader
import logging

# Configure logging
logging.basicConfig(level=settings.log_level.upper())
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    try:
        names = fixture_loader.clifford_names()
        logger.info(f"Loaded {len(names)} Clifford fixtures from {fixture_loader.fixtures_dir}")
    except FixtureError as e:
        # suites without fixture files still run
        logger.error(f"Fixture check failed: {str(e)}")
    yield


# Initialize FastAPI app
app = FastAPI(
    title="Klein Verification Toolkit API",
    description="Exact verification of Clifford, group-theoretic, finite-field and mass-formula claims",
    version=settings.version,
    docs_url="/docs",
    redoc_url="/redoc",
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["GET", "POST"],
    allow_headers=["*"],
)

# Include routers
app.include_router(suites.router, prefix="/api/v1", tags=["suites"])
app.include_router(fixtures.router, prefix="/api/v1", tags=["fixtures"])
app.include_router(groups.router, prefix="/api/v1", tags=["groups"])
app.include_router(constants.router, prefix="/api/v1", tags=["constants"])


@app.get("/")
async def root():
    """
    Root endpoint - returns the toolkit name and the available suites
    """
    return {
        "message": "Klein Verification Toolkit API",
        "version": settings.version,
        "description": "Exact-arithmetic verification suites with machine-readable reports",
        "suites": "/api/v1/suites",
    }


@app.get("/health")
async def health_check():
    """
    Health check endpoint to verify API is running
    """
    return {
        "status": "healthy",
        "message": "Klein Verification Toolkit API is running",
        "version": settings.version
    }


if __name__ == "__main__":
    import uvicorn
    uvicorn.run("main:app", host=settings.host, port=settings.port, reload=settings.debug)
