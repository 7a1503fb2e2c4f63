from contextlib import asynccontextmanager

from fastapi import FastAPI

from api.views import analysis_view
from shared.core.config import SETTINGS
from shared.core.logging_config import get_logger, setup_logging

# Initialize logging
setup_logging()
logger = get_logger(__name__)

VERSION = "1.0.0"


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan manager."""
    logger.info(f"Application startup (N convention {SETTINGS.N_CONVENTION}, max cells {SETTINGS.MAX_CELLS})")
    yield
    logger.info("Application shutdown")


def create_app() -> FastAPI:
    app = FastAPI(
        title="rotodo API",
        description="""
## rotodo - rotated odometer analysis

Exact renormalization of rotated odometers F = a o R_pi on q intervals:
substitutions, Bratteli-Vershik diagrams, periodic regions, candidate
ergodic measures and dyadic eigenvalue tests.

### Error Responses

* **400**: malformed permutation or violated precondition
* **413**: the cell map exceeds `MAX_CELLS`
        """,
        version=VERSION,
        docs_url="/docs",
        redoc_url="/redoc",
        openapi_tags=[
            {"name": "health", "description": "Health check endpoint"},
            {"name": "analysis", "description": "Reports, surveys and diagram export"},
        ],
        license_info={"name": "MIT License", "url": "https://opensource.org/licenses/MIT"},
        lifespan=lifespan,
    )

    @app.get("/", tags=["health"])
    async def root_health():
        """Root health check endpoint."""
        return {
            "status": "healthy",
            "service": "rotodo",
            "version": VERSION,
        }

    app.include_router(analysis_view.router)

    return app


if __name__ == "__main__":
    from uvicorn import run

    run("api.main:create_app", host=SETTINGS.API_HOST, port=SETTINGS.API_PORT, factory=True)
