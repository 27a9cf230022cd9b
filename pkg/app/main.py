from fastapi import FastAPI
import logging

from app import __version__
from app.config import settings
from app.routes import experiments, health, limit_law

logging.basicConfig(level=settings.log_level, format=settings.log_format)
logger = logging.getLogger(__name__)

app = FastAPI(
    title="KPZ Lab",
    description="Reflected Brownian motions against the finite-step and stationary Airy laws.",
    version=__version__,
    docs_url="/docs",
    redoc_url="/redoc",
    openapi_url="/openapi.json"
)

# Register routers
app.include_router(health.router)
app.include_router(limit_law.router)
app.include_router(experiments.router)


@app.on_event("startup")
async def startup_event():
    logger.info(
        "KPZ Lab %s: %d nodes per block, core window %.1f, broker %s",
        __version__, settings.quadrature_nodes, settings.core_window, settings.celery_broker_url,
    )
