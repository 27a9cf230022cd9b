import logging

from fastapi import APIRouter, HTTPException
from fastapi.concurrency import run_in_threadpool
from pydantic import ValidationError
from scipy import stats

from app.core.errors import LabError
from app.schemas.experiment import (
    IncrementDensityRequest,
    IncrementDensityResponse,
    LimitCdfRequest,
    LimitCdfResponse,
)
from app.schemas.frame import ScalingFrame
from app.services.experiment_service import limit_cdf
from app.services.fredholm import increment_density

logger = logging.getLogger(__name__)

router = APIRouter(tags=["limit-law"])

# the frame time only enters through rho, which the formulas do not use
FORMULA_TIME = 1e6


@router.post("/limit-cdf", response_model=LimitCdfResponse)
async def post_limit_cdf(request: LimitCdfRequest):
    """
    Joint distribution function of the limit process.

    Returns:
        The value and the law used: finite-step for delta > 0, stationary otherwise
    """
    try:
        frame = ScalingFrame(t=FORMULA_TIME, delta=request.delta, r_list=request.r_list)
        value, law = await run_in_threadpool(limit_cdf, frame, request.s_list, request.nodes)
        return LimitCdfResponse(value=value, law=law)
    except (LabError, ValidationError, ValueError) as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.error("limit-cdf failed: %s", e)
        raise HTTPException(
            status_code=500,
            detail=f"Internal server error: {str(e)}"
        )


@router.post("/increment-density", response_model=IncrementDensityResponse)
async def post_increment_density(request: IncrementDensityRequest):
    """
    Density of X(r2) - X(0) under the stationary law, next to N(0, 2 r2).
    """
    try:
        density = await run_in_threadpool(increment_density, request.r2, request.sigma_list)
        gaussian = stats.norm.pdf(request.sigma_list, scale=(2.0 * request.r2) ** 0.5)
        return IncrementDensityResponse(
            sigma=list(request.sigma_list),
            density=[float(v) for v in density],
            gaussian=[float(v) for v in gaussian],
        )
    except LabError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.error("increment-density failed: %s", e)
        raise HTTPException(
            status_code=500,
            detail=f"Internal server error: {str(e)}"
        )
