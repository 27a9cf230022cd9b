import logging

from celery.result import AsyncResult
from fastapi import APIRouter, HTTPException

from app.core.celery_app import celery_app
from app.schemas.experiment import ExperimentConfig, TaskStatus, TaskSubmitted
from app.tasks.experiment_tasks import run_compare_task

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/experiments", tags=["experiments"])


@router.post("/compare", response_model=TaskSubmitted, status_code=202)
async def submit_compare(config: ExperimentConfig):
    """
    Queue a Monte Carlo comparison run.

    Returns:
        The Celery task id to poll
    """
    try:
        task = run_compare_task.delay(config.model_dump(mode="json"))
    except Exception as e:
        # broker unreachable: nothing can run without the queue
        logger.warning("could not queue compare run: %s", e)
        raise HTTPException(
            status_code=503,
            detail=f"Task queue unavailable: {str(e)}"
        )
    return TaskSubmitted(task_id=task.id)


@router.get("/{task_id}", response_model=TaskStatus)
async def get_experiment(task_id: str):
    """
    State of a queued run, with its report once finished.
    """
    try:
        result = AsyncResult(task_id, app=celery_app)
        status = TaskStatus(task_id=task_id, state=result.state)
        if result.successful():
            status.report = result.result
        elif result.failed():
            status.error = str(result.result)
        return status
    except Exception as e:
        logger.error("status lookup for %s failed: %s", task_id, e)
        raise HTTPException(
            status_code=500,
            detail=f"Internal server error: {str(e)}"
        )
