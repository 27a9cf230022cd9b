import logging
from typing import Any, Dict

from pydantic import ValidationError

from app.core.celery_app import celery_app
from app.core.errors import LabError
from app.schemas.experiment import ExperimentConfig
from app.services.experiment_service import ExperimentService

logger = logging.getLogger(__name__)


@celery_app.task(name="run_compare", bind=True, max_retries=3)
def run_compare_task(self, config: Dict[str, Any]) -> Dict[str, Any]:
    """
    Queued Monte Carlo comparison.

    Args:
        config: ExperimentConfig fields as JSON

    Returns:
        The ComparisonReport as a JSON-compatible dict
    """
    try:
        experiment = ExperimentConfig.model_validate(config)
        report = ExperimentService(experiment).run_compare()
        return report.model_dump()
    except (ValidationError, LabError):
        # deterministic failures: retrying cannot help
        raise
    except Exception as exc:
        logger.warning("run_compare failed, retrying: %s", exc)
        raise self.retry(exc=exc, countdown=60)
