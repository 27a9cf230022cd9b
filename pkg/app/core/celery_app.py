from celery import Celery
from app.config import settings

celery_app = Celery(
    "kpz_lab",
    broker=settings.celery_broker_url,
    backend=settings.celery_result_backend,
    include=["app.tasks.experiment_tasks"]
)


# one queued run per worker process at a time; runs are long and CPU bound
celery_app.conf.update(
    task_serializer="json",
    accept_content=["json"],
    result_serializer="json",
    timezone="UTC",
    enable_utc=True,
    task_track_started=True,
    task_time_limit=settings.task_time_limit,
    task_soft_time_limit=int(0.9 * settings.task_time_limit),
    worker_prefetch_multiplier=1,
    worker_max_tasks_per_child=20,
)
