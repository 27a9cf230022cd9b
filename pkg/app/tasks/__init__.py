from app.tasks.experiment_tasks import run_compare_task

__all__ = ["run_compare_task"]
