"""Configuration settings for the application."""
from pydantic_settings import BaseSettings
from typing import List


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Nystrom quadrature
    quadrature_nodes: int = 60  # nodes in the core window of each block
    gl_order: int = 10
    core_window: float = 14.0  # S_max = cut + core_window
    lower_margin: float = 12.0  # L2(R) rules start this far below min(s)
    tail_log_tolerance: float = 23.0  # e^{-23} ~ 1e-10 for the e^{-delta s} tail
    tail_panel_width: float = 2.0
    tail_panel_order: int = 8
    min_nodes: int = 8

    # Airy integrals
    airy_panel_width: float = 1.0
    airy_panel_order: int = 20
    airy_truncation: float = 1e-18
    airy_max_panels: int = 4000

    # Finite differences
    fd_step: float = 1e-3
    increment_fd_step: float = 1e-2
    increment_level: float = 8.0

    # Simulation
    min_time_steps: int = 2000
    steps_per_scale: int = 200  # h <= t^{1/3} / steps_per_scale
    batch_size: int = 64
    workers: int = 1
    sup_time_steps: int = 131072

    # Statistical tolerances: ks <= c1 t^{-1/3} + c2 / sqrt(trials)
    ks_c1: float = 0.6
    ks_c2: float = 1.7
    default_s_grid: List[float] = [
        -4.0, -3.5, -3.0, -2.5, -2.0, -1.5, -1.0, -0.5,
        0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0,
    ]

    seed: int = 20240101

    # Celery configuration
    celery_broker_url: str = "redis://localhost:6379/0"
    celery_result_backend: str = "redis://localhost:6379/0"
    task_time_limit: int = 3600

    output_dir: str = "reports"
    log_level: str = "INFO"
    log_format: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"

    class Config:
        env_file = ".env"
        case_sensitive = False


settings = Settings()
