from app.schemas.experiment import ComparisonReport, ExperimentConfig, VerifySummary
from app.schemas.frame import ModelParams, ScalingFrame

__all__ = ["ComparisonReport", "ExperimentConfig", "VerifySummary", "ModelParams", "ScalingFrame"]
