from app.services.experiment_service import ExperimentService
from app.services.verification_service import VerificationService

__all__ = ["ExperimentService", "VerificationService"]
