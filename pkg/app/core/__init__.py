"""Core infrastructure modules."""
from app.core.errors import LabError
from app.core.rng import TrialStreams, substream

__all__ = ["LabError", "TrialStreams", "substream"]
