"""Pydantic schemas for experiment configuration, reports and API bodies."""
import hashlib
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from app.config import settings
from app.schemas.frame import ScalingFrame
from app.schemas.simulation import SimulationConfig

LIST_FIELDS = ("r_list", "s_grid")


class ExperimentConfig(BaseModel):
    """Per-run configuration: frame, Monte Carlo size, quadrature and output."""
    mode: Literal["simulate", "limit-cdf", "compare", "verify"] = "compare"
    t: float = Field(1000.0, gt=0, description="Macroscopic time")
    delta: float = Field(0.0, ge=0, description="Step parameter; 0 selects the stationary law")
    r_list: List[float] = Field(default_factory=lambda: [0.0], min_length=1)
    s_grid: List[float] = Field(default_factory=lambda: list(settings.default_s_grid), min_length=1)
    trials: int = Field(2000, ge=1)
    time_steps: Optional[int] = Field(None, ge=1, description="J; derived from t when omitted")
    nodes: int = Field(settings.quadrature_nodes, ge=8, description="Nodes per block")
    window: float = Field(settings.core_window, gt=0, description="S_max - cut")
    seed: int = Field(settings.seed, ge=0, lt=2 ** 64)
    output: Optional[str] = None
    format: Literal["csv", "json"] = "csv"
    workers: int = Field(settings.workers, ge=1)
    batch_size: int = Field(settings.batch_size, ge=1)

    class Config:
        json_schema_extra = {
            "example": {
                "mode": "compare",
                "t": 1000.0,
                "delta": 0.5,
                "r_list": [0.0],
                "trials": 2000,
                "seed": 7,
            }
        }

    @field_validator("r_list", "s_grid", mode="before")
    @classmethod
    def split_lists(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [float(item) for item in value.split(",") if item.strip()]
        return value

    @model_validator(mode="after")
    def check_frame(self) -> "ExperimentConfig":
        self.frame
        return self

    @property
    def frame(self) -> ScalingFrame:
        return ScalingFrame(t=self.t, delta=self.delta, r_list=self.r_list)

    @property
    def simulation(self) -> SimulationConfig:
        return SimulationConfig(
            time_steps=self.time_steps,
            min_time_steps=settings.min_time_steps,
            steps_per_scale=settings.steps_per_scale,
            batch_size=self.batch_size,
        )

    def config_hash(self) -> str:
        """sha256 of the fields that determine the result."""
        payload = self.model_dump_json(exclude={"output", "format", "workers", "mode"})
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class CdfRow(BaseModel):
    """One line of the comparison table."""
    s: float
    F_empirical: float
    F_formula: float
    abs_diff: float


class ComparisonReport(BaseModel):
    """Empirical against formula distribution on an s-grid."""
    ks: float = Field(..., ge=0, le=1)
    n_samples: int = Field(..., ge=0)
    rows: List[CdfRow] = Field(default_factory=list)
    tolerance: Optional[float] = None
    runtime: float = 0.0
    seed: int
    config_hash: str = ""
    law: Literal["finite-step", "stationary"] = "stationary"
    r_list: List[float] = Field(default_factory=list)
    metadata: Dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_ks(self) -> "ComparisonReport":
        if self.rows and self.ks != max(row.abs_diff for row in self.rows):
            raise ValueError("ks must equal the largest abs_diff of the table")
        return self

    @property
    def passed(self) -> bool:
        return self.tolerance is None or self.ks <= self.tolerance


class CheckResult(BaseModel):
    """Outcome of one verification check."""
    name: str
    measured: float
    allowed: float
    passed: bool
    detail: str = ""


class VerifySummary(BaseModel):
    """All verification checks of one run."""
    checks: List[CheckResult] = Field(default_factory=list)
    seed: int
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]


class LimitCdfRequest(BaseModel):
    """Request schema for the limit distribution endpoint."""
    r_list: List[float] = Field(..., min_length=1)
    s_list: List[float] = Field(..., min_length=1)
    delta: float = Field(0.0, ge=0)
    nodes: Optional[int] = Field(None, ge=8)

    class Config:
        json_schema_extra = {"example": {"r_list": [0.0], "s_list": [0.0], "delta": 0.5}}


class LimitCdfResponse(BaseModel):
    value: float
    law: Literal["finite-step", "stationary"]


class IncrementDensityRequest(BaseModel):
    r2: float = Field(..., gt=0, le=3)
    sigma_list: List[float] = Field(..., min_length=1)


class IncrementDensityResponse(BaseModel):
    sigma: List[float]
    density: List[float]
    gaussian: List[float]


class TaskSubmitted(BaseModel):
    task_id: str
    status: str = "queued"


class TaskStatus(BaseModel):
    task_id: str
    state: str
    report: Optional[Dict[str, Any]] = None
    error: Optional[str] = None
