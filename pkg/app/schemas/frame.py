"""Model parameters and the KPZ observation window."""
from typing import List, Literal

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

T_MAX = 1e7


class ModelParams(BaseModel):
    """Intensities of the Poisson initial data (lambda) and of the boundary (rho)."""
    lam: float = Field(..., gt=0, alias="lambda", description="Intensity of the right half")
    rho: float = Field(..., gt=0, description="Intensity of the left half / boundary drift")

    class Config:
        populate_by_name = True
        frozen = True

    @property
    def mode(self) -> Literal["stationary", "step"]:
        return "stationary" if self.lam == self.rho else "step"

    @model_validator(mode="after")
    def check_ordering(self) -> "ModelParams":
        if self.lam < self.rho:
            raise ValueError("step mode requires lambda > rho (or lambda == rho for stationary)")
        return self


class ScalingFrame(BaseModel):
    """Observation window (t, delta, r_1 < ... < r_m)."""
    t: float = Field(..., gt=0, le=T_MAX, description="Macroscopic time")
    delta: float = Field(0.0, ge=0, description="Step parameter; 0 is the stationary law")
    r_list: List[float] = Field(..., min_length=1, description="Strictly increasing rescaled labels")

    class Config:
        frozen = True
        json_schema_extra = {
            "example": {"t": 1000.0, "delta": 0.5, "r_list": [0.0, 1.0]}
        }

    @field_validator("r_list")
    @classmethod
    def check_increasing(cls, value: List[float]) -> List[float]:
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("r_list must be strictly increasing")
        return value

    @model_validator(mode="after")
    def check_rho(self) -> "ScalingFrame":
        if self.rho <= 0:
            raise ValueError("rho = 1 - t^{-1/3} delta must be positive")
        return self

    @property
    def m(self) -> int:
        return len(self.r_list)

    @property
    def rho(self) -> float:
        return 1.0 - self.delta / float(np.cbrt(self.t))
