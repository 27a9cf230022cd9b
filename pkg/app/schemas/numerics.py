"""Value objects of the special-function and Fredholm layers."""
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator


class AiryValue(BaseModel):
    """Ai(x) and Ai'(x)."""
    x: float
    ai: float
    ai_prime: float

    class Config:
        frozen = True


class HermitePoint(BaseModel):
    """alpha_t(r, s) and beta_t(r, s) together with the Hermite data they came from."""
    t: float
    n: int = Field(..., ge=0)
    x: float
    alpha: float
    beta: float
    log_abs_h: float = Field(..., description="log |h_n(x)| of the orthonormal recurrence")
    sign: float

    @model_validator(mode="after")
    def check_sign(self) -> "HermitePoint":
        if self.alpha * self.beta > 0:
            raise ValueError("alpha * beta must be non-positive")
        return self


class KernelPoint(BaseModel):
    """A single kernel entry together with its arguments."""
    r1: float
    s1: float
    r2: float
    s2: float
    value: float


@dataclass(frozen=True)
class StationaryIngredients:
    """f*, g and R of the stationary law, bound to the first label r1."""
    r1: float
    s1: float
    fstar: Callable[[np.ndarray], np.ndarray]
    g: Callable[[np.ndarray], np.ndarray]
    R: float


@dataclass(frozen=True)
class QuadratureRule:
    """Composite Gauss-Legendre rule on [domain[0], domain[1]]."""
    nodes: np.ndarray
    weights: np.ndarray
    domain: Tuple[float, float]

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ValueError("nodes and weights must be vectors of equal length")

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def sqrt_weights(self) -> np.ndarray:
        return np.sqrt(self.weights)

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))

    def mask_above(self, cut: float) -> np.ndarray:
        """Indicator of nodes in [cut, infinity)."""
        return (self.nodes >= cut).astype(float)


@dataclass
class DiscretizedOperator:
    """Dense matrix acting on quadrature nodes.

    The matrix is stored without quadrature weights; `symmetrized` returns
    sqrt(w_i) A_ij sqrt(w_j), which has the determinant and spectrum of the
    Nystrom discretization. block_map maps a block index to its slice of rows.
    """
    matrix: np.ndarray
    rule: QuadratureRule
    block_map: Optional[Dict[int, slice]] = None

    def __post_init__(self):
        rows, cols = self.matrix.shape
        if rows != cols or rows != self.rule.size:
            raise ValueError("operator matrix must be square on the rule's nodes")

    def symmetrized(self) -> np.ndarray:
        sw = self.rule.sqrt_weights
        return sw[:, None] * self.matrix * sw[None, :]

    def weighted(self) -> np.ndarray:
        return self.matrix * self.rule.weights[None, :]


@dataclass
class ChainOperator:
    """The chain operator on L2(R), stored leg by leg.

    Leg k realizes Pbar_{s1} V_{r1 r2} ... Pbar_{s_{k-1}} V_{r_{k-1} r_k} P_{s_k} as a
    weighted matrix from the rule's nodes to the rule's nodes; leg 1 is P_{s1}.
    Applying the chain to a function u means summing leg_k @ (V_{r_k r_1} u), where
    the backward factor is supplied by the caller as values of u at label r_k.
    Legs are stored conjugated by exp(log_gauge) at the nodes; images must be passed
    in the same gauge.
    """
    rule: QuadratureRule
    r_list: List[float]
    s_list: List[float]
    legs: List[np.ndarray]
    log_gauge: Optional[np.ndarray] = None

    @property
    def m(self) -> int:
        return len(self.legs)

    def apply(self, images: List[np.ndarray]) -> np.ndarray:
        """Sum over legs of leg_k @ images[k]; images[k] may be a vector or a matrix."""
        if len(images) != self.m:
            raise ValueError("one image per label is required")
        result = self.legs[0] @ images[0]
        for leg, image in zip(self.legs[1:], images[1:]):
            result = result + leg @ image
        return result

    def matrix(self) -> np.ndarray:
        """Dense matrix of the chain when the wrap-around factor is the identity.

        Holds for m = 1 and whenever every leg beyond the first vanishes.
        """
        if self.m > 1 and any(np.any(leg) for leg in self.legs[1:]):
            raise ValueError("the chain only has a dense matrix on the range of the kernel")
        return self.legs[0].copy()


@dataclass(frozen=True)
class DetResult:
    """Fredholm determinant value, node count and optional self-convergence estimate."""
    value: float
    order: int
    richardson_estimate: Optional[float] = None

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise ValueError("determinant value must be finite")
        if self.richardson_estimate is not None and self.richardson_estimate < 0:
            raise ValueError("error estimate must be non-negative")
