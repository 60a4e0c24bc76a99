"""
Pydantic models for sketch reports, norm estimates, HOSVD diagnostics,
generator specifications and benchmark plans and records.
"""

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from tensorsketch.models.tensor_models import FactorBasis


class Regime(str, Enum):
    """Entry classes of the sparsification rule."""
    LARGE = "large"
    MODERATE = "moderate"
    SMALL = "small"


class SketchScheme(str, Enum):
    """Sampling schemes."""
    TENSOR_SPARSIFICATION = "tensor_sparsification"
    ZERO_SMALL = "zero_small"


class RegimeCounts(BaseModel):
    """Candidate and retained counts for one regime."""
    candidates: int = Field(0, ge=0)
    retained: int = Field(0, ge=0)

    @model_validator(mode="after")
    def check_retained(self):
        if self.retained > self.candidates:
            raise ValueError("retained count exceeds candidate count")
        return self


class SketchCounts(BaseModel):
    large: RegimeCounts = Field(default_factory=RegimeCounts)
    moderate: RegimeCounts = Field(default_factory=RegimeCounts)
    small: RegimeCounts = Field(default_factory=RegimeCounts)


class SketchReport(BaseModel):
    """Provenance of one sketch."""
    budget_n: int = Field(..., ge=1, description="Sampling budget n")
    seed: int = Field(..., ge=0, description="64-bit seed of the per-entry draws")
    scheme: SketchScheme = SketchScheme.TENSOR_SPARSIFICATION
    counts: SketchCounts
    expected_nnz: float = Field(..., ge=0.0)
    actual_nnz: int = Field(..., ge=0)
    fro_norm_input: float = Field(..., ge=0.0)
    small_probability: float = Field(..., ge=0.0, le=1.0)

    @model_validator(mode="after")
    def check_invariants(self):
        if self.counts.large.retained != self.counts.large.candidates:
            raise ValueError("every large entry must be retained")
        if self.expected_nnz > 2 * self.budget_n * (1 + 1e-12):
            raise ValueError("expected nnz exceeds twice the budget")
        retained = self.counts.large.retained + self.counts.moderate.retained + self.counts.small.retained
        if retained != self.actual_nnz:
            raise ValueError("regime counts disagree with actual nnz")
        return self


class NormEstimate(BaseModel):
    """Lower-bound estimate of a tensor spectral norm with its maximizers."""
    value: float = Field(..., ge=0.0)
    unit_factors: List[List[float]]
    restarts_used: int = Field(..., ge=0)
    iterations_used: int = Field(..., ge=0)
    converged: bool
    seed: int = 0
    history: List[float] = Field(default_factory=list, description="Objective after each sweep")


class HosvdMethod(str, Enum):
    EXACT = "exact"
    DIRECT = "direct"
    PRODUCT = "product"


class HosvdDiagnostics(BaseModel):
    """Diagnostics attached to a subspace estimate."""
    eigengap: float = Field(..., ge=0.0, description="r-th eigengap of the exact matricization")
    gap_degenerate: bool
    product_eigengap: Optional[float] = Field(None, description="r-th eigengap of M M^T")
    sketch_reports: List[SketchReport] = Field(default_factory=list)


@dataclass(frozen=True, eq=False)
class HosvdResult:
    """Estimated mode-j singular subspace."""
    mode: int
    rank: int
    basis: FactorBasis
    method: HosvdMethod
    diagnostics: HosvdDiagnostics


class TuckerSpec(BaseModel):
    """Planted Tucker model with superdiagonal core."""
    dims: List[int] = Field(..., min_length=1)
    ranks: List[int] = Field(..., min_length=1)
    core_decay: float = Field(0.5, gt=0.0, le=1.0)
    noise_sigma: float = Field(0.0, ge=0.0)
    seed: int = Field(0, ge=0, lt=2 ** 64)

    @model_validator(mode="after")
    def check_ranks(self):
        if len(self.dims) != len(self.ranks):
            raise ValueError("dims and ranks must have the same length")
        for d, r in zip(self.dims, self.ranks):
            if d < 1:
                raise ValueError(f"dimension must be >= 1, got {d}")
            if not 1 <= r <= d:
                raise ValueError(f"rank {r} outside [1, {d}]")
        return self


class SweepPlan(BaseModel):
    """Budget sweep configuration, loaded from plan JSON."""
    input: Optional[Path] = Field(None, description="DTEN file with the input tensor")
    generator: Optional[TuckerSpec] = Field(None, description="Generate the input instead")
    budgets: List[int] = Field(..., min_length=1)
    trials: int = Field(1, ge=1)
    seed: int = Field(0, ge=0, lt=2 ** 64)
    modes: List[int] = Field(default_factory=list, description="1-based modes for subspace errors")
    ranks: List[int] = Field(default_factory=list)
    restarts: int = Field(10, ge=1)
    max_iters: int = Field(200, ge=1)
    tol: float = Field(1e-9, gt=0.0)
    output: Optional[Path] = None

    @field_validator("budgets")
    @classmethod
    def validate_budgets(cls, v):
        if any(n < 1 for n in v):
            raise ValueError("budgets must be >= 1")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("budgets must be strictly increasing")
        return v

    @model_validator(mode="after")
    def check_source(self):
        if (self.input is None) == (self.generator is None):
            raise ValueError("exactly one of input and generator is required")
        if len(self.modes) != len(self.ranks):
            raise ValueError("modes and ranks must have the same length")
        if any(m < 1 for m in self.modes) or any(r < 1 for r in self.ranks):
            raise ValueError("modes and ranks are 1-based positive integers")
        return self


class SweepRecord(BaseModel):
    """One (budget, trial) measurement."""
    budget_n: int
    trial_seed: int
    nnz: int = Field(..., ge=0)
    rel_spectral_error: float
    subspace_errors: Dict[int, float] = Field(default_factory=dict)
    converged: bool = True
    wall_time_ms: float = 0.0
    error: Optional[str] = None

    @field_validator("rel_spectral_error")
    @classmethod
    def validate_error(cls, v):
        # NaN marks a failed trial; anything else must be nonnegative
        if v == v and v < 0:
            raise ValueError("relative error must be nonnegative")
        return v


class LoglogFit(BaseModel):
    slope: float
    intercept: float
    r_squared: float
    budgets: List[int]


class ComparisonRow(BaseModel):
    """Direct versus product subspace errors at one budget."""
    budget_n: int
    direct_median: float
    product_median: float
    direct_iqr: Tuple[float, float]
    product_iqr: Tuple[float, float]
    ratio: float = Field(..., description="product_median / direct_median")


class ComparisonTable(BaseModel):
    mode: int
    rank: int
    trials: int
    seed: int
    eigengap: float
    rows: List[ComparisonRow]
