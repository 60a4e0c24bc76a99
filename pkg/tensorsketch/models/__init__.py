"""Tensor containers and pydantic report models."""

from .tensor_models import Shape, DenseTensor, SparseTensor, Matrix, FactorBasis
from .report_models import (
    Regime,
    SketchScheme,
    RegimeCounts,
    SketchCounts,
    SketchReport,
    NormEstimate,
    HosvdMethod,
    HosvdDiagnostics,
    HosvdResult,
    TuckerSpec,
    SweepPlan,
    SweepRecord,
    LoglogFit,
    ComparisonRow,
    ComparisonTable,
)
