"""
Exact, direct and product subspace estimators.
"""

from typing import Any, Dict, Optional

from tensorsketch.hosvd.estimators import hosvd_direct, hosvd_exact, hosvd_product
from tensorsketch.models.report_models import HosvdResult
from tensorsketch.models.tensor_models import DenseTensor

from .base_method import BaseHosvdMethod


_MODE_RANK_SCHEMA = {
    "mode": {"type": "integer", "description": "1-based mode j", "minimum": 1},
    "rank": {"type": "integer", "description": "Number of singular vectors r_j", "minimum": 1},
}

_SKETCH_SCHEMA = {
    **_MODE_RANK_SCHEMA,
    "budget": {"type": "integer", "description": "Sampling budget n", "minimum": 1},
    "seed": {"type": "integer", "description": "64-bit seed", "minimum": 0, "default": 0},
}


class ExactMethod(BaseHosvdMethod):
    """Exact HOSVD of the unfolding."""

    @property
    def name(self) -> str:
        return "exact"

    @property
    def description(self) -> str:
        return "Top singular vectors of the exact mode-j unfolding."

    @property
    def parameters(self) -> Dict[str, Any]:
        return dict(_MODE_RANK_SCHEMA)

    def estimate(self, tensor: DenseTensor, mode: int, rank: int,
                 budget: Optional[int] = None, seed: int = 0) -> HosvdResult:
        return hosvd_exact(tensor, mode, rank)


class DirectSketchMethod(BaseHosvdMethod):
    """SVD of the unfolding of one sketch."""

    requires_budget = True

    @property
    def name(self) -> str:
        return "direct"

    @property
    def description(self) -> str:
        return "Top singular vectors of the unfolding of a single sparse sketch."

    @property
    def parameters(self) -> Dict[str, Any]:
        return dict(_SKETCH_SCHEMA)

    def estimate(self, tensor: DenseTensor, mode: int, rank: int,
                 budget: Optional[int] = None, seed: int = 0) -> HosvdResult:
        return hosvd_direct(tensor, self._require_budget(budget), mode, rank, seed)


class ProductSketchMethod(BaseHosvdMethod):
    """Left singular vectors of the product of two independent sketched unfoldings."""

    requires_budget = True

    @property
    def name(self) -> str:
        return "product"

    @property
    def description(self) -> str:
        return "Top left singular vectors of M_j(S1) M_j(S2)^T for two independent sketches."

    @property
    def parameters(self) -> Dict[str, Any]:
        return dict(_SKETCH_SCHEMA)

    def estimate(self, tensor: DenseTensor, mode: int, rank: int,
                 budget: Optional[int] = None, seed: int = 0) -> HosvdResult:
        return hosvd_product(tensor, self._require_budget(budget), mode, rank, seed)
