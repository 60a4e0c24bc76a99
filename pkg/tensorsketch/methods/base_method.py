"""
Base class for named subspace estimation methods.
Provides the interface the CLI and the workflows dispatch through.
"""

import logging
import time
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional, Tuple

from tensorsketch.core.exceptions import BudgetError, EstimatorError
from tensorsketch.models.report_models import HosvdResult
from tensorsketch.models.tensor_models import DenseTensor


class BaseHosvdMethod(ABC):
    """
    Base class for all mode-j subspace estimators.
    """

    requires_budget: bool = False

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    @property
    @abstractmethod
    def name(self) -> str:
        """Method name identifier."""
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        """One-line description for help output."""
        pass

    @property
    @abstractmethod
    def parameters(self) -> Dict[str, Any]:
        """Parameter schema."""
        pass

    @abstractmethod
    def estimate(self, tensor: DenseTensor, mode: int, rank: int,
                 budget: Optional[int] = None, seed: int = 0) -> HosvdResult:
        """Estimate the top-``rank`` subspace of the mode-``mode`` unfolding."""
        pass

    def _require_budget(self, budget: Optional[int]) -> int:
        if budget is None:
            raise BudgetError(f"method {self.name} needs a sampling budget")
        return budget

    def run_timed(self, tensor: DenseTensor, mode: int, rank: int,
                  budget: Optional[int] = None, seed: int = 0) -> Tuple[HosvdResult, float]:
        """Run :meth:`estimate` and return the result with its wall time in ms."""
        start_time = time.perf_counter()
        try:
            result = self.estimate(tensor, mode, rank, budget=budget, seed=seed)
        except EstimatorError:
            raise
        except Exception as e:
            self.logger.error(f"Method {self.name} failed: {str(e)}")
            raise

        elapsed_ms = (time.perf_counter() - start_time) * 1000.0
        if result.diagnostics.gap_degenerate:
            self.logger.warning(f"Method {self.name}: eigengap at rank {rank} of mode {mode} is degenerate")
        self.logger.debug(f"Method {self.name} finished mode {mode} in {elapsed_ms:.1f} ms")
        return result, elapsed_ms
