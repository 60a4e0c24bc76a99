"""
Scaling-law analysis of sweep records.
"""

import logging
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from tensorsketch.core.exceptions import FitError
from tensorsketch.models.report_models import LoglogFit, SweepRecord
from tensorsketch.spectral.linalg import high_accuracy_threshold


logger = logging.getLogger(__name__)

_SUBSPACE_PREFIX = "subspace_error_mode"


def _field_value(record: SweepRecord, field: str) -> float:
    if field.startswith(_SUBSPACE_PREFIX):
        try:
            j = int(field[len(_SUBSPACE_PREFIX):])
        except ValueError:
            raise FitError(f"unknown record field: {field}")
        return float(record.subspace_errors.get(j, float("nan")))
    if field not in ("rel_spectral_error", "nnz", "wall_time_ms"):
        raise FitError(f"unknown record field: {field}")
    return float(getattr(record, field))


def median_by_budget(records: Iterable[SweepRecord], field: str = "rel_spectral_error") -> Dict[int, float]:
    """Median of ``field`` per budget, ignoring failed (NaN) trials, in increasing budget order."""
    grouped: Dict[int, List[float]] = {}
    for record in records:
        grouped.setdefault(record.budget_n, []).append(_field_value(record, field))

    medians = {}
    for budget in sorted(grouped):
        values = np.asarray(grouped[budget])
        values = values[~np.isnan(values)]
        medians[budget] = float(np.median(values)) if values.size else float("nan")
    return medians


def fit_loglog_slope(records: Iterable[SweepRecord], field: str = "rel_spectral_error",
                     budgets: Optional[Sequence[int]] = None) -> LoglogFit:
    """
    Least-squares fit of log(median field) against log(n).

    Args:
        records: Sweep records
        field: Record field to fit
        budgets: Restrict the fit to these budgets

    Raises:
        FitError: fewer than 3 budgets, or zero, non-finite or constant medians
    """
    medians = median_by_budget(records, field)
    if budgets is not None:
        wanted = set(budgets)
        medians = {n: m for n, m in medians.items() if n in wanted}
    if len(medians) < 3:
        raise FitError(f"need at least 3 distinct budgets, got {len(medians)}")

    n = np.array(list(medians), dtype=np.float64)
    y = np.array(list(medians.values()), dtype=np.float64)
    if not np.all(np.isfinite(y)) or np.any(y <= 0):
        raise FitError(f"medians of {field} must be finite and positive", details={"medians": medians})
    if np.all(y == y[0]):
        raise FitError(f"medians of {field} are constant", details={"medians": medians})

    log_n, log_y = np.log(n), np.log(y)
    slope, intercept = np.polyfit(log_n, log_y, 1)
    residual = log_y - (slope * log_n + intercept)
    total = np.sum((log_y - log_y.mean()) ** 2)
    r_squared = 1.0 - float(np.sum(residual ** 2)) / float(total)

    logger.debug(f"Log-log fit of {field} over {len(n)} budgets: slope {slope:.4f}, r^2 {r_squared:.4f}")
    return LoglogFit(slope=float(slope), intercept=float(intercept), r_squared=r_squared,
                     budgets=[int(b) for b in medians])


def select_high_accuracy_budgets(records: Iterable[SweepRecord], shape, sr: float,
                                 field: str = "rel_spectral_error") -> List[int]:
    """
    Budgets whose median error lies below sr * d_max^(1 - k/2).

    Falls back to the top half of the budget range when fewer than 3 budgets qualify.
    """
    medians = median_by_budget(records, field)
    threshold = high_accuracy_threshold(shape, sr)
    selected = [n for n, m in medians.items() if m < threshold]
    if len(selected) < 3:
        logger.info(f"Only {len(selected)} budgets below {threshold:.4g}; using the top half of the range")
        budgets = list(medians)
        selected = budgets[len(budgets) // 2:]
    return selected


def fit_high_accuracy_slope(records: Sequence[SweepRecord], shape, sr: float,
                            field: str = "rel_spectral_error") -> LoglogFit:
    """Fit the log-log slope over the high-accuracy budgets only."""
    records = list(records)
    budgets = select_high_accuracy_budgets(records, shape, sr, field)
    return fit_loglog_slope(records, field, budgets=budgets)
