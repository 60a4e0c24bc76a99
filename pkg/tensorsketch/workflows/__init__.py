"""Budget sweeps, estimator comparisons and scaling-law fits."""

from .analysis import (
    fit_high_accuracy_slope,
    fit_loglog_slope,
    median_by_budget,
    select_high_accuracy_budgets,
)
from .budget_sweep import BudgetSweepEngine, load_plan, run_budget_sweep
from .comparison import ComparisonEngine, bootstrap_median_iqr, compare_direct_vs_product
from .executor import gather_in_threads
