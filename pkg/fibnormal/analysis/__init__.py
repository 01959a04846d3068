"""
Statistics, per-term diagnostics and number-theoretic constructions
"""

from fibnormal.analysis.stats import (
    chi_squared,
    chi_squared_pvalue,
    good_serial,
    z_scores,
    bonferroni_z,
    loglog_regression,
    max_deviation,
    block_report,
    category_shares,
    top_blocks,
)
from fibnormal.analysis.diagnostics import (
    term_delta,
    per_term_deltas,
    census,
    iid_max_dev_baseline,
    baseline_ratio_summary,
    benford_freq,
    trailing_digit_distribution,
    leading_digit_empirical,
    DEFAULT_EPSILONS,
)
from fibnormal.analysis.constructions import (
    counterexample_stats,
    row_sequence,
    sigma_range_contains,
    fib_sigma_census,
    reachability_phi_lambda,
)

__all__ = [
    "chi_squared", "chi_squared_pvalue", "good_serial", "z_scores", "bonferroni_z",
    "loglog_regression", "max_deviation", "block_report", "category_shares", "top_blocks",
    "term_delta", "per_term_deltas", "census", "iid_max_dev_baseline", "baseline_ratio_summary",
    "benford_freq", "trailing_digit_distribution", "leading_digit_empirical", "DEFAULT_EPSILONS",
    "counterexample_stats", "row_sequence", "sigma_range_contains", "fib_sigma_census",
    "reachability_phi_lambda",
]
