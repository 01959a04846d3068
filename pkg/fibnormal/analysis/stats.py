"""
Uniformity statistics for digit and block counts
"""

import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats as sps

from fibnormal.data.models import CATEGORIES, RegressionFit, StatReport, block_label
from fibnormal.engine.counters import CounterBank
from fibnormal.errors import InvalidInputError

FAMILY_ALPHA = 0.05


def _as_counts(counts) -> np.ndarray:
    arr = np.asarray(counts)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInputError("counts must be a non-empty one-dimensional array")
    return arr


def _total(arr: np.ndarray, total: Optional[int]) -> int:
    observed = int(arr.sum(dtype=np.uint64)) if arr.dtype.kind == "u" else int(arr.sum())
    if total is None:
        total = observed
    elif int(total) != observed:
        raise InvalidInputError(f"total {total} differs from the sum of the counts {observed}")
    if total <= 0:
        raise InvalidInputError("counts are empty: the total must be positive")
    return int(total)


def chi_squared(counts, total: Optional[int] = None) -> Tuple[float, int]:
    """
    Pearson's statistic against the uniform distribution over the cells

    Args:
        counts: Observed count per cell
        total: Sum of the counts (computed when omitted)

    Returns:
        (statistic, degrees of freedom = cells - 1)
    """
    arr = _as_counts(counts)
    total = _total(arr, total)
    expected = total / arr.size
    diff = arr.astype(np.float64) - expected
    return float(np.dot(diff, diff) / expected), arr.size - 1


def chi_squared_pvalue(x: float, df: int) -> float:
    """Upper tail P(χ²_df >= x)"""
    if df < 1:
        raise InvalidInputError(f"degrees of freedom must be at least 1, got {df}")
    if x < 0:
        raise InvalidInputError(f"a chi-squared statistic is non-negative, got {x}")
    if x == 0:
        return 1.0
    return float(sps.chi2.sf(x, df))


def good_serial(chi2_k: float, chi2_km1: float, base: int, k: int) -> Tuple[float, int]:
    """
    Good's serial statistic Δχ²_k = χ²(k) - χ²(k-1) on one digit stream,
    asymptotically χ² with base^k - base^(k-1) degrees of freedom.
    """
    if k < 2:
        raise InvalidInputError(f"the serial statistic needs block length k >= 2, got {k}")
    return chi2_k - chi2_km1, base ** k - base ** (k - 1)


def z_scores(counts, total: Optional[int] = None, base: Optional[int] = None) -> np.ndarray:
    """
    Standardized deviations (C - total·p) / sqrt(total·p·(1-p)), p = 1/cells.

    A single-digit table has base cells and a k-block table base^k; when
    `base` is given the cell count must be one of its powers.
    """
    arr = _as_counts(counts)
    total = _total(arr, total)
    if base is not None:
        cells = arr.size
        while cells % base == 0 and cells > 1:
            cells //= base
        if cells != 1:
            raise InvalidInputError(f"{arr.size} cells is not a power of base {base}")
    p = 1.0 / arr.size
    return (arr.astype(np.float64) - total * p) / math.sqrt(total * p * (1 - p))


def bonferroni_z(m_tests: int, alpha: float) -> float:
    """Two-sided critical |z| for m simultaneous tests at family-wise level alpha"""
    if m_tests < 1:
        raise InvalidInputError(f"m_tests must be at least 1, got {m_tests}")
    if not 0 < alpha < 1:
        raise InvalidInputError(f"alpha must lie in (0, 1), got {alpha}")
    return float(sps.norm.isf(alpha / (2 * m_tests)))


def loglog_regression(points: Sequence[Tuple[float, float]]) -> RegressionFit:
    """
    Least-squares fit of log(dev) on log(D)

    Returns:
        RegressionFit with coefficient exp(intercept), exponent slope and R²
    """
    points = list(points)
    if len(points) < 3:
        raise InvalidInputError(f"a log-log fit needs at least 3 points, got {len(points)}")
    D = np.array([p[0] for p in points], dtype=np.float64)
    dev = np.array([p[1] for p in points], dtype=np.float64)
    if np.any(D <= 0) or np.any(dev <= 0):
        raise InvalidInputError("log-log regression needs strictly positive D and deviations")
    fit = sps.linregress(np.log(D), np.log(dev))
    return RegressionFit(
        coefficient=float(math.exp(fit.intercept)),
        exponent=float(fit.slope),
        r_squared=float(fit.rvalue ** 2),
        points=len(points),
    )


def max_deviation(counts, total: Optional[int] = None) -> Tuple[float, int]:
    """
    max |C/total - 1/cells| and the lowest cell index attaining it.

    Ties are found on the exact integers |cells·C - total| whenever they fit
    in 64 bits, so the lowest code (the lexicographically smallest label) wins.
    """
    arr = _as_counts(counts)
    total = _total(arr, total)
    cells = arr.size
    if int(arr.max()) * cells < 2 ** 62 and total * cells < 2 ** 62:
        scaled = np.abs(arr.astype(np.int64) * cells - total)
        index = int(np.argmax(scaled))
        return int(scaled[index]) / (cells * total), index
    deviations = np.abs(arr.astype(np.float64) / total - 1.0 / cells)
    index = int(np.argmax(deviations))
    return float(deviations[index]), index


def mean_abs_deviation(counts, total: Optional[int] = None) -> float:
    arr = _as_counts(counts)
    total = _total(arr, total)
    return float(np.mean(np.abs(arr.astype(np.float64) / total - 1.0 / arr.size)))


def block_report(bank: CounterBank, k: int, category: Optional[str] = None) -> StatReport:
    """
    Naive and serial statistics for the k-block counts of a bank

    Args:
        bank: Counts of the stream
        k: Block length, 1..bank.k_max
        category: Restrict to one positional category; the serial statistic then
            compares against the same category's (k-1)-blocks
    """
    if not 1 <= k <= bank.k_max:
        raise InvalidInputError(f"k must lie in 1..{bank.k_max}, got {k}")
    if category is None:
        counts = bank.blocks[k - 1]
    elif category in CATEGORIES:
        counts = bank.category_counts(k, category)
    else:
        raise InvalidInputError(f"unknown category {category!r}; expected one of {CATEGORIES}")

    total = int(counts.sum(dtype=np.uint64))
    chi2, df = chi_squared(counts, total)
    p_naive = chi_squared_pvalue(chi2, df)

    delta = good_df = p_good = None
    if k >= 2:
        previous = bank.blocks[k - 2] if category is None else bank.category_counts(k - 1, category)
        # an empty (k-1)-table contributes nothing; no 1-block is ever a boundary block
        chi2_prev = chi_squared(previous)[0] if previous.any() else 0.0
        delta, good_df = good_serial(chi2, chi2_prev, bank.base, k)
        p_good = chi_squared_pvalue(max(delta, 0.0), good_df)

    dev, index = max_deviation(counts, total)
    z = z_scores(counts, total)
    return StatReport(
        base=bank.base,
        k=k,
        D=bank.D,
        total_blocks=total,
        naive_chi2=chi2,
        naive_df=df,
        p_naive=p_naive,
        good_delta_chi2=delta,
        good_df=good_df,
        p_good=p_good,
        max_abs_deviation=dev,
        argmax_block=block_label(index, k, bank.base),
        mean_abs_deviation=mean_abs_deviation(counts, total),
        max_abs_z=float(np.max(np.abs(z))),
        bonferroni_critical=bonferroni_z(counts.size, FAMILY_ALPHA),
        category=category,
    )


def category_shares(bank: CounterBank, k: int) -> Dict[str, float]:
    """Fraction of all k-blocks in each positional category"""
    total = bank.block_total(k)
    if total == 0:
        return {cat: 0.0 for cat in CATEGORIES}
    return {cat: int(bank.category_counts(k, cat).sum(dtype=np.uint64)) / total for cat in CATEGORIES}


def top_blocks(bank: CounterBank, k: int, category: str, limit: int = 5) -> List[Dict[str, float]]:
    """
    The most over-represented k-blocks of a category, relative to the uniform
    share of that category's total. Ties go to the smaller label.
    """
    counts = bank.category_counts(k, category)
    total = int(counts.sum(dtype=np.uint64))
    if total == 0:
        return []
    expected = total / counts.size
    # stable sort on -count keeps ascending codes among equal counts
    order = np.argsort(-counts.astype(np.float64), kind="stable")[:limit]
    return [
        {"block": block_label(int(i), k, bank.base), "count": int(counts[i]),
         "ratio": float(counts[i]) / expected}
        for i in order
    ]
