"""
Orchestration of the fibnormal commands
"""

import json
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from fibnormal.analysis import constructions, diagnostics, stats
from fibnormal.checkpoint import CheckpointPolicy
from fibnormal.config.manager import ConfigManager, RunConfig
from fibnormal.data.models import CATEGORIES, EvolutionRow, block_label
from fibnormal.engine.counters import CounterBank
from fibnormal.engine.stream import stream_analyze
from fibnormal.errors import InvalidInputError
from fibnormal.output.reports import Report
from fibnormal.sequence.fibonacci import criterion_conditions, pisano_period
from fibnormal.utils.progress import ProgressTracker, format_rate, progress_context

logger = logging.getLogger(__name__)


def digit_rows(bank: CounterBank) -> List[dict]:
    """Per-digit table: count, frequency, signed deviation and z-score"""
    counts = bank.single
    D = bank.D
    z = stats.z_scores(counts, D, bank.base)
    rows = []
    for d in range(bank.base):
        frequency = int(counts[d]) / D
        rows.append({
            "digit": block_label(d, 1, bank.base),
            "count": int(counts[d]),
            "frequency": frequency,
            "deviation": frequency - 1.0 / bank.base,
            "z_score": float(z[d]),
        })
    return rows


def evolution_row(N: int, bank: CounterBank) -> EvolutionRow:
    chi2, df = stats.chi_squared(bank.single, bank.D)
    dev, _ = stats.max_deviation(bank.single, bank.D)
    return EvolutionRow(N=N, D=bank.D, max_abs_deviation=dev, chi2=chi2,
                        p_value=stats.chi_squared_pvalue(chi2, df))


def load_points(path: str) -> List[Tuple[float, float]]:
    """
    (D, dev) pairs from a JSON list of pairs or objects, or from text with
    one "D,dev" (or whitespace separated) pair per line; '#' starts a comment
    """
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    stripped = text.lstrip()
    if stripped.startswith("[") or stripped.startswith("{"):
        data = json.loads(text)
        if isinstance(data, dict):
            data = data.get("points", [])
        points = []
        for item in data:
            if isinstance(item, dict):
                points.append((float(item["D"]), float(item.get("dev", item.get("max_abs_deviation")))))
            else:
                points.append((float(item[0]), float(item[1])))
        return points
    points = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise InvalidInputError(f"cannot read a (D, dev) pair from {line!r} in {path}")
        try:
            points.append((float(parts[0]), float(parts[1])))
        except ValueError:
            # a header row
            continue
    return points


class FibNormalLab:
    """Runs each analysis and packages its results as a Report"""

    def __init__(self, config: Optional[ConfigManager] = None, verbose: bool = True):
        """
        Args:
            config: Configuration (defaults when None)
            verbose: Whether progress lines go to standard error
        """
        self.config = config or ConfigManager()
        self.verbose = verbose

    def _tracker(self, total_terms: int, description: str) -> ProgressTracker:
        return ProgressTracker(total_terms, description=description, verbose=self.verbose)

    def analyze(self, run: RunConfig) -> Report:
        """Digit table, per-k block statistics and optionally the positional split"""
        run.validate()
        policy = None
        if run.checkpoint_path:
            policy = CheckpointPolicy(run.checkpoint_path, run.checkpoint_every, run.resume)
        tracker = self._tracker(run.N, f"analyze base {run.base}")
        bank = stream_analyze(run.base, run.N, run.k_max, run.positional, policy,
                              partitions=run.partitions, chunk_digits=run.chunk_digits,
                              progress=tracker)
        tracker.finish()
        logger.info("analyzed %d terms (%d digits) in base %d at %s", bank.terms_consumed, bank.D,
                    run.base, format_rate(tracker.throughput()))

        report = Report("analyze", summary={
            "base": run.base,
            "N": run.N,
            "D": bank.D,
            "k_max": run.k_max,
            "positional": run.positional,
        })
        report.add_table("digits", digit_rows(bank))
        block_reports = [stats.block_report(bank, k) for k in range(1, run.k_max + 1) if bank.D >= k]
        report.add_table("blocks", [r.to_dict() for r in block_reports])
        if run.positional:
            report.add_table("positional", self._positional_rows(bank))
            if run.k_max >= 2:
                report.add_table("top_boundary_blocks", stats.top_blocks(bank, 2, "boundary"))
        return report

    def _positional_rows(self, bank: CounterBank) -> List[dict]:
        rows = []
        for k in range(1, bank.k_max + 1):
            shares = stats.category_shares(bank, k)
            for category in CATEGORIES:
                total = int(bank.category_counts(k, category).sum(dtype=np.uint64))
                row = {"k": k, "category": category, "count": total, "share": shares[category]}
                if total:
                    r = stats.block_report(bank, k, category)
                    row.update({"chi2": r.naive_chi2, "df": r.naive_df, "p": r.p_naive,
                                "good_delta_chi2": r.good_delta_chi2, "good_df": r.good_df,
                                "p_good": r.p_good,
                                "max_abs_deviation": r.max_abs_deviation, "argmax_block": r.argmax_block})
                rows.append(row)
        return rows

    def evolution(self, run: RunConfig, points: Sequence[int]) -> Report:
        """Deviation, χ² and p at every N in points from a single pass, plus the log-log fit"""
        points = sorted(set(int(p) for p in points))
        if not points or points[0] < 1:
            raise InvalidInputError("evolution needs at least one positive term count")
        run.N = points[-1]
        run.k_max = 1
        run.validate()
        rows: List[EvolutionRow] = []
        tracker = self._tracker(run.N, f"evolution base {run.base}")
        stream_analyze(run.base, run.N, 1, False, snapshots=points, chunk_digits=run.chunk_digits,
                       on_snapshot=lambda n, bank: rows.append(evolution_row(n, bank)),
                       progress=tracker)
        tracker.finish()
        report = Report("evolution", summary={"base": run.base, "points": len(rows)})
        report.add_table("evolution", [r.to_dict() for r in rows])
        if len(rows) >= 3:
            fit = stats.loglog_regression([(r.D, r.max_abs_deviation) for r in rows])
            report.summary.update(fit.to_dict())
        return report

    def per_term(self, run: RunConfig, k: int = 1) -> Report:
        """Census of terms whose own k-block frequencies deviate by more than ε"""
        run.validate()
        with progress_context(f"Scanning {run.N} terms in base {run.base}", self.verbose):
            deltas = diagnostics.per_term_deltas(run.base, run.N, k, run.partitions)
        rows = diagnostics.census(deltas, run.epsilons, run.min_length)
        qualifying = sum(1 for d in deltas if d.digit_length >= run.min_length)
        report = Report("per-term", summary={
            "base": run.base, "N": run.N, "k": k, "min_length": run.min_length, "qualifying_terms": qualifying,
        })
        report.add_table("census", [r.to_dict() for r in rows])
        if k == 1:
            ratio = diagnostics.baseline_ratio_summary(
                deltas, run.base,
                min_length=self.config.get("per_term", "ratio_min_length", diagnostics.RATIO_MIN_LENGTH),
                trials=self.config.get("baselines", "monte_carlo_trials", diagnostics.MONTE_CARLO_TRIALS),
                seed=self.config.get("baselines", "seed", diagnostics.MONTE_CARLO_SEED))
            report.add_table("baseline_ratio", [ratio.to_dict()])
        return report

    def regress(self, points: Sequence[Tuple[float, float]]) -> Report:
        fit = stats.loglog_regression(points)
        report = Report("regress", summary=fit.to_dict())
        report.add_table("points", [{"D": D, "dev": dev, "predicted": fit.predict(D)} for D, dev in points])
        return report

    def counterexample(self, N: int) -> Report:
        """Row-uniform but column-concatenation non-normal ragged array"""
        result = constructions.counterexample_stats(N)
        summary = result.to_dict()
        singles = summary.pop("single_freqs")
        diagonal = summary.pop("diagonal_masses")
        report = Report("counterexample", summary=summary)
        report.add_table("digits", [{"digit": d, "frequency": singles[d], "diagonal_mass": diagonal[d]}
                                    for d in range(10)])
        return report

    def sigma_census(self, max_index: int, value_cap: int) -> Report:
        rows = constructions.fib_sigma_census(max_index, value_cap)
        report = Report("sigma-census", summary={
            "max_index": max_index,
            "value_cap": value_cap,
            "hits": sum(r.witness.in_range for r in rows),
            "exceptions": sum(r.exception for r in rows),
        })
        report.add_table("census", [r.to_dict() for r in rows])
        # F_6 | F_6k, so indices 6k are where hits are expected; list the ones that miss
        report.add_table("index_multiple_of_6_misses", [
            {"n": r.n, "F_n": r.fib} for r in rows
            if r.index_multiple_of_6 and r.n > 6 and not r.witness.in_range
        ])
        return report

    def baselines(self, base: int, N: int) -> Report:
        """Benford leading digits, Pisano trailing digits and the iid deviation scale"""
        trials = self.config.get("baselines", "monte_carlo_trials", diagnostics.MONTE_CARLO_TRIALS)
        seed = self.config.get("baselines", "seed", diagnostics.MONTE_CARLO_SEED)
        report = Report("baselines", summary={"base": base, "N": N, "pisano_period": pisano_period(base)})
        report.add_table("leading", diagnostics.benford_table(N, base))
        report.add_table("trailing", diagnostics.trailing_table(base))
        report.add_table("iid_max_deviation", [
            {"K": K, "baseline": diagnostics.iid_max_dev_baseline(K, base, trials=trials, seed=seed)}
            for K in (100, 1000, 10000, 100000)
        ])
        return report

    def criterion(self, base: int, m: int) -> Report:
        check = criterion_conditions(m, base)
        return Report("criterion", summary=check.to_dict())
