"""
Example usage script for fibnormal
"""

import os

from fibnormal import FibNormalLab
from fibnormal.analysis import counterexample_stats, sigma_range_contains, trailing_digit_distribution
from fibnormal.config import ConfigManager, RunConfig
from fibnormal.output import render_text


def run_example():
    # Create output directory
    output_dir = "./example_output"
    os.makedirs(output_dir, exist_ok=True)

    lab = FibNormalLab(ConfigManager(), verbose=True)

    # Single digits and 2-blocks of the first 1000 terms, split by position
    run = RunConfig(command="analyze", base=10, N=1000, k_max=2, positional=True)
    report = lab.analyze(run)
    print(render_text(report))

    # How the maximum deviation shrinks with N, and the power law it follows
    evolution = lab.evolution(RunConfig(command="evolution", base=2), [10, 100, 1000, 10000])
    print(render_text(evolution))

    # Trailing digits repeat with the Pisano period
    print("\n===== TRAILING DIGITS (base 10) =====\n")
    for digit, fraction in enumerate(trailing_digit_distribution(10)):
        print(f"{digit}: {fraction}")

    # Row-uniform does not mean normal
    stats = counterexample_stats(1000)
    print("\n===== RAGGED COUNTEREXAMPLE (N=1000) =====\n")
    print(f"max single-digit deviation: {stats.max_single_deviation:.2e}")
    print(f"max diagonal 2-block deviation: {stats.max_diagonal_deviation:.2e}")
    print(f"off-diagonal 2-blocks: {stats.off_diagonal_count} (bound {stats.off_diagonal_bound})")

    # F_6 = 8 = σ(7), F_5 = 5 has no σ-preimage
    for value in (8, 5):
        found = sigma_range_contains(value)
        print(f"σ-range contains {value}: {found.in_range} (witness {found.witness})")

    with open(os.path.join(output_dir, "analyze.txt"), "w", encoding="utf-8") as f:
        f.write(render_text(report))
    print(f"\nReport saved to {output_dir}/analyze.txt")


if __name__ == "__main__":
    run_example()
