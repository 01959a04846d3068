"""
Command orchestration and the built-in acceptance suite
"""

from fibnormal.core.lab import FibNormalLab, digit_rows, evolution_row, load_points
from fibnormal.core.golden import run_golden

__all__ = ["FibNormalLab", "digit_rows", "evolution_row", "load_points", "run_golden"]
