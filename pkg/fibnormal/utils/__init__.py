"""
Utility functions for fibnormal
"""

from fibnormal.utils.progress import ProgressTracker, format_time, progress_bar, progress_context

__all__ = ["ProgressTracker", "format_time", "progress_bar", "progress_context"]
