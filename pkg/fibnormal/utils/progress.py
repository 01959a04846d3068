"""
Progress and throughput reporting for long streaming runs
"""

import sys
import time
from contextlib import contextmanager
from typing import Optional, TextIO


class ProgressTracker:
    """Reports terms, digits and digits-per-second of a streaming run on stderr"""

    def __init__(self, total_terms: int, description: str = "", verbose: bool = True,
                 interval: float = 2.0, stream: Optional[TextIO] = None):
        """
        Initialize a progress tracker

        Args:
            total_terms: Number of terms the run will consume
            description: Label printed in front of every line
            verbose: Whether to print anything at all
            interval: Minimum seconds between two progress lines
            stream: Where to write (standard error by default)
        """
        self.total_terms = total_terms
        self.description = description
        self.verbose = verbose
        self.interval = interval
        self.stream = stream
        self.start_time = time.time()
        self.last_report = 0.0
        self.terms_done = 0
        self.digits = 0

    def _write(self, line: str) -> None:
        out = self.stream if self.stream is not None else sys.stderr
        out.write(line + "\n")
        out.flush()

    def update(self, terms_done: int, digits: int, force: bool = False) -> None:
        """
        Record the position of the stream; print when the interval has passed

        Args:
            terms_done: Terms fully consumed so far
            digits: Digits counted so far
            force: Print regardless of the interval
        """
        self.terms_done = terms_done
        self.digits = digits
        now = time.time()
        if not self.verbose or (not force and now - self.last_report < self.interval):
            return
        self.last_report = now
        self._write(self.format_line())

    def throughput(self) -> float:
        elapsed = time.time() - self.start_time
        return self.digits / elapsed if elapsed > 0 else 0.0

    def format_line(self) -> str:
        percent = 100.0 * self.terms_done / self.total_terms if self.total_terms else 100.0
        elapsed = time.time() - self.start_time
        prefix = f"{self.description}: " if self.description else ""
        return (f"{prefix}{progress_bar(self.terms_done, self.total_terms)} {percent:5.1f}% "
                f"terms {self.terms_done}/{self.total_terms}, digits {self.digits:,}, "
                f"{format_rate(self.throughput())} [{format_time(elapsed)}]")

    def finish(self) -> None:
        if self.verbose:
            self._write(self.format_line())


def format_time(seconds: float) -> str:
    """
    Format time in seconds to a human-readable string

    Args:
        seconds: Time in seconds

    Returns:
        Formatted time string
    """
    if seconds < 60:
        return f"{seconds:.1f}s"
    elif seconds < 3600:
        minutes = seconds // 60
        seconds %= 60
        return f"{int(minutes)}m {int(seconds)}s"
    else:
        hours = seconds // 3600
        seconds %= 3600
        minutes = seconds // 60
        seconds %= 60
        return f"{int(hours)}h {int(minutes)}m {int(seconds)}s"


def format_rate(digits_per_second: float) -> str:
    for unit, scale in (("G", 1e9), ("M", 1e6), ("k", 1e3)):
        if digits_per_second >= scale:
            return f"{digits_per_second / scale:.2f} {unit}digits/s"
    return f"{digits_per_second:.0f} digits/s"


def progress_bar(current: int, total: int, length: int = 20, fill: str = "#") -> str:
    """
    Render a fixed-width progress bar

    Args:
        current: Current progress value
        total: Total progress value
        length: Bar length
        fill: Bar fill character
    """
    filled = length if total <= 0 else min(length, int(length * current // total))
    return "|" + fill * filled + "-" * (length - filled) + "|"


@contextmanager
def progress_context(description: str, verbose: bool = True):
    """
    Context manager for one-shot operations that should announce themselves

    Args:
        description: Description of the operation
        verbose: Whether to print progress messages
    """
    if verbose:
        sys.stderr.write(f"{description}...\n")
    start_time = time.time()

    try:
        yield
    finally:
        elapsed = time.time() - start_time
        if verbose:
            sys.stderr.write(f"{description} completed in {format_time(elapsed)}\n")
