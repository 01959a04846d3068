"""
Report rendering: JSON (the machine contract), CSV and aligned text tables
"""

import csv
import io
import json
import logging
import math
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from fibnormal.config.manager import OUTPUT_DIR_ENV
from fibnormal.errors import InvalidInputError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
EXTENSIONS = {"json": "json", "csv": "csv", "text": "txt"}
PVALUE_FLOOR = 1e-6

_FREQUENCY = {"frequency", "empirical", "benford", "fraction", "share", "diagonal_mass",
              "condition_i_ratio", "condition_ii_ratio"}
_DEVIATION = {"deviation", "max_abs_deviation", "mean_abs_deviation", "delta", "baseline",
              "dev", "max_single_deviation", "max_diagonal_deviation", "frequency_bound"}
_STATISTIC = {"chi2", "naive_chi2", "good_delta_chi2", "z_score", "max_abs_z",
              "bonferroni_critical", "ratio", "mean", "std", "asymptotic_total"}
_PVALUE = {"p", "p_value", "p_naive", "p_good"}
_FIT = {"coefficient", "exponent", "r_squared", "predicted"}


@dataclass
class Report:
    """Result of one command: scalar summary fields plus named tables of rows"""
    command: str
    summary: Dict[str, Any] = field(default_factory=dict)
    tables: Dict[str, List[Dict[str, Any]]] = field(default_factory=dict)

    def add_table(self, name: str, rows: List[Dict[str, Any]]) -> None:
        self.tables[name] = rows

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "summary": _jsonable(self.summary),
            "tables": _jsonable(self.tables),
        }


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if hasattr(value, "item") and callable(value.item):
        return value.item()
    return value


def format_pvalue(p: Optional[float]) -> str:
    if p is None:
        return "-"
    if p < PVALUE_FLOOR:
        return "< 1e-6"
    return f"{p:.3f}"


def format_value(column: str, value: Any) -> str:
    """Fixed decimal formatting by column meaning"""
    if value is None:
        return "-"
    if isinstance(value, bool) or isinstance(value, (int, str)):
        return str(value)
    if not isinstance(value, float):
        return str(value)
    if not math.isfinite(value):
        return "-"
    if column in _PVALUE:
        return format_pvalue(value)
    if column in _FREQUENCY:
        return f"{value:.8f}"
    if column in _DEVIATION:
        return f"{value:.2e}"
    if column in _STATISTIC:
        return f"{value:.2f}"
    if column in _FIT:
        return f"{value:.4g}"
    return f"{value:.6g}"


def render_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def render_csv(report: Report) -> str:
    """
    One header row per table. A report with several tables writes each
    after a `# name` line, separated by blank lines.
    """
    out = io.StringIO()
    several = len(report.tables) > 1
    for i, (name, rows) in enumerate(report.tables.items()):
        if several:
            if i:
                out.write("\n")
            out.write(f"# {name}\n")
        columns = _columns(rows)
        writer = csv.DictWriter(out, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow({c: _csv_cell(row.get(c)) for c in columns})
    return out.getvalue()


def _csv_cell(value: Any) -> Any:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else ""
    return value


def _columns(rows: List[Dict[str, Any]]) -> List[str]:
    columns: List[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    return columns


def render_text(report: Report) -> str:
    lines = [f"fibnormal {report.command}"]
    width = max((len(k) for k in report.summary), default=0)
    for key, value in report.summary.items():
        lines.append(f"  {key.ljust(width)}  {format_value(key, value)}")
    for name, rows in report.tables.items():
        lines.append("")
        lines.append(f"[{name}]")
        if not rows:
            lines.append("  (empty)")
            continue
        columns = _columns(rows)
        cells = [[format_value(c, row.get(c)) for c in columns] for row in rows]
        widths = [max(len(c), *(len(r[i]) for r in cells)) for i, c in enumerate(columns)]
        lines.append("  " + "  ".join(c.rjust(w) for c, w in zip(columns, widths)))
        for r in cells:
            lines.append("  " + "  ".join(v.rjust(w) for v, w in zip(r, widths)))
    return "\n".join(lines) + "\n"


RENDERERS = {"json": render_json, "csv": render_csv, "text": render_text}


def render(report: Report, fmt: str) -> str:
    if fmt not in RENDERERS:
        raise InvalidInputError(f"unknown report format {fmt!r}")
    return RENDERERS[fmt](report)


def resolve_output_path(command: str, fmt: str, output: Optional[str] = None,
                        output_dir: Optional[str] = None) -> Optional[str]:
    """
    --output wins; otherwise <output_dir>/<command>.<ext> when an output
    directory is configured or FIBNORMAL_OUTPUT_DIR is set; otherwise None
    (standard output)
    """
    if output:
        return output
    directory = output_dir or os.environ.get(OUTPUT_DIR_ENV)
    if directory:
        return os.path.join(directory, f"{command}.{EXTENSIONS[fmt]}")
    return None


def write_report(report: Report, fmt: str, path: Optional[str] = None, stream=None) -> Optional[str]:
    """Render and write to path, or to the stream when no path is given"""
    text = render(report, fmt)
    if path is None:
        stream.write(text)
        return None
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.info("wrote %s report to %s", fmt, path)
    return path
