"""
Report rendering for fibnormal commands
"""

from fibnormal.output.reports import (
    Report,
    SCHEMA_VERSION,
    format_pvalue,
    format_value,
    render,
    render_csv,
    render_json,
    render_text,
    resolve_output_path,
    write_report,
)

__all__ = ["Report", "SCHEMA_VERSION", "format_pvalue", "format_value", "render", "render_csv",
           "render_json", "render_text", "resolve_output_path", "write_report"]
