"""Citation counts and impact factors over the forward-link graph."""

from .impact import (
    HORIZONS,
    ImpactFactorResult,
    MetricsQuery,
    citable_items,
    citation_count,
    impact_factor,
    round3,
)
from .report import ReportRow, comparison_report, report_csv, report_table

__all__ = [
    "HORIZONS",
    "ImpactFactorResult",
    "MetricsQuery",
    "ReportRow",
    "citable_items",
    "citation_count",
    "comparison_report",
    "impact_factor",
    "report_csv",
    "report_table",
    "round3",
]
