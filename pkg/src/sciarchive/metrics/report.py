"""Journal comparison report: integral vs restricted counts side by side."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Optional

from ..archive.store import Snapshot
from ..errors import UnknownJournal
from .impact import MetricsQuery, citable_items, citation_count, impact_factor, round3

DASH = "--"


@dataclass(frozen=True)
class ReportRow:
    journal_id: str
    journal: str  # display title; error text for unknown journals
    integral_citations: Optional[int]
    integral_if: Optional[str]
    restricted_citations: Optional[int]
    restricted_if: Optional[str]
    error: Optional[str] = None

    def cells(self) -> tuple[str, str, str, str, str]:
        if self.error:
            return (self.journal, DASH, DASH, DASH, DASH)
        return (
            self.journal,
            str(self.integral_citations),
            self.integral_if if self.integral_if is not None else DASH,
            str(self.restricted_citations) if self.restricted_citations is not None else DASH,
            self.restricted_if if self.restricted_if is not None else DASH,
        )


def comparison_report(
    state: Snapshot, journal_ids: list[str], year: int, horizon: int
) -> list[ReportRow]:
    """One row per requested journal, in input order.

    Restricted columns hold the dash literal when the journal has no
    English-version member articles in the window (the restricted metric is
    undefined there, matching how version-restricted sources print missing
    journals).
    """
    rows: list[ReportRow] = []
    for journal_id in journal_ids:
        try:
            integral = impact_factor(
                state, MetricsQuery(journal_id, year, horizon, "integral")
            )
            restricted = impact_factor(
                state, MetricsQuery(journal_id, year, horizon, "restricted")
            )
        except UnknownJournal as exc:
            rows.append(
                ReportRow(
                    journal_id=journal_id,
                    journal=f"unknown journal {journal_id!r}",
                    integral_citations=None,
                    integral_if=None,
                    restricted_citations=None,
                    restricted_if=None,
                    error=exc.message,
                )
            )
            continue
        title = state.journals[journal_id].title
        if restricted.citable_items == 0 and restricted.citations == 0:
            restricted_citations: Optional[int] = None
            restricted_if: Optional[str] = None
        else:
            restricted_citations = restricted.citations
            restricted_if = restricted.rounded  # None when undefined (P = 0)
        rows.append(
            ReportRow(
                journal_id=journal_id,
                journal=title,
                integral_citations=integral.citations,
                integral_if=integral.rounded if integral.defined else None,
                restricted_citations=restricted_citations,
                restricted_if=restricted_if,
            )
        )
    return rows


CSV_COLUMNS = (
    "journal",
    "integral_citations",
    "integral_if",
    "restricted_citations",
    "restricted_if",
)


def report_csv(rows: list[ReportRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.cells())
    return buffer.getvalue()


def report_table(rows: list[ReportRow]) -> str:
    header = ("Journal", "Citations", "IF", "Citations (restricted)", "IF (restricted)")
    body = [row.cells() for row in rows]
    widths = [
        max(len(header[i]), *(len(r[i]) for r in body)) if body else len(header[i])
        for i in range(5)
    ]
    def fmt(cells) -> str:
        return "  ".join(str(c).ljust(widths[i]) for i, c in enumerate(cells)).rstrip()
    lines = [fmt(header), fmt(["-" * w for w in widths])]
    lines.extend(fmt(r) for r in body)
    return "\n".join(lines) + "\n"
