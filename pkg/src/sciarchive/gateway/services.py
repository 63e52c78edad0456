"""JSON-producing service functions shared verbatim by the HTTP handlers and
the CLI, so both surfaces emit identical payloads for identical inputs."""

from __future__ import annotations

import datetime as _dt
from typing import Optional

from .. import serialize as ser
from ..amsbib import parse_reference, render
from ..archive.queries import access_status, person_publications
from ..archive.search import search_publications
from ..archive.store import Snapshot
from ..citegraph.links import cited_reference_search, forward_links_of
from ..citegraph.resolve import resolve_reference
from ..editorial.workflow import (
    Editorial,
    STAGES,
    TRANSITIONS,
    TERMINAL_STAGES,
    allowed_roles,
)
from ..errors import UnknownJournal
from ..metrics import MetricsQuery, comparison_report, impact_factor
from ..metrics.report import ReportRow


def journal_json(state: Snapshot, journal_id: str) -> dict:
    journal = state.journals.get(journal_id)
    if journal is None:
        raise UnknownJournal(f"unknown journal {journal_id!r}")
    body = ser.journal_to_json(journal)
    body["moving_wall_years"] = state.moving_wall(journal_id)
    return body


def journals_list(state: Snapshot) -> list[dict]:
    return [journal_json(state, jid) for jid in sorted(state.journals)]


def article_json(state: Snapshot, article_id: str, today: Optional[_dt.date] = None) -> dict:
    article = state.article(article_id)
    body = ser.article_to_json(article)
    body["cluster_id"] = state.article_cluster[article_id]
    body["access"] = access_status(state, article_id, today or _dt.date.today())
    return body


def articles_list(state: Snapshot) -> list[dict]:
    return [article_json(state, aid) for aid in sorted(state.articles)]


def forward_links_json(
    state: Snapshot, article_id: str, include_self_citations: bool = True
) -> dict:
    links = forward_links_of(
        state, article_id, include_self_citations=include_self_citations
    )
    return {
        "article_id": article_id,
        "links": [ser.forward_link_to_json(l) for l in links],
    }


def impact_json(
    state: Snapshot, journal_id: str, year: int, horizon: int, mode: str
) -> dict:
    query = MetricsQuery(journal_id=journal_id, year=year, horizon=horizon, mode=mode)
    result = impact_factor(state, query)
    return {
        "journal_id": journal_id,
        "year": year,
        "horizon": horizon,
        "mode": mode,
        "citations": result.citations,
        "citable_items": result.citable_items,
        "defined": result.defined,
        "value": f"{result.value.numerator}/{result.value.denominator}" if result.defined else None,
        "rounded": result.rounded,
    }


def _row_json(row: ReportRow) -> dict:
    cells = row.cells()
    return {
        "journal_id": row.journal_id,
        "journal": cells[0],
        "integral_citations": cells[1],
        "integral_if": cells[2],
        "restricted_citations": cells[3],
        "restricted_if": cells[4],
        "error": row.error,
    }


def report_json(state: Snapshot, journal_ids: list[str], year: int, horizon: int) -> dict:
    rows = comparison_report(state, journal_ids, year, horizon)
    return {
        "year": year,
        "horizon": horizon,
        "rows": [_row_json(r) for r in rows],
    }


def search_json(
    state: Snapshot,
    *,
    title_keywords: Optional[list[str]] = None,
    abstract_keywords: Optional[list[str]] = None,
    author_name: Optional[str] = None,
    organization_name: Optional[str] = None,
    journal_id: Optional[str] = None,
    year_range: Optional[tuple[int, int]] = None,
) -> dict:
    hits = search_publications(
        state,
        title_keywords=title_keywords,
        abstract_keywords=abstract_keywords,
        author_name=author_name,
        organization_name=organization_name,
        journal_id=journal_id,
        year_range=year_range,
    )
    return {"hits": [{"article_id": h.article_id, "score": h.score} for h in hits]}


def reference_api_json(reference) -> dict:
    body = ser.reference_to_json(reference)
    body["parsed"] = ser.parsed_reference_to_json(reference.parsed)
    return body


def refs_search_json(
    state: Snapshot,
    *,
    title_terms: Optional[list[str]] = None,
    year: Optional[int] = None,
    author_family: Optional[str] = None,
    pages: Optional[str] = None,
) -> dict:
    refs = cited_reference_search(
        state, title_terms=title_terms, year=year, author_family=author_family, pages=pages
    )
    return {"references": [reference_api_json(r) for r in refs]}


def parse_json(source: str, format: Optional[str] = None) -> dict:
    parsed = parse_reference(source)
    body = {"parsed": ser.parsed_reference_to_json(parsed)}
    if format:
        body["rendered"] = render(parsed, format)
        body["format"] = format
    return body


def resolve_json(state: Snapshot, source: str, year_hint: Optional[int] = None) -> dict:
    parsed = parse_reference(source)
    candidates = resolve_reference(state, parsed, year_hint=year_hint)
    return {
        "parsed": ser.parsed_reference_to_json(parsed),
        "candidates": [
            {"article_id": c.article_id, "score": c.score, "method": c.method}
            for c in candidates
        ],
    }


def person_json(state: Snapshot, person_id: str) -> dict:
    return ser.person_to_json(state.person(person_id))


def person_publications_json(state: Snapshot, person_id: str) -> dict:
    entries = person_publications(state, person_id)
    return {
        "person_id": state.resolve_person_id(person_id),
        "publications": [
            {
                "kind": e.kind,
                "year": e.year,
                "title": e.title,
                "article_id": e.article_id,
                "source": e.source,
            }
            for e in entries
        ],
    }


def forthcoming_json(editorial: Editorial, journal_id: str) -> dict:
    manuscripts = editorial.forthcoming_list(journal_id)
    return {
        "journal_id": journal_id,
        "manuscripts": [ser.manuscript_to_json(m) for m in manuscripts],
    }


def editorial_report_json(
    editorial: Editorial, journal_id: str, start: _dt.datetime, end: _dt.datetime
) -> dict:
    return editorial.editorial_report(journal_id, (start, end))


def transitions_json() -> dict:
    edges = []
    for source in sorted(TRANSITIONS):
        for target in sorted(TRANSITIONS[source]):
            edges.append(
                {
                    "from": source,
                    "to": target,
                    "roles": sorted(allowed_roles(source, target)),
                }
            )
    return {
        "stages": list(STAGES),
        "terminal": sorted(TERMINAL_STAGES),
        "edges": edges,
    }
