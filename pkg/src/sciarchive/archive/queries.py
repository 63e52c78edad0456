"""Read-side archive operations: access policy evaluation and personal
publication lists."""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass
from typing import Optional

from ..amsbib import parse_reference
from .store import Snapshot


def access_status(state: Snapshot, article_id: str, today: _dt.date) -> str:
    """"restricted" while the article is inside its journal's moving wall."""
    article = state.article(article_id)
    wall = state.moving_wall(article.journal_id)
    return "restricted" if today.year - article.year < wall else "open"


@dataclass(frozen=True)
class PublicationEntry:
    kind: str  # "article" | "external"
    year: Optional[int]
    title: str
    article_id: Optional[str] = None
    source: Optional[str] = None  # AMSBIB text for external entries


def person_publications(state: Snapshot, person_id: str) -> list[PublicationEntry]:
    """In-archive authorships plus manually attached external references,
    newest first, titles breaking year ties."""
    person = state.person(person_id)
    entries: list[PublicationEntry] = []
    for article_id in sorted(state.articles):
        article = state.articles[article_id]
        if person.person_id in article.authors:
            entries.append(
                PublicationEntry(
                    kind="article",
                    year=article.year,
                    title=article.title,
                    article_id=article_id,
                )
            )
    for source in person.external_publications:
        parsed = parse_reference(source)
        entries.append(
            PublicationEntry(
                kind="external",
                year=parsed.year,
                title=parsed.title or "",
                source=source,
            )
        )
    entries.sort(key=lambda e: (-(e.year or 0), e.title, e.article_id or ""))
    return entries
