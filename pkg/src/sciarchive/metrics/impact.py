"""Impact factor computation.

The citable unit is the work cluster (all language versions of one work).
Two modes:

integral
    Denominator counts clusters with at least one citable member published in
    the journal inside the window.  Numerator counts distinct (citing
    document, cited cluster) pairs with the citing year, from all sources.

restricted
    Emulates version-restricted counting: the denominator counts the
    English-language member articles in the window, the numerator only pairs
    whose resolved target is an English version cited from a venue flagged as
    ISI indexed.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Optional

from ..archive.store import Snapshot
from ..citegraph.links import forward_links
from ..errors import UnknownJournal

HORIZONS = (1, 2, 5)
MODES = ("integral", "restricted")


@dataclass(frozen=True)
class MetricsQuery:
    journal_id: str
    year: int
    horizon: int
    mode: str = "integral"

    def validate(self) -> None:
        if self.year <= 1800:
            raise ValueError("evaluation year must be after 1800")
        if self.horizon not in HORIZONS:
            raise ValueError(f"horizon must be one of {HORIZONS}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")

    @property
    def window(self) -> tuple[int, int]:
        return (self.year - self.horizon, self.year - 1)


@dataclass(frozen=True)
class ImpactFactorResult:
    citations: int
    citable_items: int
    value: Optional[Fraction]
    rounded: Optional[str]  # three decimals, half away from zero

    @property
    def defined(self) -> bool:
        return self.value is not None


def round3(value: Fraction) -> str:
    quantized = (Decimal(value.numerator) / Decimal(value.denominator)).quantize(
        Decimal("0.001"), rounding=ROUND_HALF_UP
    )
    return str(quantized)


def _require_journal(state: Snapshot, journal_id: str) -> None:
    if journal_id not in state.journals:
        raise UnknownJournal(f"unknown journal {journal_id!r}")


def _window_members(state: Snapshot, journal_id: str, window: tuple[int, int]):
    """Per cluster, the member articles of this journal inside the window."""
    low, high = window
    members: dict[str, list] = {}
    for article in state.articles.values():
        if article.journal_id == journal_id and low <= article.year <= high:
            cluster = state.article_cluster[article.article_id]
            members.setdefault(cluster, []).append(article)
    return members


def citable_items(
    state: Snapshot, journal_id: str, window: tuple[int, int], mode: str = "integral"
) -> int:
    _require_journal(state, journal_id)
    members = _window_members(state, journal_id, window)
    if mode == "integral":
        return sum(
            1 for articles in members.values() if any(a.citable for a in articles)
        )
    return sum(
        1 for articles in members.values() for a in articles if a.language == "en"
    )


def citation_count(
    state: Snapshot,
    journal_id: str,
    window: tuple[int, int],
    citing_year: int,
    mode: str = "integral",
) -> int:
    _require_journal(state, journal_id)
    qualifying = set(_window_members(state, journal_id, window))
    pairs: set[tuple[str, str]] = set()
    for link in forward_links(state):
        if link.citing_year != citing_year:
            continue
        cluster = state.article_cluster.get(link.cited_article)
        if cluster not in qualifying:
            continue
        if mode == "restricted":
            target = state.articles[link.cited_article]
            if target.language != "en" or not link.venue_isi:
                continue
        pairs.add((link.citing_doc_id, cluster))
    return len(pairs)


def impact_factor(state: Snapshot, query: MetricsQuery) -> ImpactFactorResult:
    query.validate()
    window = query.window
    citations = citation_count(state, query.journal_id, window, query.year, query.mode)
    items = citable_items(state, query.journal_id, window, query.mode)
    if items == 0:
        return ImpactFactorResult(citations, items, None, None)
    value = Fraction(citations, items)
    return ImpactFactorResult(citations, items, value, round3(value))
