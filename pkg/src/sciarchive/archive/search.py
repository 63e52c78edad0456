"""Publication search over an inverted index.

Matching is token based, case insensitive and diacritic folded.  Criteria
combine conjunctively; title terms match against title or keyword tokens,
abstract terms against abstract or keyword tokens.  Ranking sums term
frequency times field weight (title 3, keywords 2, abstract 1) with no
length normalization; ties break by ascending article id.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..errors import EmptyQuery, UnknownJournal
from ..textutil import words
from .store import Snapshot

FIELD_WEIGHTS = {"title": 3, "keywords": 2, "abstract": 1}


@dataclass(frozen=True)
class SearchHit:
    article_id: str
    score: int


class _Index:
    __slots__ = ("postings", "author_tokens", "org_tokens")

    def __init__(self):
        # token -> article_id -> [tf_title, tf_keywords, tf_abstract]
        self.postings: dict[str, dict[str, list[int]]] = {}
        self.author_tokens: dict[str, set[str]] = {}
        self.org_tokens: dict[str, set[str]] = {}


def _article_field_tokens(state: Snapshot, article) -> dict[str, list[str]]:
    title_tokens = words(article.title)
    if article.translated_title:
        title_tokens += words(article.translated_title)
    keyword_tokens: list[str] = []
    for kw in article.keywords + article.translated_keywords:
        keyword_tokens += words(kw)
    abstract_tokens = words(article.abstract)
    if article.translated_abstract:
        abstract_tokens += words(article.translated_abstract)
    return {"title": title_tokens, "keywords": keyword_tokens, "abstract": abstract_tokens}


def _person_tokens(state: Snapshot, person_id: str) -> list[str]:
    person = state.persons.get(person_id)
    if person is None:
        return []
    tokens: list[str] = []
    for name in (person.canonical_name, *person.name_variants):
        tokens += words(name.family)
        tokens += words(name.given)
        if name.variant:
            tokens += words(name.variant)
    return tokens


def _build_index(state: Snapshot) -> _Index:
    index = _Index()
    for article_id, article in state.articles.items():
        fields = _article_field_tokens(state, article)
        for field_name, tokens in fields.items():
            slot = ("title", "keywords", "abstract").index(field_name)
            for token in tokens:
                per_article = index.postings.setdefault(token, {})
                counts = per_article.setdefault(article_id, [0, 0, 0])
                counts[slot] += 1
        author_tokens: set[str] = set()
        org_tokens: set[str] = set()
        for person_id in article.authors:
            author_tokens.update(_person_tokens(state, person_id))
            person = state.persons.get(person_id)
            if person:
                for affiliation in person.affiliations:
                    org = state.organizations.get(affiliation.organization_id)
                    if org:
                        org_tokens.update(words(org.name))
        for token in author_tokens:
            index.author_tokens.setdefault(token, set()).add(article_id)
        for token in org_tokens:
            index.org_tokens.setdefault(token, set()).add(article_id)
    return index


def _index(state: Snapshot) -> _Index:
    return state.derived("search_index", lambda: _build_index(state))


def search_publications(
    state: Snapshot,
    *,
    title_keywords: Optional[list[str]] = None,
    abstract_keywords: Optional[list[str]] = None,
    author_name: Optional[str] = None,
    organization_name: Optional[str] = None,
    journal_id: Optional[str] = None,
    year_range: Optional[tuple[int, int]] = None,
) -> list[SearchHit]:
    title_terms = [w for t in (title_keywords or []) for w in words(t)]
    abstract_terms = [w for t in (abstract_keywords or []) for w in words(t)]
    author_terms = words(author_name) if author_name else []
    org_terms = words(organization_name) if organization_name else []
    if not any([title_terms, abstract_terms, author_terms, org_terms, journal_id, year_range]):
        raise EmptyQuery("publication search requires at least one criterion")
    if journal_id is not None and journal_id not in state.journals:
        raise UnknownJournal(f"unknown journal {journal_id!r}")

    index = _index(state)
    candidates: Optional[set[str]] = None

    def narrow(ids: set[str]) -> None:
        nonlocal candidates
        candidates = ids if candidates is None else candidates & ids

    for term in title_terms:
        per_article = index.postings.get(term, {})
        narrow({aid for aid, c in per_article.items() if c[0] or c[1]})
    for term in abstract_terms:
        per_article = index.postings.get(term, {})
        narrow({aid for aid, c in per_article.items() if c[2] or c[1]})
    for term in author_terms:
        narrow(set(index.author_tokens.get(term, ())))
    for term in org_terms:
        narrow(set(index.org_tokens.get(term, ())))
    if journal_id is not None:
        narrow({aid for aid, a in state.articles.items() if a.journal_id == journal_id})
    if year_range is not None:
        low, high = year_range
        narrow({aid for aid, a in state.articles.items() if low <= a.year <= high})

    assert candidates is not None
    hits = []
    scoring_terms = sorted(set(title_terms + abstract_terms))
    for article_id in candidates:
        score = 0
        for term in scoring_terms:
            counts = index.postings.get(term, {}).get(article_id)
            if counts:
                score += 3 * counts[0] + 2 * counts[1] + 1 * counts[2]
        hits.append(SearchHit(article_id=article_id, score=score))
    hits.sort(key=lambda h: (-h.score, h.article_id))
    return hits
