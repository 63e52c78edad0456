"""Two-stage reference resolution against the article catalog.

Stage 1 matches the exact composite key (journal alias, year, volume, first
page) and scores 1.0.  Stage 2, consulted only when stage 1 yields nothing,
ranks catalog articles within a +-1 year window by trigram similarity of
normalized titles and keeps candidates at or above the similarity threshold.
Both stages are deterministic: ties break by ascending article id.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from ..amsbib import ParsedReference
from ..amsbib.tokens import scan_math
from ..archive.records import Resolution
from ..textutil import collapse_ws, fold


def normalize_title(title: str) -> str:
    """Matching form of a title: math and commands stripped, diacritics and
    case folded, whitespace collapsed."""
    out: list[str] = []
    i = 0
    n = len(title)
    while i < n:
        c = title[i]
        if c == "$":
            i = scan_math(title, i)
            out.append(" ")
        elif c == "\\":
            j = i + 1
            while j < n and title[j].isalpha():
                j += 1
            i = j if j > i + 1 else i + 2  # drop \command or \<char>
            out.append(" ")
        elif c in "{}":
            i += 1
        else:
            out.append(c)
            i += 1
    text = re.sub(r"[^\w\s]", " ", "".join(out), flags=re.UNICODE)
    return collapse_ws(fold(text))


def _trigrams(text: str) -> frozenset:
    padded = f" {text} "
    if len(padded) < 3:
        return frozenset()
    return frozenset(padded[i : i + 3] for i in range(len(padded) - 2))


def trigram_similarity(a: str, b: str) -> float:
    """Jaccard similarity of the padded character trigram sets of two strings."""
    ta, tb = _trigrams(a), _trigrams(b)
    if not ta or not tb:
        return 0.0
    inter = len(ta & tb)
    if inter == 0:
        return 0.0
    return inter / (len(ta) + len(tb) - inter)


@dataclass
class ResolverIndex:
    exact: dict  # (journal alias fold, year, volume fold, first page) -> [article_id]
    by_year: dict  # year -> [(article_id, normalized title)]


def build_resolver_index(state) -> ResolverIndex:
    journal_keys: dict[str, list[str]] = {}
    for journal in state.journals.values():
        names = [journal.title]
        if journal.translated_title:
            names.append(journal.translated_title)
        names.extend(journal.aliases)
        journal_keys[journal.journal_id] = sorted({fold(collapse_ws(n)) for n in names if n})

    exact: dict = {}
    by_year: dict = {}
    for article_id in sorted(state.articles):
        article = state.articles[article_id]
        first = article.first_page()
        if first is not None and article.volume:
            for jkey in journal_keys.get(article.journal_id, ()):
                key = (jkey, article.year, fold(article.volume), first)
                exact.setdefault(key, []).append(article_id)
        title = normalize_title(article.title or article.translated_title or "")
        if title:
            by_year.setdefault(article.year, []).append((article_id, title))
    return ResolverIndex(exact=exact, by_year=by_year)


def _index_for(state) -> ResolverIndex:
    derived = getattr(state, "derived", None)
    if derived is not None and hasattr(state, "version"):
        return derived("resolver_index", lambda: build_resolver_index(state))
    return build_resolver_index(state)


def resolve_reference(
    state,
    parsed: ParsedReference,
    *,
    year_hint: Optional[int] = None,
    threshold: Optional[float] = None,
    index: Optional[ResolverIndex] = None,
) -> list[Resolution]:
    """Rank catalog articles matching *parsed*, best first; [] means unresolved."""
    if index is None:
        index = _index_for(state)
    if threshold is None:
        threshold = state.fuzzy_threshold

    year = parsed.year if parsed.year is not None else year_hint

    first = parsed.first_page()
    if parsed.journal and year is not None and parsed.volume and first is not None:
        key = (fold(collapse_ws(parsed.journal)), year, fold(parsed.volume), first)
        hits = index.exact.get(key)
        if hits:
            return [Resolution(aid, 1.0, "exact_key") for aid in sorted(hits)]

    if year is None or not parsed.title:
        return []
    query = normalize_title(parsed.title)
    if not query:
        return []
    scored: list[tuple[float, str]] = []
    for candidate_year in (year - 1, year, year + 1):
        for article_id, title in index.by_year.get(candidate_year, ()):
            score = trigram_similarity(query, title)
            if score >= threshold:
                scored.append((score, article_id))
    scored.sort(key=lambda item: (-item[0], item[1]))
    return [Resolution(aid, score, "fuzzy_title") for score, aid in scored]
