"""Forward-link graph and searches over the stored reference database.

Forward links are always derived from resolved references, so the inversion
invariant (one link per resolved reference endpoint pair, none without a
generating reference) holds by construction; results are memoized per store
snapshot.
"""

from __future__ import annotations

from typing import Optional

from ..amsbib import PageRange, RawReference, parse_reference, render_pages
from ..errors import (
    EmptyQuery,
    UnknownArticle,
    UnknownCluster,
    UnknownReference,
)
from ..archive.records import (
    CitingDocument,
    ForwardLink,
    Resolution,
    StoredReference,
)
from ..archive.store import Snapshot, Store
from ..textutil import fold, words
from .resolve import normalize_title, resolve_reference


# -- mutations ---------------------------------------------------------------

def add_reference(
    store: Store,
    source: str,
    citing: str,
    *,
    origin: str = "journal_bibliography",
    citing_year: Optional[int] = None,
    citing_isi_indexed: bool = False,
    auto_resolve: bool = True,
) -> StoredReference:
    """Store one reference; resolves it against the catalog unless disabled."""
    raw = RawReference(source=source, origin=origin)
    parsed = parse_reference(raw)
    with store.write() as txn:
        if citing in txn.table("articles"):
            doc = CitingDocument(doc_id=citing, kind="article")
        else:
            if citing_year is None:
                raise UnknownArticle(
                    f"citing document {citing!r} is external and needs citing_year"
                )
            doc = CitingDocument(
                doc_id=citing, kind="external", year=citing_year, venue_isi=citing_isi_indexed
            )
        resolution = None
        if auto_resolve:
            candidates = resolve_reference(txn, parsed)
            resolution = candidates[0] if candidates else None
        references = txn.mutable("references")
        for existing in references.values():
            if existing.citing.doc_id == citing and existing.raw.source == source:
                return existing
        reference_id = txn.next_id("reference")
        reference = StoredReference(
            reference_id=reference_id,
            citing=doc,
            raw=raw,
            parsed=parsed,
            resolution=resolution,
        )
        references[reference_id] = reference
        return reference


def commit_resolution(
    store: Store, reference_id: str, article_id: Optional[str]
) -> StoredReference:
    """Manually set or clear the resolution of a stored reference.

    The forward-link view derives from the references table, so the link
    index is updated in the same committed write.
    """
    with store.write() as txn:
        references = txn.mutable("references")
        if reference_id not in references:
            raise UnknownReference(f"unknown reference {reference_id!r}")
        current = references[reference_id]
        if article_id is None:
            resolution = None
        else:
            if article_id not in txn.table("articles"):
                raise UnknownArticle(f"unknown article {article_id!r}")
            auto = resolve_reference(txn, current.parsed)
            match = next((c for c in auto if c.article_id == article_id), None)
            resolution = match or Resolution(article_id, 1.0, "manual")
        updated = StoredReference(
            reference_id=current.reference_id,
            citing=current.citing,
            raw=current.raw,
            parsed=current.parsed,
            resolution=resolution,
        )
        references[reference_id] = updated
        return updated


# -- forward links --------------------------------------------------------------

def _derive_links(state: Snapshot):
    dedup: dict[tuple[str, str], ForwardLink] = {}
    articles = state.articles
    journals = state.journals
    for reference in state.references.values():
        if reference.resolution is None:
            continue
        citing = reference.citing
        if citing.kind == "article":
            citing_article = articles.get(citing.doc_id)
            if citing_article is None:
                continue
            year = citing_article.year
            journal = journals.get(citing_article.journal_id)
            venue_isi = bool(journal and journal.isi_indexed)
        else:
            if citing.year is None:
                continue
            year = citing.year
            venue_isi = citing.venue_isi
        key = (citing.doc_id, reference.resolution.article_id)
        if key in dedup:
            continue
        dedup[key] = ForwardLink(
            citing_doc_id=citing.doc_id,
            citing_kind=citing.kind,
            citing_year=year,
            venue_isi=venue_isi,
            cited_article=reference.resolution.article_id,
        )
    ordered = tuple(dedup[k] for k in sorted(dedup))
    by_article: dict[str, list[ForwardLink]] = {}
    for link in ordered:
        by_article.setdefault(link.cited_article, []).append(link)
    return ordered, {k: tuple(v) for k, v in by_article.items()}


def forward_links(state: Snapshot) -> tuple[ForwardLink, ...]:
    return state.derived("forward_links", lambda: _derive_links(state))[0]


def _links_by_article(state: Snapshot) -> dict:
    return state.derived("forward_links", lambda: _derive_links(state))[1]


def build_forward_links(state: Snapshot) -> int:
    """Materialize the link set for this snapshot; returns the link count."""
    return len(forward_links(state))


def _is_self_citation(state: Snapshot, link: ForwardLink) -> bool:
    if link.citing_kind != "article":
        return False
    citing = state.articles.get(link.citing_doc_id)
    cited = state.articles.get(link.cited_article)
    if citing is None or cited is None:
        return False
    return bool(set(citing.authors) & set(cited.authors))


def forward_links_of(
    state: Snapshot, article_id: str, *, include_self_citations: bool = True
) -> list[ForwardLink]:
    state.article(article_id)
    result = list(_links_by_article(state).get(article_id, ()))
    if not include_self_citations:
        result = [l for l in result if not _is_self_citation(state, l)]
    return sorted(result, key=lambda l: (l.citing_doc_id, l.cited_article))


def cluster_forward_links(
    state: Snapshot, cluster_id: str, *, include_self_citations: bool = True
) -> list[ForwardLink]:
    """Links to any member article, one entry per citing document."""
    members = state.clusters.get(cluster_id)
    if members is None:
        raise UnknownCluster(f"unknown cluster {cluster_id!r}")
    by_doc: dict[str, ForwardLink] = {}
    for member in sorted(members):
        for link in _links_by_article(state).get(member, ()):
            if not include_self_citations and _is_self_citation(state, link):
                continue
            by_doc.setdefault(link.citing_doc_id, link)
    return [by_doc[doc] for doc in sorted(by_doc)]


# -- cited-reference search --------------------------------------------------------

def cited_reference_search(
    state: Snapshot,
    *,
    title_terms: Optional[list[str]] = None,
    year: Optional[int] = None,
    author_family: Optional[str] = None,
    pages: Optional[str] = None,
) -> list[StoredReference]:
    """Conjunctive search over the parsed fields of every stored reference,
    resolved or not; ordered by reference id."""
    terms = [t for t in (title_terms or []) if t.strip()]
    if not terms and year is None and not author_family and not pages:
        raise EmptyQuery("cited-reference search requires at least one criterion")

    folded_terms = [fold(t) for t in terms]
    family_key = fold(author_family) if author_family else None
    hits: list[StoredReference] = []
    for reference_id in sorted(state.references):
        reference = state.references[reference_id]
        parsed = reference.parsed
        if year is not None and parsed.year != year:
            continue
        if folded_terms:
            title_tokens = set(words(normalize_title(parsed.title or "")))
            if not all(term in title_tokens for term in folded_terms):
                continue
        if family_key is not None:
            families = {fold(a.family) for a in parsed.authors}
            if family_key not in families:
                continue
        if pages is not None and not _pages_match(parsed.pages, pages):
            continue
        hits.append(reference)
    return hits


def _pages_match(parsed_pages, query: str) -> bool:
    if parsed_pages is None:
        return False
    query = query.strip()
    if isinstance(parsed_pages, PageRange):
        if query.isdigit():
            return parsed_pages.first == int(query)
        return render_pages(parsed_pages) == query
    return fold(parsed_pages) == fold(query)
