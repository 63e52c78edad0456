"""Immutable record types held by the store.

Records are frozen dataclasses and are replaced, never mutated, so snapshots
stay consistent without deep copies.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Union

from ..amsbib import PageRange, ParsedReference, PersonName, RawReference

LANGUAGES = ("ru", "en", "other")

ARTICLE_YEAR_MIN = 1800

LINK_KINDS = ("doi", "mathnet", "mathscinet", "zmath", "adsnasa", "isi", "elink")


@dataclass(frozen=True)
class Journal:
    journal_id: str
    title: str
    translated_title: Optional[str] = None
    founder: str = ""
    publisher: str = ""
    editorial_board: tuple[str, ...] = ()
    aliases: tuple[str, ...] = ()
    isi_indexed: bool = False


@dataclass(frozen=True)
class Article:
    article_id: str
    journal_id: str
    year: int
    volume: str = ""
    issue: str = ""
    pages: Union[PageRange, str, None] = None
    language: str = "ru"
    title: str = ""
    abstract: str = ""
    keywords: tuple[str, ...] = ()
    translated_title: Optional[str] = None
    translated_abstract: Optional[str] = None
    translated_keywords: tuple[str, ...] = ()
    authors: tuple[str, ...] = ()
    links: tuple[tuple[str, str], ...] = ()
    citable: bool = True

    def first_page(self) -> Optional[int]:
        if isinstance(self.pages, PageRange):
            return self.pages.first
        return None


@dataclass(frozen=True)
class Affiliation:
    organization_id: str
    year_from: Optional[int] = None
    year_to: Optional[int] = None


@dataclass(frozen=True)
class Person:
    person_id: str
    canonical_name: PersonName
    name_variants: tuple[PersonName, ...] = ()
    affiliations: tuple[Affiliation, ...] = ()
    keywords: tuple[str, ...] = ()
    external_profile_urls: tuple[str, ...] = ()
    external_publications: tuple[str, ...] = ()  # AMSBIB source strings


@dataclass(frozen=True)
class Organization:
    organization_id: str
    name: str
    url: Optional[str] = None


@dataclass(frozen=True)
class AccessPolicy:
    journal_id: str
    moving_wall_years: int = 3


@dataclass(frozen=True)
class User:
    user_id: str
    name: str = ""
    password_hash: str = ""
    roles: tuple[tuple[str, str], ...] = ()  # (journal_id, role)
    person_id: Optional[str] = None

    def has_role(self, journal_id: str, *roles: str) -> bool:
        return any(j == journal_id and r in roles for j, r in self.roles)


# -- citation graph ----------------------------------------------------------

@dataclass(frozen=True)
class CitingDocument:
    doc_id: str
    kind: str  # "article" | "external"
    year: Optional[int] = None  # external documents only; articles use catalog year
    venue_isi: bool = False


@dataclass(frozen=True)
class Resolution:
    article_id: str
    score: float
    method: str  # exact_key | fuzzy_title | manual


@dataclass(frozen=True)
class StoredReference:
    reference_id: str
    citing: CitingDocument
    raw: RawReference
    parsed: ParsedReference
    resolution: Optional[Resolution] = None


@dataclass(frozen=True)
class ForwardLink:
    citing_doc_id: str
    citing_kind: str
    citing_year: int
    venue_isi: bool
    cited_article: str


# -- editorial ---------------------------------------------------------------

DOCUMENT_ROLES = (
    "source_latex",
    "source_pdf",
    "revision",
    "review",
    "translation",
    "final_pdf",
)


@dataclass(frozen=True)
class Document:
    role: str
    content_hash: str
    filename: str
    uploaded_by: str
    timestamp: str


@dataclass(frozen=True)
class Manuscript:
    manuscript_id: str
    journal_id: str
    title: str
    submitted_by: str
    authors: tuple[str, ...]
    abstract: str = ""
    keywords: tuple[str, ...] = ()
    translated_title: Optional[str] = None
    translated_abstract: Optional[str] = None
    translated_keywords: tuple[str, ...] = ()
    files: tuple[Document, ...] = ()
    current_stage: str = "Submitted"
    created_at: str = ""


@dataclass(frozen=True)
class FlowRecord:
    record_id: str
    manuscript_id: str
    from_stage: str
    to_stage: str
    actor_user: str
    actor_role: str
    timestamp: str
    note: str = ""
    documents: tuple[Document, ...] = ()


@dataclass(frozen=True)
class RefereeAssignment:
    manuscript_id: str
    referee: str
    assigned_by: str
    status: str = "invited"  # invited | accepted | declined | reported
    label_index: int = 1
    recommendation: Optional[str] = None  # accept | minor | major | reject
    created_at: str = ""


@dataclass(frozen=True)
class Notification:
    notification_id: str
    recipient: str
    template_id: str
    body: str
    created_at: str
    delivered: bool = False


__all__ = [name for name in dir() if name[:1].isupper()] + ["replace"]
