"""Catalog of journals, articles, persons and organizations.

The store is embedded and file backed: the on-disk form is the canonical
NDJSON export itself, rewritten atomically on each committed write.  Writers
are serialized; readers work on immutable snapshots.
"""

from .records import (
    AccessPolicy,
    Affiliation,
    Article,
    Journal,
    Organization,
    Person,
    User,
)
from .store import Snapshot, Store
from .ingest import IngestReport, export_records, ingest
from .queries import PublicationEntry, access_status, person_publications
from .search import SearchHit, search_publications

__all__ = [
    "AccessPolicy",
    "Affiliation",
    "Article",
    "IngestReport",
    "Journal",
    "Organization",
    "Person",
    "PublicationEntry",
    "SearchHit",
    "Snapshot",
    "Store",
    "User",
    "access_status",
    "export_records",
    "ingest",
    "person_publications",
    "search_publications",
]
