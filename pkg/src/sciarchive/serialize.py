"""Record (de)serialization shared by the ingest format, the export, the HTTP
API and the CLI, so all surfaces emit identical shapes."""

from __future__ import annotations

import base64
import json
from typing import Any, Optional

from .amsbib import PageRange, ParsedReference, PersonName, normalize_pages, render_pages
from .archive.records import (
    AccessPolicy,
    Affiliation,
    Article,
    CitingDocument,
    Document,
    FlowRecord,
    ForwardLink,
    Journal,
    Manuscript,
    Notification,
    Organization,
    Person,
    RefereeAssignment,
    Resolution,
    StoredReference,
    User,
)

# Export order: dependencies first so that the canonical export re-ingests
# cleanly (articles need journals and persons, references need articles, ...).
TYPE_RANK = {
    "journal": 0,
    "organization": 1,
    "person": 2,
    "user": 3,
    "article": 4,
    "version_link": 5,
    "access_policy": 6,
    "reference": 7,
    "blob": 8,
    "manuscript": 9,
    "flow_record": 10,
    "assignment": 11,
    "notification": 12,
}


def dumps(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v is not None}


# -- small shared pieces -------------------------------------------------------

def person_name_to_json(name: PersonName) -> dict:
    return _clean({"family": name.family, "given": name.given, "variant": name.variant})


def person_name_from_json(value) -> PersonName:
    if isinstance(value, str):
        from .amsbib import parse_person_name

        return parse_person_name(value)
    return PersonName(
        family=str(value.get("family", "")),
        given=str(value.get("given", "")),
        variant=value.get("variant"),
    )


def pages_to_json(pages) -> Optional[str]:
    if pages is None:
        return None
    return render_pages(pages)


def pages_from_json(value):
    if value is None:
        return None
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return PageRange(int(value[0]), int(value[1]))
    return normalize_pages(str(value))


def links_to_json(links: tuple[tuple[str, str], ...]) -> dict:
    return {k: v for k, v in sorted(links)}


def links_from_json(value) -> tuple[tuple[str, str], ...]:
    if not value:
        return ()
    return tuple(sorted((str(k), str(v)) for k, v in dict(value).items()))


# -- archive records -------------------------------------------------------------

def journal_to_json(j: Journal) -> dict:
    return _clean(
        {
            "journal_id": j.journal_id,
            "title": j.title,
            "translated_title": j.translated_title,
            "founder": j.founder,
            "publisher": j.publisher,
            "editorial_board": list(j.editorial_board),
            "aliases": list(j.aliases),
            "isi_indexed": j.isi_indexed,
        }
    )


def article_to_json(a: Article) -> dict:
    return _clean(
        {
            "article_id": a.article_id,
            "journal_id": a.journal_id,
            "year": a.year,
            "volume": a.volume,
            "issue": a.issue,
            "pages": pages_to_json(a.pages),
            "language": a.language,
            "title": a.title,
            "abstract": a.abstract,
            "keywords": list(a.keywords),
            "translated_title": a.translated_title,
            "translated_abstract": a.translated_abstract,
            "translated_keywords": list(a.translated_keywords) or None,
            "authors": list(a.authors),
            "links": links_to_json(a.links),
            "citable": a.citable,
        }
    )


def person_to_json(p: Person) -> dict:
    return _clean(
        {
            "person_id": p.person_id,
            "canonical_name": person_name_to_json(p.canonical_name),
            "name_variants": [person_name_to_json(v) for v in p.name_variants],
            "affiliations": [
                _clean(
                    {
                        "organization_id": a.organization_id,
                        "year_from": a.year_from,
                        "year_to": a.year_to,
                    }
                )
                for a in p.affiliations
            ],
            "keywords": list(p.keywords),
            "external_profile_urls": list(p.external_profile_urls),
            "external_publications": list(p.external_publications),
        }
    )


def organization_to_json(o: Organization) -> dict:
    return _clean({"organization_id": o.organization_id, "name": o.name, "url": o.url})


def access_policy_to_json(p: AccessPolicy) -> dict:
    return {"journal_id": p.journal_id, "moving_wall_years": p.moving_wall_years}


def user_to_json(u: User) -> dict:
    return _clean(
        {
            "user_id": u.user_id,
            "name": u.name,
            "password_hash": u.password_hash,
            "roles": [list(r) for r in u.roles],
            "person_id": u.person_id,
        }
    )


def resolution_to_json(r: Optional[Resolution]) -> Optional[dict]:
    if r is None:
        return None
    return {"article_id": r.article_id, "score": r.score, "method": r.method}


def reference_to_json(ref: StoredReference) -> dict:
    citing = ref.citing
    out = {
        "reference_id": ref.reference_id,
        "citing": citing.doc_id,
        "source": ref.raw.source,
        "origin": ref.raw.origin,
        "resolution": resolution_to_json(ref.resolution),
    }
    if citing.kind == "external":
        out["citing_year"] = citing.year
        out["citing_isi_indexed"] = citing.venue_isi
    return _clean(out)


def parsed_reference_to_json(ref: ParsedReference) -> dict:
    return _clean(
        {
            "kind": ref.kind,
            "authors": [person_name_to_json(a) for a in ref.authors],
            "title": ref.title,
            "journal": ref.journal,
            "year": ref.year,
            "volume": ref.volume,
            "issue": ref.issue,
            "pages": pages_to_json(ref.pages),
            "extra": ref.extra,
            "links": dict(ref.links),
            "unknown_fields": [list(f) for f in ref.unknown_fields],
            "warnings": [w.message for w in ref.warnings] or None,
        }
    )


def forward_link_to_json(link: ForwardLink) -> dict:
    return {
        "citing": link.citing_doc_id,
        "citing_kind": link.citing_kind,
        "citing_year": link.citing_year,
        "venue_isi": link.venue_isi,
        "cited_article": link.cited_article,
    }


# -- editorial records -------------------------------------------------------------

def document_to_json(d: Document) -> dict:
    return {
        "role": d.role,
        "content_hash": d.content_hash,
        "filename": d.filename,
        "uploaded_by": d.uploaded_by,
        "timestamp": d.timestamp,
    }


def document_from_json(value: dict) -> Document:
    return Document(
        role=str(value["role"]),
        content_hash=str(value["content_hash"]),
        filename=str(value.get("filename", "")),
        uploaded_by=str(value.get("uploaded_by", "")),
        timestamp=str(value.get("timestamp", "")),
    )


def manuscript_to_json(m: Manuscript) -> dict:
    return _clean(
        {
            "manuscript_id": m.manuscript_id,
            "journal_id": m.journal_id,
            "title": m.title,
            "abstract": m.abstract,
            "keywords": list(m.keywords),
            "translated_title": m.translated_title,
            "translated_abstract": m.translated_abstract,
            "translated_keywords": list(m.translated_keywords) or None,
            "authors": list(m.authors),
            "submitted_by": m.submitted_by,
            "files": [document_to_json(d) for d in m.files],
            "current_stage": m.current_stage,
            "created_at": m.created_at,
        }
    )


def flow_record_to_json(r: FlowRecord) -> dict:
    return {
        "record_id": r.record_id,
        "manuscript_id": r.manuscript_id,
        "from_stage": r.from_stage,
        "to_stage": r.to_stage,
        "actor_user": r.actor_user,
        "actor_role": r.actor_role,
        "timestamp": r.timestamp,
        "note": r.note,
        "documents": [document_to_json(d) for d in r.documents],
    }


def assignment_to_json(a: RefereeAssignment) -> dict:
    return _clean(
        {
            "manuscript_id": a.manuscript_id,
            "referee": a.referee,
            "assigned_by": a.assigned_by,
            "status": a.status,
            "label_index": a.label_index,
            "recommendation": a.recommendation,
            "created_at": a.created_at,
        }
    )


def notification_to_json(n: Notification) -> dict:
    return {
        "notification_id": n.notification_id,
        "recipient": n.recipient,
        "template_id": n.template_id,
        "body": n.body,
        "created_at": n.created_at,
        "delivered": n.delivered,
    }


def blob_to_json(content_hash: str, data: bytes) -> dict:
    return {"hash": content_hash, "data": base64.b64encode(data).decode("ascii")}
