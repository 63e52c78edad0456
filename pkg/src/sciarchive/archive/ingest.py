"""NDJSON ingestion and the canonical export.

One line per record, discriminated by ``type``.  Core types: journal,
article, person, organization, reference, version_link, access_policy.
Extension types carry users, manuscripts, paper-flow state and document
payloads so a store file reloads completely.

Each record is validated and applied atomically; invalid records are
rejected with a reason and never abort the stream.  Ingesting the same file
twice leaves the store byte-identical.
"""

from __future__ import annotations

import base64
import hashlib
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Union

from ..amsbib import parse_person_name, parse_reference
from ..errors import DomainError, MalformedRecord
from .. import serialize as ser
from .records import (
    AccessPolicy,
    Affiliation,
    Article,
    CitingDocument,
    Document,
    FlowRecord,
    Journal,
    LANGUAGES,
    Manuscript,
    Notification,
    Organization,
    Person,
    RefereeAssignment,
    Resolution,
    StoredReference,
    User,
)
from ..amsbib import RawReference
from ..textutil import fold
from .store import Snapshot, Store, Transaction, add_article_cluster, link_versions_txn

CORE_TYPES = (
    "journal",
    "article",
    "person",
    "organization",
    "reference",
    "version_link",
    "access_policy",
)
EXTENSION_TYPES = (
    "user",
    "blob",
    "manuscript",
    "flow_record",
    "assignment",
    "notification",
)

EDITORIAL_STAGES = (
    "Submitted",
    "Classification",
    "PeerReview",
    "AuthorsRevision",
    "ScientificEditing",
    "Translation",
    "EnglishEditing",
    "Forthcoming",
    "PublishedOnline",
    "PublishedPrint",
    "Rejected",
    "Withdrawn",
)
ROLES = ("Author", "Referee", "Editor", "JournalAdministrator")


@dataclass
class IngestReport:
    created: int = 0
    updated: int = 0
    rejected: int = 0
    rejections: list = field(default_factory=list)  # (record index, reason)

    def count(self, outcome: str) -> None:
        if outcome == "created":
            self.created += 1
        elif outcome == "updated":
            self.updated += 1


@lru_cache(maxsize=4096)
def hash_password(user_id: str, password: str) -> str:
    # salt derives from the user id so re-ingesting a plaintext password is a
    # no-op; adequate for a desk-scale system with no password database reuse
    salt = hashlib.sha256(("sciarchive:" + user_id).encode("utf-8")).digest()
    digest = hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, 60_000)
    return "pbkdf2$" + digest.hex()


def ingest(store: Store, stream: Union[str, Iterable[str]], _loading: bool = False) -> IngestReport:
    """Apply an NDJSON stream to the store in one committed transaction."""
    if isinstance(stream, str):
        lines = stream.splitlines()
    else:
        lines = list(stream)
    report = IngestReport()
    with store.write() as txn:
        _ingest_txn(txn, lines, report)
    return report


def _ingest_txn(txn: Transaction, lines: list[str], report: IngestReport) -> None:
    deferred: list[tuple[int, dict]] = []
    for index, line in enumerate(lines):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            if not isinstance(record, dict):
                raise MalformedRecord("record is not an object")
            rtype = record.get("type")
            if rtype == "reference":
                deferred.append((index, record))
                continue
            outcome = _apply_record(txn, rtype, record)
            report.count(outcome)
        except MalformedRecord as exc:
            report.rejected += 1
            report.rejections.append((index, exc.message))
        except json.JSONDecodeError as exc:
            report.rejected += 1
            report.rejections.append((index, f"invalid JSON: {exc.msg}"))
    # references resolve against the full catalog of this batch, so they are
    # applied after all other record types regardless of stream position
    natural_key = {
        (ref.citing.doc_id, ref.raw.source): rid
        for rid, ref in txn.table("references").items()
    }
    resolver_index = None
    if deferred:
        from ..citegraph.resolve import build_resolver_index

        resolver_index = build_resolver_index(txn)
    for index, record in deferred:
        try:
            outcome = _apply_reference(txn, record, natural_key, resolver_index)
            report.count(outcome)
        except MalformedRecord as exc:
            report.rejected += 1
            report.rejections.append((index, exc.message))
    _sync_counters(txn)


def _sync_counters(txn: Transaction) -> None:
    # explicit ids from the stream must never collide with generated ones
    from .store import ID_PREFIXES

    pools = {
        "person": list(txn.table("persons")) + list(txn.table("person_aliases")),
        "reference": list(txn.table("references")),
        "manuscript": list(txn.table("manuscripts")),
        "flow_record": [r.record_id for c in txn.table("flows").values() for r in c],
        "notification": list(txn.table("notifications")),
    }
    for kind, ids in pools.items():
        prefix = ID_PREFIXES[kind]
        top = 0
        for value in ids:
            if value.startswith(prefix) and value[len(prefix):].isdigit():
                top = max(top, int(value[len(prefix):]))
        if top > txn.counters.get(kind, 0):
            txn.counters[kind] = top


# -- field helpers ----------------------------------------------------------------

def _require(record: dict, name: str):
    value = record.get(name)
    if value is None:
        raise MalformedRecord(f"missing field '{name}'")
    return value


def _str_tuple(value) -> tuple[str, ...]:
    if value is None:
        return ()
    if not isinstance(value, (list, tuple)):
        raise MalformedRecord("expected a list of strings")
    return tuple(str(v) for v in value)


def _upsert(table: dict, key: str, value) -> str:
    if key not in table:
        table[key] = value
        return "created"
    if table[key] == value:
        return "noop"
    table[key] = value
    return "updated"


# -- record appliers ----------------------------------------------------------------

def _apply_record(txn: Transaction, rtype, record: dict) -> str:
    if rtype == "journal":
        return _apply_journal(txn, record)
    if rtype == "article":
        return _apply_article(txn, record)
    if rtype == "person":
        return _apply_person(txn, record)
    if rtype == "organization":
        return _apply_organization(txn, record)
    if rtype == "version_link":
        return _apply_version_link(txn, record)
    if rtype == "access_policy":
        return _apply_access_policy(txn, record)
    if rtype == "user":
        return _apply_user(txn, record)
    if rtype == "blob":
        return _apply_blob(txn, record)
    if rtype == "manuscript":
        return _apply_manuscript(txn, record)
    if rtype == "flow_record":
        return _apply_flow_record(txn, record)
    if rtype == "assignment":
        return _apply_assignment(txn, record)
    if rtype == "notification":
        return _apply_notification(txn, record)
    raise MalformedRecord(f"unknown record type {rtype!r}")


def _apply_journal(txn: Transaction, record: dict) -> str:
    journal_id = str(_require(record, "journal_id"))
    title = str(_require(record, "title")).strip()
    if not title:
        raise MalformedRecord("empty title")
    aliases = _str_tuple(record.get("aliases"))
    folded = [fold(a) for a in aliases]
    if len(set(folded)) != len(folded):
        raise MalformedRecord("duplicate aliases")
    journal = Journal(
        journal_id=journal_id,
        title=title,
        translated_title=record.get("translated_title"),
        founder=str(record.get("founder", "")),
        publisher=str(record.get("publisher", "")),
        editorial_board=_str_tuple(record.get("editorial_board")),
        aliases=aliases,
        isi_indexed=bool(record.get("isi_indexed", False)),
    )
    return _upsert(txn.mutable("journals"), journal_id, journal)


def _article_key(article: Article):
    first = article.first_page()
    pages_key = first if first is not None else ser.pages_to_json(article.pages) or ""
    return (
        article.journal_id,
        article.year,
        article.volume,
        article.issue,
        pages_key,
        article.title,
    )


def _apply_article(txn: Transaction, record: dict) -> str:
    article_id = str(_require(record, "article_id"))
    journal_id = str(_require(record, "journal_id"))
    if journal_id not in txn.table("journals"):
        raise MalformedRecord(f"unknown journal {journal_id!r}")
    year = record.get("year")
    if not isinstance(year, int) or not (1800 <= year <= txn.current_year):
        raise MalformedRecord("year out of range")
    language = record.get("language", "ru")
    if language not in LANGUAGES:
        raise MalformedRecord(f"invalid language {language!r}")
    authors = _str_tuple(record.get("authors"))
    persons = txn.table("persons")
    aliases = txn.table("person_aliases")
    resolved_authors = []
    for pid in authors:
        resolved = pid
        seen = set()
        while resolved in aliases and resolved not in seen:
            seen.add(resolved)
            resolved = aliases[resolved]
        if resolved not in persons:
            raise MalformedRecord(f"unknown person in authors: {pid!r}")
        resolved_authors.append(resolved)
    citable = bool(record.get("citable", True))
    if citable and not resolved_authors:
        raise MalformedRecord("citable article requires authors")
    article = Article(
        article_id=article_id,
        journal_id=journal_id,
        year=year,
        volume=str(record.get("volume", "")),
        issue=str(record.get("issue", "")),
        pages=ser.pages_from_json(record.get("pages")),
        language=language,
        title=str(record.get("title", "")),
        abstract=str(record.get("abstract", "")),
        keywords=_str_tuple(record.get("keywords")),
        translated_title=record.get("translated_title"),
        translated_abstract=record.get("translated_abstract"),
        translated_keywords=_str_tuple(record.get("translated_keywords")),
        authors=tuple(resolved_authors),
        links=ser.links_from_json(record.get("links")),
        citable=citable,
    )
    keys = _composite_keys(txn)
    existing_id = keys.get(_article_key(article))
    if existing_id is not None and existing_id != article_id:
        raise MalformedRecord("duplicate article key")
    articles = txn.mutable("articles")
    previous = articles.get(article_id)
    outcome = _upsert(articles, article_id, article)
    if previous is not None and outcome != "noop":
        keys.pop(_article_key(previous), None)
    keys[_article_key(article)] = article_id
    add_article_cluster(txn, article_id)
    return outcome


def _composite_keys(txn: Transaction) -> dict:
    # per-transaction index of the article uniqueness key
    cache = getattr(txn, "_composite_keys", None)
    if cache is None:
        cache = {_article_key(a): aid for aid, a in txn.table("articles").items()}
        txn._composite_keys = cache
    return cache


def _apply_person(txn: Transaction, record: dict) -> str:
    person_id = str(_require(record, "person_id"))
    name = ser.person_name_from_json(_require(record, "canonical_name"))
    if not name.family.strip():
        raise MalformedRecord("empty family name")
    organizations = txn.table("organizations")
    affiliations = []
    for item in record.get("affiliations") or ():
        org = str(item.get("organization_id", "")) if isinstance(item, dict) else str(item)
        if org not in organizations:
            raise MalformedRecord(f"unknown organization {org!r}")
        if isinstance(item, dict):
            affiliations.append(
                Affiliation(org, item.get("year_from"), item.get("year_to"))
            )
        else:
            affiliations.append(Affiliation(org))
    person = Person(
        person_id=person_id,
        canonical_name=name,
        name_variants=tuple(
            ser.person_name_from_json(v) for v in record.get("name_variants") or ()
        ),
        affiliations=tuple(affiliations),
        keywords=_str_tuple(record.get("keywords")),
        external_profile_urls=_str_tuple(record.get("external_profile_urls")),
        external_publications=_str_tuple(record.get("external_publications")),
    )
    for source in person.external_publications:
        try:
            parse_reference(source)
        except DomainError as exc:
            raise MalformedRecord(f"bad external publication: {exc.message}")
    return _upsert(txn.mutable("persons"), person_id, person)


def _apply_organization(txn: Transaction, record: dict) -> str:
    organization_id = str(_require(record, "organization_id"))
    name = str(_require(record, "name")).strip()
    if not name:
        raise MalformedRecord("empty name")
    org = Organization(organization_id=organization_id, name=name, url=record.get("url"))
    return _upsert(txn.mutable("organizations"), organization_id, org)


def _apply_version_link(txn: Transaction, record: dict) -> str:
    a = str(_require(record, "a"))
    b = str(_require(record, "b"))
    mapping = txn.table("article_cluster")
    before = (mapping.get(a), mapping.get(b))
    try:
        link_versions_txn(txn, a, b)
    except DomainError as exc:
        raise MalformedRecord(exc.message)
    after = (txn.table("article_cluster").get(a), txn.table("article_cluster").get(b))
    return "noop" if before == after else "updated"


def _apply_access_policy(txn: Transaction, record: dict) -> str:
    journal_id = str(_require(record, "journal_id"))
    if journal_id not in txn.table("journals"):
        raise MalformedRecord(f"unknown journal {journal_id!r}")
    wall = record.get("moving_wall_years", 3)
    if not isinstance(wall, int) or wall < 0:
        raise MalformedRecord("negative moving wall")
    policy = AccessPolicy(journal_id=journal_id, moving_wall_years=wall)
    return _upsert(txn.mutable("policies"), journal_id, policy)


def _apply_user(txn: Transaction, record: dict) -> str:
    user_id = str(_require(record, "user_id"))
    password_hash = record.get("password_hash")
    if not password_hash:
        password = record.get("password")
        if not password:
            raise MalformedRecord("user requires password or password_hash")
        password_hash = hash_password(user_id, str(password))
    roles = []
    for item in record.get("roles") or ():
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise MalformedRecord("invalid role entry")
        journal_id, role = str(item[0]), str(item[1])
        if role not in ROLES:
            raise MalformedRecord(f"invalid role {role!r}")
        roles.append((journal_id, role))
    person_id = record.get("person_id")
    if person_id is not None and str(person_id) not in txn.table("persons"):
        raise MalformedRecord(f"unknown person {person_id!r}")
    user = User(
        user_id=user_id,
        name=str(record.get("name", "")),
        password_hash=str(password_hash),
        roles=tuple(roles),
        person_id=person_id,
    )
    return _upsert(txn.mutable("users"), user_id, user)


def _apply_blob(txn: Transaction, record: dict) -> str:
    content_hash = str(_require(record, "hash"))
    try:
        data = base64.b64decode(str(_require(record, "data")), validate=True)
    except Exception:
        raise MalformedRecord("invalid base64 payload")
    if hashlib.sha256(data).hexdigest() != content_hash:
        raise MalformedRecord("blob hash mismatch")
    return _upsert(txn.mutable("blobs"), content_hash, data)


def _documents_from_json(value) -> tuple[Document, ...]:
    docs = []
    for item in value or ():
        if not isinstance(item, dict):
            raise MalformedRecord("invalid document entry")
        docs.append(ser.document_from_json(item))
    return tuple(docs)


def _apply_manuscript(txn: Transaction, record: dict) -> str:
    manuscript_id = str(_require(record, "manuscript_id"))
    journal_id = str(_require(record, "journal_id"))
    if journal_id not in txn.table("journals"):
        raise MalformedRecord(f"unknown journal {journal_id!r}")
    stage = record.get("current_stage", "Submitted")
    if stage not in EDITORIAL_STAGES:
        raise MalformedRecord(f"invalid stage {stage!r}")
    manuscript = Manuscript(
        manuscript_id=manuscript_id,
        journal_id=journal_id,
        title=str(_require(record, "title")),
        submitted_by=str(_require(record, "submitted_by")),
        authors=_str_tuple(record.get("authors")),
        abstract=str(record.get("abstract", "")),
        keywords=_str_tuple(record.get("keywords")),
        translated_title=record.get("translated_title"),
        translated_abstract=record.get("translated_abstract"),
        translated_keywords=_str_tuple(record.get("translated_keywords")),
        files=_documents_from_json(record.get("files")),
        current_stage=stage,
        created_at=str(record.get("created_at", "")),
    )
    return _upsert(txn.mutable("manuscripts"), manuscript_id, manuscript)


def _apply_flow_record(txn: Transaction, record: dict) -> str:
    record_id = str(_require(record, "record_id"))
    manuscript_id = str(_require(record, "manuscript_id"))
    if manuscript_id not in txn.table("manuscripts"):
        raise MalformedRecord(f"unknown manuscript {manuscript_id!r}")
    entry = FlowRecord(
        record_id=record_id,
        manuscript_id=manuscript_id,
        from_stage=str(_require(record, "from_stage")),
        to_stage=str(_require(record, "to_stage")),
        actor_user=str(_require(record, "actor_user")),
        actor_role=str(_require(record, "actor_role")),
        timestamp=str(_require(record, "timestamp")),
        note=str(record.get("note", "")),
        documents=_documents_from_json(record.get("documents")),
    )
    flows = txn.mutable("flows")
    chain = list(flows.get(manuscript_id, ()))
    existing = next((r for r in chain if r.record_id == record_id), None)
    if existing == entry:
        return "noop"
    if existing is not None:
        raise MalformedRecord("flow records are append-only")
    chain.append(entry)
    chain.sort(key=lambda r: (r.timestamp, r.record_id))
    flows[manuscript_id] = tuple(chain)
    return "created"


def _apply_assignment(txn: Transaction, record: dict) -> str:
    manuscript_id = str(_require(record, "manuscript_id"))
    referee = str(_require(record, "referee"))
    if manuscript_id not in txn.table("manuscripts"):
        raise MalformedRecord(f"unknown manuscript {manuscript_id!r}")
    assignment = RefereeAssignment(
        manuscript_id=manuscript_id,
        referee=referee,
        assigned_by=str(record.get("assigned_by", "")),
        status=str(record.get("status", "invited")),
        label_index=int(record.get("label_index", 1)),
        recommendation=record.get("recommendation"),
        created_at=str(record.get("created_at", "")),
    )
    key = f"{manuscript_id}/{referee}"
    return _upsert(txn.mutable("assignments"), key, assignment)


def _apply_notification(txn: Transaction, record: dict) -> str:
    notification_id = str(_require(record, "notification_id"))
    notification = Notification(
        notification_id=notification_id,
        recipient=str(_require(record, "recipient")),
        template_id=str(record.get("template_id", "")),
        body=str(record.get("body", "")),
        created_at=str(record.get("created_at", "")),
        delivered=bool(record.get("delivered", False)),
    )
    return _upsert(txn.mutable("notifications"), notification_id, notification)


def _apply_reference(txn: Transaction, record: dict, natural_key: dict, resolver_index=None) -> str:
    from ..citegraph.resolve import resolve_reference

    source = str(_require(record, "source"))
    citing_id = str(_require(record, "citing"))
    origin = record.get("origin", "journal_bibliography")
    raw = RawReference(source=source, origin=origin)
    try:
        parsed = parse_reference(raw)
    except DomainError as exc:
        raise MalformedRecord(f"unparseable reference: {exc.message}")

    if citing_id in txn.table("articles"):
        citing = CitingDocument(doc_id=citing_id, kind="article")
    else:
        year = record.get("citing_year")
        if not isinstance(year, int):
            raise MalformedRecord("external citing document requires citing_year")
        citing = CitingDocument(
            doc_id=citing_id,
            kind="external",
            year=year,
            venue_isi=bool(record.get("citing_isi_indexed", False)),
        )

    explicit = record.get("resolution")
    if explicit is not None:
        article_id = str(explicit.get("article_id", ""))
        if article_id not in txn.table("articles"):
            raise MalformedRecord(f"resolution targets unknown article {article_id!r}")
        resolution = Resolution(
            article_id=article_id,
            score=float(explicit.get("score", 1.0)),
            method=str(explicit.get("method", "manual")),
        )
    else:
        hint = record.get("cited_year_hint")
        candidates = resolve_reference(
            txn,
            parsed,
            year_hint=hint if isinstance(hint, int) else None,
            index=resolver_index,
        )
        resolution = candidates[0] if candidates else None

    key = (citing_id, source)
    references = txn.mutable("references")
    existing_id = natural_key.get(key)
    if existing_id is not None:
        current = references[existing_id]
        # manual resolutions survive re-ingestion unless explicitly overridden
        if explicit is None and current.resolution and current.resolution.method == "manual":
            resolution = current.resolution
        updated = StoredReference(
            reference_id=existing_id,
            citing=citing,
            raw=raw,
            parsed=parsed,
            resolution=resolution,
        )
        if updated == current:
            return "noop"
        references[existing_id] = updated
        return "updated"

    reference_id = record.get("reference_id") or txn.next_id("reference")
    reference_id = str(reference_id)
    if reference_id in references:
        raise MalformedRecord(f"duplicate reference_id {reference_id!r}")
    references[reference_id] = StoredReference(
        reference_id=reference_id,
        citing=citing,
        raw=raw,
        parsed=parsed,
        resolution=resolution,
    )
    natural_key[key] = reference_id
    return "created"


# -- canonical export -------------------------------------------------------------

def export_records(state: Snapshot) -> str:
    """Canonical NDJSON export, sorted by (type rank, id); loads back losslessly."""
    lines: list[tuple[int, str, str]] = []

    def emit(rtype: str, sort_id: str, payload: dict) -> None:
        body = {"type": rtype}
        body.update(payload)
        lines.append((ser.TYPE_RANK[rtype], sort_id, ser.dumps(body)))

    for jid, journal in state.journals.items():
        emit("journal", jid, ser.journal_to_json(journal))
    for oid, org in state.organizations.items():
        emit("organization", oid, ser.organization_to_json(org))
    for pid, person in state.persons.items():
        emit("person", pid, ser.person_to_json(person))
    for uid, user in state.users.items():
        emit("user", uid, ser.user_to_json(user))
    for aid, article in state.articles.items():
        emit("article", aid, ser.article_to_json(article))
    for members in state.clusters.values():
        ordered = sorted(members)
        head = ordered[0]
        for other in ordered[1:]:
            emit("version_link", f"{head}:{other}", {"a": head, "b": other})
    for jid, policy in state.policies.items():
        emit("access_policy", jid, ser.access_policy_to_json(policy))
    for rid, reference in state.references.items():
        emit("reference", rid, ser.reference_to_json(reference))
    for content_hash, data in state.blobs.items():
        emit("blob", content_hash, ser.blob_to_json(content_hash, data))
    for mid, manuscript in state.manuscripts.items():
        emit("manuscript", mid, ser.manuscript_to_json(manuscript))
    for chain in state.flows.values():
        for entry in chain:
            emit("flow_record", entry.record_id, ser.flow_record_to_json(entry))
    for key, assignment in state.assignments.items():
        emit("assignment", key, ser.assignment_to_json(assignment))
    for nid, notification in state.notifications.items():
        emit("notification", nid, ser.notification_to_json(notification))

    lines.sort(key=lambda item: (item[0], item[1]))
    return "\n".join(line for _, _, line in lines) + ("\n" if lines else "")
