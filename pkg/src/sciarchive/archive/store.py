"""Embedded single-writer store with snapshot reads.

State is an immutable table set; a write transaction copies only the tables
it touches and commits by swapping the state pointer, so readers holding a
snapshot never observe partial writes.  When the store is bound to a path the
canonical NDJSON export is rewritten atomically on every commit.
"""

from __future__ import annotations

import datetime as _dt
import os
import threading
from contextlib import contextmanager
from typing import Iterator, Optional

from ..amsbib import PersonName
from ..errors import (
    DuplicateSuspected,
    SameLanguageConflict,
    SelfMerge,
    StorageFailure,
    UnknownArticle,
    UnknownPerson,
)
from ..textutil import fold
from .records import Affiliation, Article, Person, replace

TABLES = (
    "journals",
    "articles",
    "persons",
    "person_aliases",
    "organizations",
    "policies",
    "clusters",
    "article_cluster",
    "references",
    "users",
    "manuscripts",
    "flows",
    "assignments",
    "notifications",
    "blobs",
)

ID_PREFIXES = {
    "person": "p-",
    "reference": "ref-",
    "manuscript": "ms-",
    "flow_record": "fr-",
    "notification": "nt-",
}


class Snapshot:
    """One immutable version of the full store state."""

    __slots__ = ("version", "tables", "counters", "current_year",
                 "fuzzy_threshold", "moving_wall_default", "_derived")

    def __init__(self, version, tables, counters, current_year,
                 fuzzy_threshold, moving_wall_default):
        self.version = version
        self.tables = tables
        self.counters = counters
        self.current_year = current_year
        self.fuzzy_threshold = fuzzy_threshold
        self.moving_wall_default = moving_wall_default
        self._derived: dict = {}

    # table accessors -------------------------------------------------------

    @property
    def journals(self) -> dict:
        return self.tables["journals"]

    @property
    def articles(self) -> dict:
        return self.tables["articles"]

    @property
    def persons(self) -> dict:
        return self.tables["persons"]

    @property
    def person_aliases(self) -> dict:
        return self.tables["person_aliases"]

    @property
    def organizations(self) -> dict:
        return self.tables["organizations"]

    @property
    def policies(self) -> dict:
        return self.tables["policies"]

    @property
    def clusters(self) -> dict:
        return self.tables["clusters"]

    @property
    def article_cluster(self) -> dict:
        return self.tables["article_cluster"]

    @property
    def references(self) -> dict:
        return self.tables["references"]

    @property
    def users(self) -> dict:
        return self.tables["users"]

    @property
    def manuscripts(self) -> dict:
        return self.tables["manuscripts"]

    @property
    def flows(self) -> dict:
        return self.tables["flows"]

    @property
    def assignments(self) -> dict:
        return self.tables["assignments"]

    @property
    def notifications(self) -> dict:
        return self.tables["notifications"]

    @property
    def blobs(self) -> dict:
        return self.tables["blobs"]

    # derived, memoized per snapshot -----------------------------------------

    def derived(self, key: str, build):
        try:
            return self._derived[key]
        except KeyError:
            value = build()
            self._derived[key] = value
            return value

    # common lookups ----------------------------------------------------------

    def article(self, article_id: str) -> Article:
        try:
            return self.articles[article_id]
        except KeyError:
            raise UnknownArticle(f"unknown article {article_id!r}") from None

    def resolve_person_id(self, person_id: str) -> str:
        seen = set()
        current = person_id
        while current in self.person_aliases:
            if current in seen:  # defensive; merge never creates cycles
                break
            seen.add(current)
            current = self.person_aliases[current]
        return current

    def person(self, person_id: str) -> Person:
        resolved = self.resolve_person_id(person_id)
        try:
            return self.persons[resolved]
        except KeyError:
            raise UnknownPerson(f"unknown person {person_id!r}") from None

    def cluster_of(self, article_id: str) -> str:
        self.article(article_id)
        return self.article_cluster[article_id]

    def moving_wall(self, journal_id: str) -> int:
        policy = self.policies.get(journal_id)
        return policy.moving_wall_years if policy else self.moving_wall_default


def _empty_tables() -> dict:
    return {name: {} for name in TABLES}


class Transaction:
    """Copy-on-first-write staging over a base snapshot."""

    def __init__(self, base: Snapshot):
        self.base = base
        self._staged: dict = {}
        self.counters = dict(base.counters)
        self.current_year = base.current_year
        self.fuzzy_threshold = base.fuzzy_threshold
        self.moving_wall_default = base.moving_wall_default

    def table(self, name: str) -> dict:
        if name in self._staged:
            return self._staged[name]
        return self.base.tables[name]

    def mutable(self, name: str) -> dict:
        if name not in self._staged:
            self._staged[name] = dict(self.base.tables[name])
        return self._staged[name]

    # mirrors of Snapshot accessors used by shared query code
    @property
    def journals(self) -> dict:
        return self.table("journals")

    @property
    def articles(self) -> dict:
        return self.table("articles")

    @property
    def persons(self) -> dict:
        return self.table("persons")

    @property
    def person_aliases(self) -> dict:
        return self.table("person_aliases")

    @property
    def organizations(self) -> dict:
        return self.table("organizations")

    @property
    def policies(self) -> dict:
        return self.table("policies")

    @property
    def clusters(self) -> dict:
        return self.table("clusters")

    @property
    def article_cluster(self) -> dict:
        return self.table("article_cluster")

    @property
    def references(self) -> dict:
        return self.table("references")

    @property
    def users(self) -> dict:
        return self.table("users")

    @property
    def manuscripts(self) -> dict:
        return self.table("manuscripts")

    @property
    def flows(self) -> dict:
        return self.table("flows")

    @property
    def assignments(self) -> dict:
        return self.table("assignments")

    @property
    def notifications(self) -> dict:
        return self.table("notifications")

    @property
    def blobs(self) -> dict:
        return self.table("blobs")

    def next_id(self, kind: str) -> str:
        prefix = ID_PREFIXES[kind]
        value = self.counters.get(kind, 0) + 1
        self.counters[kind] = value
        return f"{prefix}{value:06d}"

    def freeze(self, version: int, **config) -> Snapshot:
        tables = dict(self.base.tables)
        tables.update(self._staged)
        return Snapshot(
            version=version,
            tables=tables,
            counters=self.counters,
            current_year=config.get("current_year", self.current_year),
            fuzzy_threshold=config.get("fuzzy_threshold", self.fuzzy_threshold),
            moving_wall_default=config.get("moving_wall_default", self.moving_wall_default),
        )


class Store:
    """Single-writer, multi-reader store."""

    SNAPSHOT_HISTORY = 16

    def __init__(
        self,
        path: Optional[str] = None,
        *,
        current_year: Optional[int] = None,
        fuzzy_threshold: float = 0.75,
        moving_wall_default: int = 3,
    ):
        self.path = path
        self._write_lock = threading.Lock()
        self._state = Snapshot(
            version=0,
            tables=_empty_tables(),
            counters={},
            current_year=current_year or _dt.date.today().year,
            fuzzy_threshold=fuzzy_threshold,
            moving_wall_default=moving_wall_default,
        )
        self._history: dict[int, Snapshot] = {0: self._state}
        if path and os.path.exists(path):
            self._load(path)

    # -- snapshots ------------------------------------------------------------

    def snapshot(self) -> Snapshot:
        return self._state

    def snapshot_at(self, version: int) -> Optional[Snapshot]:
        return self._history.get(version)

    @contextmanager
    def write(self) -> Iterator[Transaction]:
        with self._write_lock:
            txn = Transaction(self._state)
            yield txn
            state = txn.freeze(self._state.version + 1)
            self._persist(state)
            self._state = state
            self._history[state.version] = state
            while len(self._history) > self.SNAPSHOT_HISTORY:
                del self._history[min(self._history)]

    # -- persistence ------------------------------------------------------------

    def _persist(self, state: Snapshot) -> None:
        if not self.path:
            return
        from .ingest import export_records  # deferred: avoids import cycle

        text = export_records(state)
        tmp = f"{self.path}.tmp.{os.getpid()}"
        try:
            with open(tmp, "w", encoding="utf-8") as fh:
                fh.write(text)
            os.replace(tmp, self.path)
        except OSError as exc:
            raise StorageFailure(f"cannot persist store: {exc}") from exc

    def _load(self, path: str) -> None:
        from .ingest import ingest  # deferred: avoids import cycle

        try:
            with open(path, "r", encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except OSError as exc:
            raise StorageFailure(f"cannot read store: {exc}") from exc
        report = ingest(self, lines, _loading=True)
        if report.rejected:
            raise StorageFailure(
                f"store file is corrupt: {report.rejections[:3]}",
                rejections=report.rejections,
            )

    # -- archive mutations --------------------------------------------------------

    def link_versions(self, article_id_a: str, article_id_b: str) -> str:
        with self.write() as txn:
            return link_versions_txn(txn, article_id_a, article_id_b)

    def register_person(
        self,
        name,
        variants=(),
        affiliation: Optional[Affiliation] = None,
        *,
        force: bool = False,
    ) -> str:
        with self.write() as txn:
            return register_person_txn(txn, name, variants, affiliation, force=force)

    def merge_persons(self, keep: str, absorb: str) -> Person:
        with self.write() as txn:
            return merge_persons_txn(txn, keep, absorb)

    def attach_external_publication(self, person_id: str, source: str) -> Person:
        from ..amsbib import parse_reference

        parse_reference(source)  # validates markup before storing
        with self.write() as txn:
            resolved = _resolve_alias(txn, person_id)
            persons = txn.mutable("persons")
            if resolved not in persons:
                raise UnknownPerson(f"unknown person {person_id!r}")
            person = persons[resolved]
            if source not in person.external_publications:
                persons[resolved] = replace(
                    person,
                    external_publications=person.external_publications + (source,),
                )
            return persons[resolved]


# -- transaction-level operations (shared with ingest) ---------------------------


def _resolve_alias(txn: Transaction, person_id: str) -> str:
    aliases = txn.table("person_aliases")
    current = person_id
    seen = set()
    while current in aliases and current not in seen:
        seen.add(current)
        current = aliases[current]
    return current


def singleton_cluster_id(article_id: str) -> str:
    return f"cl-{article_id}"


def add_article_cluster(txn: Transaction, article_id: str) -> None:
    """Ensure a (singleton) cluster exists for a newly created article."""
    mapping = txn.mutable("article_cluster")
    if article_id in mapping:
        return
    clusters = txn.mutable("clusters")
    cid = singleton_cluster_id(article_id)
    mapping[article_id] = cid
    clusters[cid] = frozenset({article_id})


def link_versions_txn(txn: Transaction, a: str, b: str) -> str:
    articles = txn.table("articles")
    if a not in articles:
        raise UnknownArticle(f"unknown article {a!r}")
    if b not in articles:
        raise UnknownArticle(f"unknown article {b!r}")
    mapping = txn.mutable("article_cluster")
    clusters = txn.mutable("clusters")
    ca, cb = mapping[a], mapping[b]
    if ca == cb:
        return ca
    members = clusters[ca] | clusters[cb]
    languages = [articles[m].language for m in members]
    if len(set(languages)) != len(languages):
        raise SameLanguageConflict(
            f"cluster would hold two articles with one language: {a!r}, {b!r}"
        )
    keep, drop = (ca, cb) if ca <= cb else (cb, ca)
    clusters[keep] = frozenset(members)
    del clusters[drop]
    for member in members:
        mapping[member] = keep
    return keep


def _initials(given: str) -> str:
    return "".join(fold(tok)[:1] for tok in given.replace(".", ". ").split() if tok)


def _as_person_name(name) -> PersonName:
    from ..amsbib import parse_person_name

    if isinstance(name, PersonName):
        return name
    if isinstance(name, dict):
        return PersonName(
            family=name.get("family", ""),
            given=name.get("given", ""),
            variant=name.get("variant"),
        )
    return parse_person_name(str(name))


def register_person_txn(
    txn: Transaction,
    name,
    variants=(),
    affiliation: Optional[Affiliation] = None,
    *,
    force: bool = False,
) -> str:
    canonical = _as_person_name(name)
    if not canonical.family:
        raise UnknownPerson("person requires a non-empty family name")
    if not force:
        family_key = fold(canonical.family)
        initials_key = _initials(canonical.given)
        candidates = sorted(
            pid
            for pid, person in txn.table("persons").items()
            if fold(person.canonical_name.family) == family_key
            and _initials(person.canonical_name.given) == initials_key
        )
        if candidates:
            raise DuplicateSuspected(
                f"{canonical.display()} matches {len(candidates)} registered person(s)",
                candidates=candidates,
            )
    person_id = txn.next_id("person")
    persons = txn.mutable("persons")
    persons[person_id] = Person(
        person_id=person_id,
        canonical_name=canonical,
        name_variants=tuple(_as_person_name(v) for v in variants),
        affiliations=(affiliation,) if affiliation else (),
    )
    return person_id


def merge_persons_txn(txn: Transaction, keep: str, absorb: str) -> Person:
    if keep == absorb:
        raise SelfMerge(f"cannot merge person {keep!r} into itself")
    keep_id = _resolve_alias(txn, keep)
    absorb_id = _resolve_alias(txn, absorb)
    persons = txn.mutable("persons")
    if keep_id not in persons:
        raise UnknownPerson(f"unknown person {keep!r}")
    if absorb_id not in persons:
        raise UnknownPerson(f"unknown person {absorb!r}")
    if keep_id == absorb_id:  # already merged, idempotent
        return persons[keep_id]

    target = persons[keep_id]
    source = persons[absorb_id]
    variants = list(target.name_variants)
    for candidate in (source.canonical_name, *source.name_variants):
        if candidate != target.canonical_name and candidate not in variants:
            variants.append(candidate)
    affiliations = list(target.affiliations)
    for aff in source.affiliations:
        if aff not in affiliations:
            affiliations.append(aff)
    persons[keep_id] = replace(
        target,
        name_variants=tuple(variants),
        affiliations=tuple(affiliations),
        keywords=target.keywords
        + tuple(k for k in source.keywords if k not in target.keywords),
        external_profile_urls=target.external_profile_urls
        + tuple(u for u in source.external_profile_urls if u not in target.external_profile_urls),
        external_publications=target.external_publications
        + tuple(s for s in source.external_publications if s not in target.external_publications),
    )
    del persons[absorb_id]

    aliases = txn.mutable("person_aliases")
    aliases[absorb_id] = keep_id
    for alias, dest in list(aliases.items()):
        if dest == absorb_id:
            aliases[alias] = keep_id

    articles = txn.mutable("articles")
    for aid, article in list(articles.items()):
        if absorb_id in article.authors:
            articles[aid] = replace(
                article,
                authors=tuple(keep_id if p == absorb_id else p for p in article.authors),
            )
    journals = txn.mutable("journals")
    for jid, journal in list(journals.items()):
        if absorb_id in journal.editorial_board:
            journals[jid] = replace(
                journal,
                editorial_board=tuple(
                    keep_id if p == absorb_id else p for p in journal.editorial_board
                ),
            )
    manuscripts = txn.mutable("manuscripts")
    for mid, manuscript in list(manuscripts.items()):
        if absorb_id in manuscript.authors:
            manuscripts[mid] = replace(
                manuscript,
                authors=tuple(keep_id if p == absorb_id else p for p in manuscript.authors),
            )
    return persons[keep_id]
