"""HTTP/JSON API under /api/v1.

Every route carries a role annotation in ROUTE_ROLES; an inventory test
asserts that no mutating route ships without one.  Errors surface as
``{"error": {"code", "message"}}`` with a stable machine code per domain
error class.
"""

from __future__ import annotations

import base64
import binascii
import datetime as _dt
import json
import os
from typing import Optional

from fastapi import Depends, FastAPI, Header, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import serialize as ser
from ..archive.ingest import _apply_article, ingest
from ..archive.records import Affiliation
from ..archive.store import Store, Transaction
from ..citegraph.links import commit_resolution
from ..editorial.workflow import Editorial
from ..errors import (
    BadRequest,
    DomainError,
    DuplicateSuspected,
    Forbidden,
    MalformedRecord,
    StaleCursor,
    Unauthorized,
)
from . import services
from .auth import Session, SessionManager

API = "/api/v1"

STATUS_BY_CODE = {
    "unauthorized": 401,
    "forbidden": 403,
    "unregistered_author": 403,
    "not_assigned": 403,
    "unknown_journal": 404,
    "unknown_article": 404,
    "unknown_cluster": 404,
    "unknown_person": 404,
    "unknown_organization": 404,
    "unknown_reference": 404,
    "unknown_manuscript": 404,
    "unknown_user": 404,
    "same_language_conflict": 409,
    "self_merge": 409,
    "duplicate_suspected": 409,
    "illegal_transition": 409,
    "terminal_state": 409,
    "conflict_of_interest": 409,
    "storage_failure": 500,
}

# (method, path) -> role requirement; "public" and "session" are the
# non-role annotations. The inventory test fails on unannotated mutations.
ROUTE_ROLES: dict[tuple[str, str], str] = {}


def _annotate(method: str, path: str, requirement: str) -> None:
    ROUTE_ROLES[(method, API + path)] = requirement


def _error_response(exc: DomainError) -> JSONResponse:
    status = STATUS_BY_CODE.get(exc.code, 400)
    body = {"error": {"code": exc.code, "message": exc.message}}
    if isinstance(exc, DuplicateSuspected):
        body["error"]["candidates"] = exc.candidates
    return JSONResponse(status_code=status, content=body)


def _decode_cursor(cursor: str) -> tuple[int, int]:
    try:
        payload = json.loads(base64.urlsafe_b64decode(cursor.encode("ascii")))
        return int(payload["v"]), int(payload["o"])
    except (ValueError, KeyError, binascii.Error):
        raise StaleCursor("malformed cursor")


def _encode_cursor(version: int, offset: int) -> str:
    raw = json.dumps({"v": version, "o": offset}).encode("ascii")
    return base64.urlsafe_b64encode(raw).decode("ascii")


def create_app(
    store: Store,
    *,
    editorial: Optional[Editorial] = None,
    sessions: Optional[SessionManager] = None,
    ui_dir: Optional[str] = None,
) -> FastAPI:
    app = FastAPI(title="sciarchive", docs_url=None, redoc_url=None)
    editorial = editorial or Editorial(store)
    sessions = sessions or SessionManager(store)
    app.state.store = store
    app.state.editorial = editorial
    app.state.sessions = sessions

    @app.exception_handler(DomainError)
    async def handle_domain_error(request: Request, exc: DomainError):
        return _error_response(exc)

    def session_dep(authorization: Optional[str] = Header(default=None)) -> Session:
        if not authorization or not authorization.startswith("Bearer "):
            raise Unauthorized("missing bearer token")
        return sessions.authenticate(authorization[len("Bearer "):])

    def require_admin(session: Session) -> None:
        if not any(role == "JournalAdministrator" for _, role in session.roles):
            raise Forbidden("requires a JournalAdministrator role")

    def paginate(items: list, limit: Optional[int], cursor: Optional[str], version: int):
        if limit is None:
            limit = 50
        if limit < 1 or limit > 200:
            raise BadRequest("limit must be between 1 and 200")
        offset = 0
        if cursor is not None:
            _, offset = _decode_cursor(cursor)
        page = items[offset : offset + limit]
        next_cursor = (
            _encode_cursor(version, offset + limit) if offset + limit < len(items) else None
        )
        return page, next_cursor

    def pinned_snapshot(cursor: Optional[str]):
        if cursor is None:
            return store.snapshot()
        version, _ = _decode_cursor(cursor)
        snapshot = store.snapshot_at(version)
        if snapshot is None:
            raise StaleCursor(f"snapshot {version} is no longer retained")
        return snapshot

    # -- health and auth ------------------------------------------------------

    _annotate("GET", "/health", "public")

    @app.get(API + "/health")
    def health():
        return {"status": "ok"}

    _annotate("POST", "/auth/login", "public")

    @app.post(API + "/auth/login")
    def login(body: dict):
        session = sessions.login(str(body.get("user_id", "")), str(body.get("password", "")))
        return {
            "token": session.token,
            "user_id": session.user_id,
            "roles": [list(r) for r in session.roles],
            "expires_at": session.expires_at.isoformat(),
        }

    _annotate("POST", "/auth/logout", "session")

    @app.post(API + "/auth/logout")
    def logout(session: Session = Depends(session_dep)):
        sessions.logout(session.token)
        return {"status": "ok"}

    # -- journals and metrics ---------------------------------------------------

    _annotate("GET", "/journals", "public")

    @app.get(API + "/journals")
    def journals(limit: Optional[int] = None, cursor: Optional[str] = None):
        snapshot = pinned_snapshot(cursor)
        items = services.journals_list(snapshot)
        page, next_cursor = paginate(items, limit, cursor, snapshot.version)
        return {"items": page, "next_cursor": next_cursor, "snapshot": snapshot.version}

    _annotate("GET", "/journals/{journal_id}", "public")

    @app.get(API + "/journals/{journal_id}")
    def journal(journal_id: str):
        return services.journal_json(store.snapshot(), journal_id)

    _annotate("GET", "/journals/{journal_id}/impact-factor", "public")

    @app.get(API + "/journals/{journal_id}/impact-factor")
    def journal_impact(journal_id: str, year: int, horizon: int = 2, mode: str = "integral"):
        try:
            return services.impact_json(store.snapshot(), journal_id, year, horizon, mode)
        except ValueError as exc:
            raise BadRequest(str(exc))

    _annotate("GET", "/journals/{journal_id}/report", "public")

    @app.get(API + "/journals/{journal_id}/report")
    def journal_report(journal_id: str, year: int, horizon: int = 2, peers: str = ""):
        ids = [journal_id] + [j for j in peers.split(",") if j]
        return services.report_json(store.snapshot(), ids, year, horizon)

    _annotate("GET", "/journals/{journal_id}/forthcoming", "public")

    @app.get(API + "/journals/{journal_id}/forthcoming")
    def journal_forthcoming(journal_id: str):
        return services.forthcoming_json(editorial, journal_id)

    _annotate("GET", "/journals/{journal_id}/editorial-report", "editor")

    @app.get(API + "/journals/{journal_id}/editorial-report")
    def journal_editorial_report(
        journal_id: str,
        date_from: str,
        date_to: str,
        session: Session = Depends(session_dep),
    ):
        if not any(
            j == journal_id and r in ("Editor", "JournalAdministrator")
            for j, r in session.roles
        ):
            raise Forbidden("requires an Editor role for this journal")
        start = _dt.datetime.fromisoformat(date_from)
        end = _dt.datetime.fromisoformat(date_to)
        return services.editorial_report_json(editorial, journal_id, start, end)

    _annotate("GET", "/journals/{journal_id}/manuscripts", "editor")

    @app.get(API + "/journals/{journal_id}/manuscripts")
    def journal_manuscripts(journal_id: str, session: Session = Depends(session_dep)):
        if not any(
            j == journal_id and r in ("Editor", "JournalAdministrator")
            for j, r in session.roles
        ):
            raise Forbidden("requires an Editor role for this journal")
        snapshot = store.snapshot()
        if journal_id not in snapshot.journals:
            from ..errors import UnknownJournal

            raise UnknownJournal(f"unknown journal {journal_id!r}")
        items = [
            ser.manuscript_to_json(m)
            for mid, m in sorted(snapshot.manuscripts.items())
            if m.journal_id == journal_id
        ]
        return {"journal_id": journal_id, "manuscripts": items}

    # -- articles ------------------------------------------------------------------

    _annotate("GET", "/articles", "public")

    @app.get(API + "/articles")
    def articles(limit: Optional[int] = None, cursor: Optional[str] = None):
        snapshot = pinned_snapshot(cursor)
        items = services.articles_list(snapshot)
        page, next_cursor = paginate(items, limit, cursor, snapshot.version)
        return {"items": page, "next_cursor": next_cursor, "snapshot": snapshot.version}

    _annotate("POST", "/articles", "admin")

    @app.post(API + "/articles")
    def create_article(body: dict, session: Session = Depends(session_dep)):
        require_admin(session)
        with store.write() as txn:
            outcome = _apply_article(txn, body)
        snapshot = store.snapshot()
        return {
            "outcome": outcome,
            "article": services.article_json(snapshot, str(body.get("article_id"))),
        }

    _annotate("GET", "/articles/{article_id}", "public")

    @app.get(API + "/articles/{article_id}")
    def article(article_id: str):
        return services.article_json(store.snapshot(), article_id)

    _annotate("GET", "/articles/{article_id}/forward-links", "public")

    @app.get(API + "/articles/{article_id}/forward-links")
    def article_links(article_id: str, include_self_citations: bool = True):
        return services.forward_links_json(
            store.snapshot(), article_id, include_self_citations
        )

    _annotate("POST", "/articles/{article_a}/link-version/{article_b}", "admin")

    @app.post(API + "/articles/{article_a}/link-version/{article_b}")
    def link_version(article_a: str, article_b: str, session: Session = Depends(session_dep)):
        require_admin(session)
        cluster_id = store.link_versions(article_a, article_b)
        members = sorted(store.snapshot().clusters[cluster_id])
        return {"cluster_id": cluster_id, "members": members}

    # -- references --------------------------------------------------------------------

    _annotate("POST", "/references/parse", "public")

    @app.post(API + "/references/parse")
    async def parse_ref(request: Request, format: Optional[str] = None):
        source = (await request.body()).decode("utf-8")
        return services.parse_json(source, format)

    _annotate("POST", "/references/resolve", "public")

    @app.post(API + "/references/resolve")
    def resolve_ref(body: dict):
        source = str(body.get("source", ""))
        year_hint = body.get("year_hint")
        return services.resolve_json(
            store.snapshot(), source, year_hint if isinstance(year_hint, int) else None
        )

    _annotate("POST", "/references/{reference_id}/resolution", "admin")

    @app.post(API + "/references/{reference_id}/resolution")
    def set_resolution(reference_id: str, body: dict, session: Session = Depends(session_dep)):
        require_admin(session)
        article_id = body.get("article_id")
        reference = commit_resolution(store, reference_id, article_id)
        return services.reference_api_json(reference)

    _annotate("GET", "/references/search", "public")

    @app.get(API + "/references/search")
    def refs_search(
        title_terms: Optional[str] = None,
        year: Optional[int] = None,
        author_family: Optional[str] = None,
        pages: Optional[str] = None,
        limit: Optional[int] = None,
        cursor: Optional[str] = None,
    ):
        snapshot = pinned_snapshot(cursor)
        result = services.refs_search_json(
            snapshot,
            title_terms=title_terms.split() if title_terms else None,
            year=year,
            author_family=author_family,
            pages=pages,
        )
        page, next_cursor = paginate(result["references"], limit, cursor, snapshot.version)
        return {"references": page, "next_cursor": next_cursor, "snapshot": snapshot.version}

    # -- publication search ----------------------------------------------------------------

    _annotate("GET", "/search", "public")

    @app.get(API + "/search")
    def search(
        title_keywords: Optional[str] = None,
        abstract_keywords: Optional[str] = None,
        author_name: Optional[str] = None,
        organization_name: Optional[str] = None,
        journal_id: Optional[str] = None,
        year_from: Optional[int] = None,
        year_to: Optional[int] = None,
        limit: Optional[int] = None,
        cursor: Optional[str] = None,
    ):
        snapshot = pinned_snapshot(cursor)
        year_range = None
        if year_from is not None or year_to is not None:
            year_range = (year_from or 0, year_to or 9999)
        result = services.search_json(
            snapshot,
            title_keywords=title_keywords.split() if title_keywords else None,
            abstract_keywords=abstract_keywords.split() if abstract_keywords else None,
            author_name=author_name,
            organization_name=organization_name,
            journal_id=journal_id,
            year_range=year_range,
        )
        page, next_cursor = paginate(result["hits"], limit, cursor, snapshot.version)
        return {"hits": page, "next_cursor": next_cursor, "snapshot": snapshot.version}

    # -- persons ---------------------------------------------------------------------------

    _annotate("POST", "/persons", "admin")

    @app.post(API + "/persons")
    def create_person(body: dict, session: Session = Depends(session_dep)):
        require_admin(session)
        affiliation = None
        if body.get("affiliation"):
            aff = body["affiliation"]
            affiliation = Affiliation(
                organization_id=str(aff.get("organization_id", "")),
                year_from=aff.get("year_from"),
                year_to=aff.get("year_to"),
            )
        person_id = store.register_person(
            body.get("canonical_name") or body.get("name"),
            variants=body.get("name_variants") or (),
            affiliation=affiliation,
            force=bool(body.get("force", False)),
        )
        return {"person_id": person_id}

    _annotate("POST", "/persons/{keep}/merge/{absorb}", "admin")

    @app.post(API + "/persons/{keep}/merge/{absorb}")
    def merge_persons(keep: str, absorb: str, session: Session = Depends(session_dep)):
        require_admin(session)
        person = store.merge_persons(keep, absorb)
        return services.person_json(store.snapshot(), person.person_id)

    _annotate("GET", "/persons/{person_id}", "public")

    @app.get(API + "/persons/{person_id}")
    def person(person_id: str):
        return services.person_json(store.snapshot(), person_id)

    _annotate("GET", "/persons/{person_id}/publications", "public")

    @app.get(API + "/persons/{person_id}/publications")
    def person_pubs(person_id: str):
        return services.person_publications_json(store.snapshot(), person_id)

    # -- editorial ---------------------------------------------------------------------------

    _annotate("GET", "/editorial/transitions", "public")

    @app.get(API + "/editorial/transitions")
    def editorial_transitions():
        return services.transitions_json()

    def _decode_file(entry, *, field: str) -> tuple[str, bytes]:
        if not isinstance(entry, dict) or "data" not in entry:
            raise MalformedRecord(f"{field} must carry filename and base64 data")
        try:
            payload = base64.b64decode(str(entry["data"]), validate=True)
        except (binascii.Error, ValueError):
            raise MalformedRecord(f"{field} payload is not valid base64")
        return str(entry.get("filename", field)), payload

    _annotate("POST", "/manuscripts", "author")

    @app.post(API + "/manuscripts")
    def submit_manuscript(body: dict, session: Session = Depends(session_dep)):
        source_latex = (
            _decode_file(body["source_latex"], field="source_latex")
            if body.get("source_latex")
            else None
        )
        source_pdf = (
            _decode_file(body["source_pdf"], field="source_pdf")
            if body.get("source_pdf")
            else None
        )
        manuscript_id = editorial.submit_manuscript(
            session.user_id,
            str(body.get("journal_id", "")),
            body,
            source_latex,
            source_pdf,
        )
        return {"manuscript_id": manuscript_id, "current_stage": "Submitted"}

    _annotate("GET", "/manuscripts/assigned", "referee")

    @app.get(API + "/manuscripts/assigned")
    def assigned_manuscripts(session: Session = Depends(session_dep)):
        snapshot = store.snapshot()
        rows = []
        for assignment in sorted(
            snapshot.assignments.values(), key=lambda a: (a.manuscript_id, a.label_index)
        ):
            if assignment.referee != session.user_id:
                continue
            manuscript = snapshot.manuscripts.get(assignment.manuscript_id)
            rows.append(
                {
                    "assignment": ser.assignment_to_json(assignment),
                    "manuscript": ser.manuscript_to_json(manuscript) if manuscript else None,
                }
            )
        return {"assignments": rows}

    _annotate("GET", "/manuscripts/{manuscript_id}/flow", "session")

    @app.get(API + "/manuscripts/{manuscript_id}/flow")
    def manuscript_flow(manuscript_id: str, session: Session = Depends(session_dep)):
        return editorial.view_flow(manuscript_id, session.user_id)

    _annotate("POST", "/manuscripts/{manuscript_id}/transitions", "session")

    @app.post(API + "/manuscripts/{manuscript_id}/transitions")
    def manuscript_transition(
        manuscript_id: str, body: dict, session: Session = Depends(session_dep)
    ):
        documents = []
        for entry in body.get("documents") or ():
            filename, payload = _decode_file(entry, field="document")
            documents.append((str(entry.get("role", "revision")), filename, payload))
        record = editorial.transition(
            manuscript_id,
            str(body.get("to_stage", "")),
            session.user_id,
            note=str(body.get("note", "")),
            documents=documents,
        )
        return ser.flow_record_to_json(record)

    _annotate("POST", "/manuscripts/{manuscript_id}/referees", "editor")

    @app.post(API + "/manuscripts/{manuscript_id}/referees")
    def add_referee(manuscript_id: str, body: dict, session: Session = Depends(session_dep)):
        assignment = editorial.assign_referee(
            manuscript_id, str(body.get("referee", "")), session.user_id
        )
        return ser.assignment_to_json(assignment)

    _annotate("POST", "/manuscripts/{manuscript_id}/referee-response", "referee")

    @app.post(API + "/manuscripts/{manuscript_id}/referee-response")
    def referee_response(
        manuscript_id: str, body: dict, session: Session = Depends(session_dep)
    ):
        assignment = editorial.respond_to_assignment(
            manuscript_id, session.user_id, bool(body.get("accept", True))
        )
        return ser.assignment_to_json(assignment)

    _annotate("POST", "/manuscripts/{manuscript_id}/reviews", "referee")

    @app.post(API + "/manuscripts/{manuscript_id}/reviews")
    def submit_review(manuscript_id: str, body: dict, session: Session = Depends(session_dep)):
        filename, payload = _decode_file(body, field="review")
        assignment = editorial.submit_review(
            manuscript_id,
            session.user_id,
            str(body.get("recommendation", "")),
            (filename, payload),
        )
        return ser.assignment_to_json(assignment)

    _annotate("GET", "/manuscripts/{manuscript_id}/documents/{content_hash}", "session")

    @app.get(API + "/manuscripts/{manuscript_id}/documents/{content_hash}")
    def manuscript_document(
        manuscript_id: str, content_hash: str, session: Session = Depends(session_dep)
    ):
        from fastapi.responses import Response

        # reuse the flow view's access rule: participants only
        editorial.view_flow(manuscript_id, session.user_id)
        snapshot = store.snapshot()
        manuscript = snapshot.manuscripts.get(manuscript_id)
        attached = {d.content_hash for d in manuscript.files} | {
            d.content_hash
            for r in snapshot.flows.get(manuscript_id, ())
            for d in r.documents
        }
        payload = snapshot.blobs.get(content_hash)
        if content_hash not in attached or payload is None:
            raise BadRequest("document is not attached to this manuscript")
        return Response(content=payload, media_type="application/octet-stream")

    _annotate("POST", "/manuscripts/{manuscript_id}/revision", "author")

    @app.post(API + "/manuscripts/{manuscript_id}/revision")
    def upload_revision(manuscript_id: str, body: dict, session: Session = Depends(session_dep)):
        filename, payload = _decode_file(body, field="revision")
        record = editorial.upload_revision(
            manuscript_id, session.user_id, filename, payload, note=str(body.get("note", ""))
        )
        return ser.flow_record_to_json(record)

    # -- admin ------------------------------------------------------------------------------

    _annotate("POST", "/admin/ingest", "admin")

    @app.post(API + "/admin/ingest")
    async def admin_ingest(request: Request, session: Session = Depends(session_dep)):
        require_admin(session)
        body = (await request.body()).decode("utf-8")
        report = ingest(store, body)
        return {
            "created": report.created,
            "updated": report.updated,
            "rejected": report.rejected,
            "rejections": [[i, reason] for i, reason in report.rejections],
        }

    _annotate("GET", "/admin/export", "admin")

    @app.get(API + "/admin/export")
    def admin_export(session: Session = Depends(session_dep)):
        require_admin(session)
        from ..archive.ingest import export_records

        return PlainTextResponse(export_records(store.snapshot()))

    # -- static UI --------------------------------------------------------------------------

    if ui_dir and os.path.isdir(ui_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
