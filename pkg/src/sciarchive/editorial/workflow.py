"""Stage state machine, role checks, redaction, notifications and reports.

The paper flow of a manuscript is an append-only chain of records: each
record links the previous stage to the next (review uploads are self loops),
timestamps are strictly monotone per manuscript, and replaying the chain
reproduces the current stage.
"""

from __future__ import annotations

import datetime as _dt
import hashlib
from typing import Callable, Optional

from ..archive.records import (
    DOCUMENT_ROLES,
    Document,
    FlowRecord,
    Manuscript,
    Notification,
    RefereeAssignment,
    replace,
)
from ..archive.store import Store, Transaction
from ..errors import (
    ConflictOfInterest,
    Forbidden,
    IllegalTransition,
    MissingFile,
    NotAssigned,
    TerminalState,
    UnknownJournal,
    UnknownManuscript,
    UnknownPerson,
    UnknownUser,
    UnregisteredAuthor,
)

STAGES = (
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

TERMINAL_STAGES = frozenset({"PublishedPrint", "Rejected", "Withdrawn"})

# Editors drive the production chain; authors may withdraw and resubmit after
# revision; translation stages are skippable for journals without an English
# version.
TRANSITIONS: dict[str, frozenset] = {
    "Submitted": frozenset({"Classification", "Rejected", "Withdrawn"}),
    "Classification": frozenset({"PeerReview", "Rejected"}),
    "PeerReview": frozenset({"AuthorsRevision", "ScientificEditing", "Rejected"}),
    "AuthorsRevision": frozenset({"PeerReview", "ScientificEditing", "Withdrawn"}),
    "ScientificEditing": frozenset({"Translation", "Forthcoming"}),
    "Translation": frozenset({"EnglishEditing"}),
    "EnglishEditing": frozenset({"Forthcoming"}),
    "Forthcoming": frozenset({"PublishedOnline"}),
    "PublishedOnline": frozenset({"PublishedPrint"}),
    "Rejected": frozenset(),
    "Withdrawn": frozenset(),
    "PublishedPrint": frozenset(),
}

ROLES = ("Author", "Referee", "Editor", "JournalAdministrator")

RECOMMENDATIONS = ("accept", "minor", "major", "reject")


def allowed_roles(from_stage: str, to_stage: str) -> frozenset:
    """Roles permitted on a transition edge (edge validity checked separately)."""
    if to_stage == "Withdrawn":
        return frozenset({"Author", "JournalAdministrator"})
    if from_stage == "AuthorsRevision" and to_stage == "PeerReview":
        # the author's revision resubmission
        return frozenset({"Author", "Editor", "JournalAdministrator"})
    return frozenset({"Editor", "JournalAdministrator"})


# to-stage -> (recipient rule, template). Recipient rules: "editors" notifies
# every editor of the journal, "author" the submitting user.
NOTIFICATION_TABLE: dict[str, tuple[str, str]] = {
    "Submitted": ("editors", "new_submission"),
    "AuthorsRevision": ("author", "revision_requested"),
    "Rejected": ("author", "manuscript_rejected"),
    "Withdrawn": ("editors", "manuscript_withdrawn"),
    "Forthcoming": ("author", "manuscript_accepted"),
    "PublishedOnline": ("author", "published_online"),
}

EVENT_TEMPLATES = {
    "referee_assigned": "You are invited to review manuscript {manuscript_id}.",
    "review_submitted": "A review for manuscript {manuscript_id} was submitted.",
    "new_submission": "New submission {manuscript_id} awaits processing.",
    "revision_requested": "Manuscript {manuscript_id} was returned for revision.",
    "manuscript_rejected": "Manuscript {manuscript_id} was rejected.",
    "manuscript_withdrawn": "Manuscript {manuscript_id} was withdrawn.",
    "manuscript_accepted": "Manuscript {manuscript_id} was accepted for publication.",
    "published_online": "Manuscript {manuscript_id} is published online.",
}


def _utcnow() -> _dt.datetime:
    return _dt.datetime.now(_dt.timezone.utc)


class Editorial:
    """Workflow operations over the shared store."""

    def __init__(self, store: Store, clock: Optional[Callable[[], _dt.datetime]] = None):
        self.store = store
        self.clock = clock or _utcnow

    # -- helpers ---------------------------------------------------------------

    def _user(self, txn: Transaction, user_id: str):
        user = txn.table("users").get(user_id)
        if user is None:
            raise UnknownUser(f"unknown user {user_id!r}")
        return user

    def _manuscript(self, txn, manuscript_id: str) -> Manuscript:
        manuscript = txn.table("manuscripts").get(manuscript_id) if isinstance(
            txn, Transaction
        ) else txn.manuscripts.get(manuscript_id)
        if manuscript is None:
            raise UnknownManuscript(f"unknown manuscript {manuscript_id!r}")
        return manuscript

    def _timestamp(self, txn: Transaction, manuscript_id: str) -> str:
        now = self.clock()
        if now.tzinfo is None:
            now = now.replace(tzinfo=_dt.timezone.utc)
        chain = txn.table("flows").get(manuscript_id, ())
        if chain:
            previous = _dt.datetime.fromisoformat(chain[-1].timestamp)
            if now <= previous:
                now = previous + _dt.timedelta(microseconds=1)
        return now.isoformat()

    def _store_document(
        self,
        txn: Transaction,
        role: str,
        filename: str,
        payload: bytes,
        uploaded_by: str,
        timestamp: str,
    ) -> Document:
        if role not in DOCUMENT_ROLES:
            raise MissingFile(f"unknown document role {role!r}")
        content_hash = hashlib.sha256(payload).hexdigest()
        blobs = txn.mutable("blobs")
        blobs.setdefault(content_hash, payload)  # duplicate uploads dedupe
        return Document(
            role=role,
            content_hash=content_hash,
            filename=filename,
            uploaded_by=uploaded_by,
            timestamp=timestamp,
        )

    def _notify(
        self, txn: Transaction, recipient: str, template_id: str, manuscript_id: str, created_at: str
    ) -> None:
        body = EVENT_TEMPLATES[template_id].format(manuscript_id=manuscript_id)
        notifications = txn.mutable("notifications")
        notification_id = txn.next_id("notification")
        notifications[notification_id] = Notification(
            notification_id=notification_id,
            recipient=recipient,
            template_id=template_id,
            body=body,
            created_at=created_at,
            delivered=False,
        )

    def _journal_editors(self, txn: Transaction, journal_id: str) -> list[str]:
        return sorted(
            uid
            for uid, user in txn.table("users").items()
            if user.has_role(journal_id, "Editor")
        )

    def _notify_for_stage(
        self, txn: Transaction, manuscript: Manuscript, to_stage: str, created_at: str
    ) -> None:
        rule = NOTIFICATION_TABLE.get(to_stage)
        if rule is None:
            return
        recipient_rule, template = rule
        if recipient_rule == "author":
            self._notify(txn, manuscript.submitted_by, template, manuscript.manuscript_id, created_at)
        else:
            for editor in self._journal_editors(txn, manuscript.journal_id):
                self._notify(txn, editor, template, manuscript.manuscript_id, created_at)

    def _append_record(
        self,
        txn: Transaction,
        manuscript: Manuscript,
        to_stage: str,
        actor_user: str,
        actor_role: str,
        note: str,
        documents: tuple[Document, ...],
        timestamp: str,
    ) -> FlowRecord:
        flows = txn.mutable("flows")
        chain = list(flows.get(manuscript.manuscript_id, ()))
        record = FlowRecord(
            record_id=txn.next_id("flow_record"),
            manuscript_id=manuscript.manuscript_id,
            from_stage=manuscript.current_stage if chain else "Submitted",
            to_stage=to_stage,
            actor_user=actor_user,
            actor_role=actor_role,
            timestamp=timestamp,
            note=note,
            documents=documents,
        )
        chain.append(record)
        flows[manuscript.manuscript_id] = tuple(chain)
        manuscripts = txn.mutable("manuscripts")
        manuscripts[manuscript.manuscript_id] = replace(
            manuscript,
            current_stage=to_stage,
            files=manuscript.files + documents,
        )
        return record

    # -- operations ---------------------------------------------------------------

    def submit_manuscript(
        self,
        author_user: str,
        journal_id: str,
        metadata: dict,
        source_latex: Optional[tuple[str, bytes]],
        source_pdf: Optional[tuple[str, bytes]],
    ) -> str:
        """Create a manuscript at stage Submitted with both required files."""
        with self.store.write() as txn:
            user = self._user(txn, author_user)
            if journal_id not in txn.table("journals"):
                raise UnknownJournal(f"unknown journal {journal_id!r}")
            if not user.has_role(journal_id, "Author"):
                raise UnregisteredAuthor(
                    f"user {author_user!r} is not a registered author of {journal_id!r}"
                )
            if not source_latex or not source_latex[1]:
                raise MissingFile("manuscript requires a LaTeX source file")
            if not source_pdf or not source_pdf[1]:
                raise MissingFile("manuscript requires a PDF file")
            title = str(metadata.get("title", "")).strip()
            if not title:
                raise MissingFile("manuscript requires a title")
            persons = txn.table("persons")
            aliases = txn.table("person_aliases")
            authors = []
            for pid in metadata.get("authors") or ():
                resolved = pid
                seen = set()
                while resolved in aliases and resolved not in seen:
                    seen.add(resolved)
                    resolved = aliases[resolved]
                if resolved not in persons:
                    raise UnknownPerson(f"unknown person {pid!r} in authors")
                authors.append(resolved)
            if not authors:
                raise UnknownPerson("manuscript requires at least one registered author")

            manuscript_id = txn.next_id("manuscript")
            created_at = self._timestamp(txn, manuscript_id)
            latex_doc = self._store_document(
                txn, "source_latex", source_latex[0], source_latex[1], author_user, created_at
            )
            pdf_doc = self._store_document(
                txn, "source_pdf", source_pdf[0], source_pdf[1], author_user, created_at
            )
            manuscript = Manuscript(
                manuscript_id=manuscript_id,
                journal_id=journal_id,
                title=title,
                submitted_by=author_user,
                authors=tuple(authors),
                abstract=str(metadata.get("abstract", "")),
                keywords=tuple(metadata.get("keywords") or ()),
                translated_title=metadata.get("translated_title"),
                translated_abstract=metadata.get("translated_abstract"),
                translated_keywords=tuple(metadata.get("translated_keywords") or ()),
                created_at=created_at,
            )
            txn.mutable("manuscripts")[manuscript_id] = manuscript
            self._append_record(
                txn,
                manuscript,
                "Submitted",
                author_user,
                "Author",
                "manuscript submitted",
                (latex_doc, pdf_doc),
                created_at,
            )
            self._notify_for_stage(txn, manuscript, "Submitted", created_at)
            return manuscript_id

    def transition(
        self,
        manuscript_id: str,
        to_stage: str,
        actor_user: str,
        note: str = "",
        documents: Optional[list[tuple[str, str, bytes]]] = None,
    ) -> FlowRecord:
        """Move a manuscript along one permitted edge of the stage graph."""
        if to_stage not in STAGES:
            raise IllegalTransition(f"unknown stage {to_stage!r}")
        with self.store.write() as txn:
            manuscript = self._manuscript(txn, manuscript_id)
            actor = self._user(txn, actor_user)
            current = manuscript.current_stage
            if current in TERMINAL_STAGES:
                raise TerminalState(f"manuscript is terminal at {current}")
            if to_stage not in TRANSITIONS[current]:
                raise IllegalTransition(f"no edge {current} -> {to_stage}")
            permitted = allowed_roles(current, to_stage)
            role = self._acting_role(actor, manuscript, permitted)
            if role is None:
                raise Forbidden(
                    f"user {actor_user!r} may not drive {current} -> {to_stage}"
                )
            timestamp = self._timestamp(txn, manuscript_id)
            docs = tuple(
                self._store_document(txn, doc_role, filename, payload, actor_user, timestamp)
                for doc_role, filename, payload in (documents or [])
            )
            record = self._append_record(
                txn, manuscript, to_stage, actor_user, role, note, docs, timestamp
            )
            self._notify_for_stage(txn, manuscript, to_stage, timestamp)
            return record

    def _acting_role(self, actor, manuscript: Manuscript, permitted) -> Optional[str]:
        journal_id = manuscript.journal_id
        if "JournalAdministrator" in permitted and actor.has_role(
            journal_id, "JournalAdministrator"
        ):
            return "JournalAdministrator"
        if "Editor" in permitted and actor.has_role(journal_id, "Editor"):
            return "Editor"
        if (
            "Author" in permitted
            and actor.has_role(journal_id, "Author")
            and actor.user_id == manuscript.submitted_by
        ):
            return "Author"
        return None

    def upload_revision(
        self, manuscript_id: str, author_user: str, filename: str, payload: bytes, note: str = ""
    ) -> FlowRecord:
        """Author uploads a revised version while the manuscript sits in
        AuthorsRevision; recorded as a self-loop flow record."""
        with self.store.write() as txn:
            manuscript = self._manuscript(txn, manuscript_id)
            actor = self._user(txn, author_user)
            if manuscript.current_stage != "AuthorsRevision":
                raise IllegalTransition("revisions are accepted only during AuthorsRevision")
            if actor.user_id != manuscript.submitted_by or not actor.has_role(
                manuscript.journal_id, "Author"
            ):
                raise Forbidden("only the submitting author may upload a revision")
            timestamp = self._timestamp(txn, manuscript_id)
            doc = self._store_document(
                txn, "revision", filename, payload, author_user, timestamp
            )
            return self._append_record(
                txn,
                manuscript,
                manuscript.current_stage,
                author_user,
                "Author",
                note or "revision uploaded",
                (doc,),
                timestamp,
            )

    # -- referees ---------------------------------------------------------------

    def assign_referee(
        self, manuscript_id: str, referee_user: str, editor_user: str
    ) -> RefereeAssignment:
        with self.store.write() as txn:
            manuscript = self._manuscript(txn, manuscript_id)
            editor = self._user(txn, editor_user)
            referee = self._user(txn, referee_user)
            if not editor.has_role(manuscript.journal_id, "Editor", "JournalAdministrator"):
                raise Forbidden(f"user {editor_user!r} is not an editor of this journal")
            if manuscript.current_stage not in ("Classification", "PeerReview"):
                raise IllegalTransition(
                    "referees are assigned during Classification or PeerReview"
                )
            if not referee.has_role(manuscript.journal_id, "Referee"):
                raise Forbidden(f"user {referee_user!r} has no Referee role here")
            if referee_user == manuscript.submitted_by or (
                referee.person_id and referee.person_id in manuscript.authors
            ):
                raise ConflictOfInterest("a referee may not review their own manuscript")
            assignments = txn.mutable("assignments")
            key = f"{manuscript_id}/{referee_user}"
            if key in assignments:
                return assignments[key]
            label_index = (
                max(
                    (a.label_index for a in assignments.values() if a.manuscript_id == manuscript_id),
                    default=0,
                )
                + 1
            )
            created_at = self._timestamp(txn, manuscript_id)
            assignment = RefereeAssignment(
                manuscript_id=manuscript_id,
                referee=referee_user,
                assigned_by=editor_user,
                status="invited",
                label_index=label_index,
                created_at=created_at,
            )
            assignments[key] = assignment
            self._notify(txn, referee_user, "referee_assigned", manuscript_id, created_at)
            return assignment

    def respond_to_assignment(
        self, manuscript_id: str, referee_user: str, accept: bool
    ) -> RefereeAssignment:
        with self.store.write() as txn:
            assignments = txn.mutable("assignments")
            key = f"{manuscript_id}/{referee_user}"
            if key not in assignments:
                raise NotAssigned(f"user {referee_user!r} is not assigned to {manuscript_id!r}")
            assignment = assignments[key]
            assignments[key] = replace(
                assignment, status="accepted" if accept else "declined"
            )
            return assignments[key]

    def submit_review(
        self,
        manuscript_id: str,
        referee_user: str,
        recommendation: str,
        review_file: tuple[str, bytes],
    ) -> RefereeAssignment:
        """Attach a review document; the assignment becomes reported."""
        if recommendation not in RECOMMENDATIONS:
            raise IllegalTransition(f"unknown recommendation {recommendation!r}")
        with self.store.write() as txn:
            manuscript = self._manuscript(txn, manuscript_id)
            assignments = txn.mutable("assignments")
            key = f"{manuscript_id}/{referee_user}"
            assignment = assignments.get(key)
            if assignment is None:
                raise NotAssigned(f"user {referee_user!r} is not assigned to {manuscript_id!r}")
            if assignment.status not in ("accepted", "invited"):
                raise NotAssigned(f"assignment is {assignment.status}, not accepted")
            if assignment.status == "invited":
                raise NotAssigned("assignment must be accepted before reviewing")
            timestamp = self._timestamp(txn, manuscript_id)
            doc = self._store_document(
                txn, "review", review_file[0], review_file[1], referee_user, timestamp
            )
            self._append_record(
                txn,
                manuscript,
                manuscript.current_stage,
                referee_user,
                "Referee",
                "review submitted",
                (doc,),
                timestamp,
            )
            assignments[key] = replace(assignment, status="reported", recommendation=recommendation)
            for editor in self._journal_editors(txn, manuscript.journal_id):
                self._notify(txn, editor, "review_submitted", manuscript_id, timestamp)
            return assignments[key]

    # -- views ---------------------------------------------------------------------

    def view_flow(self, manuscript_id: str, viewer_user: str) -> dict:
        """Role-dependent view of the paper flow.

        Editors see everything; the submitting author sees the whole chain
        with referees replaced by stable anonymous labels; referees see the
        stage history plus their own records; everyone else is refused.
        """
        state = self.store.snapshot()
        manuscript = state.manuscripts.get(manuscript_id)
        if manuscript is None:
            raise UnknownManuscript(f"unknown manuscript {manuscript_id!r}")
        viewer = state.users.get(viewer_user)
        if viewer is None:
            raise Forbidden(f"unknown user {viewer_user!r}")
        chain = state.flows.get(manuscript_id, ())
        assignments = sorted(
            (a for a in state.assignments.values() if a.manuscript_id == manuscript_id),
            key=lambda a: a.label_index,
        )

        from .. import serialize as ser

        if viewer.has_role(manuscript.journal_id, "Editor", "JournalAdministrator"):
            return {
                "manuscript": ser.manuscript_to_json(manuscript),
                "viewer_role": "Editor",
                "records": [ser.flow_record_to_json(r) for r in chain],
                "assignments": [ser.assignment_to_json(a) for a in assignments],
            }

        if viewer_user == manuscript.submitted_by:
            labels = {a.referee: f"Referee {a.label_index}" for a in assignments}
            names = {
                a.referee: state.users[a.referee].name
                for a in assignments
                if a.referee in state.users
            }

            def scrub(text: str) -> str:
                for referee, label in labels.items():
                    text = text.replace(referee, label)
                    name = names.get(referee)
                    if name:
                        text = text.replace(name, label)
                return text

            records = []
            for record in chain:
                body = ser.flow_record_to_json(record)
                if record.actor_user in labels:
                    body["actor_user"] = labels[record.actor_user]
                body["note"] = scrub(body["note"])
                for doc in body["documents"]:
                    if doc["uploaded_by"] in labels:
                        doc["uploaded_by"] = labels[doc["uploaded_by"]]
                records.append(body)
            manuscript_body = ser.manuscript_to_json(manuscript)
            for doc in manuscript_body["files"]:
                if doc["uploaded_by"] in labels:
                    doc["uploaded_by"] = labels[doc["uploaded_by"]]
            return {
                "manuscript": manuscript_body,
                "viewer_role": "Author",
                "records": records,
            }

        own = [a for a in assignments if a.referee == viewer_user]
        if own:
            records = [
                ser.flow_record_to_json(r)
                for r in chain
                if r.actor_user == viewer_user or r.from_stage != r.to_stage
            ]
            return {
                "manuscript": ser.manuscript_to_json(manuscript),
                "viewer_role": "Referee",
                "records": records,
                "assignments": [ser.assignment_to_json(a) for a in own],
            }
        raise Forbidden(f"user {viewer_user!r} has no access to {manuscript_id!r}")

    def forthcoming_list(self, journal_id: str) -> list[Manuscript]:
        """Accepted manuscripts awaiting publication, in acceptance order."""
        state = self.store.snapshot()
        if journal_id not in state.journals:
            raise UnknownJournal(f"unknown journal {journal_id!r}")
        rows = []
        for manuscript in state.manuscripts.values():
            if manuscript.journal_id != journal_id:
                continue
            if manuscript.current_stage != "Forthcoming":
                continue
            accepted_at = ""
            for record in state.flows.get(manuscript.manuscript_id, ()):
                if record.to_stage == "Forthcoming":
                    accepted_at = record.timestamp
            rows.append((accepted_at, manuscript.manuscript_id, manuscript))
        rows.sort(key=lambda r: (r[0], r[1]))
        return [m for _, _, m in rows]

    def editorial_report(
        self, journal_id: str, period: tuple[_dt.datetime, _dt.datetime]
    ) -> dict:
        """Activity summary over flow records with timestamps in [start, end)."""
        state = self.store.snapshot()
        if journal_id not in state.journals:
            raise UnknownJournal(f"unknown journal {journal_id!r}")
        start, end = (_as_aware(period[0]), _as_aware(period[1]))
        stage_entries = {stage: 0 for stage in STAGES}
        submissions = rejections = publications = 0
        durations: dict[str, list[float]] = {stage: [] for stage in STAGES}

        for manuscript in state.manuscripts.values():
            if manuscript.journal_id != journal_id:
                continue
            chain = state.flows.get(manuscript.manuscript_id, ())
            stage_changes = [
                r for i, r in enumerate(chain) if i == 0 or r.from_stage != r.to_stage
            ]
            for i, record in enumerate(stage_changes):
                ts = _dt.datetime.fromisoformat(record.timestamp)
                if start <= ts < end:
                    stage_entries[record.to_stage] += 1
                    if i == 0:
                        submissions += 1
                    if record.to_stage == "Rejected":
                        rejections += 1
                    if record.to_stage == "PublishedOnline":
                        publications += 1
                if i + 1 < len(stage_changes):
                    leave = _dt.datetime.fromisoformat(stage_changes[i + 1].timestamp)
                    if start <= leave < end:
                        days = (leave - ts).total_seconds() / 86400.0
                        durations[record.to_stage].append(days)

        mean_days = {
            stage: (sum(values) / len(values) if values else None)
            for stage, values in durations.items()
        }
        return {
            "journal_id": journal_id,
            "period": [start.isoformat(), end.isoformat()],
            "stage_entries": stage_entries,
            "submissions": submissions,
            "rejections": rejections,
            "publications": publications,
            "mean_days_per_stage": mean_days,
        }


def _as_aware(value: _dt.datetime) -> _dt.datetime:
    if value.tzinfo is None:
        return value.replace(tzinfo=_dt.timezone.utc)
    return value
