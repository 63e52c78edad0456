"""Domain error hierarchy.

Every error carries a stable machine code so the gateway can map it to one
HTTP status + code pair without string matching.
"""

from __future__ import annotations


class DomainError(Exception):
    """Base class for all recoverable domain errors."""

    code = "domain_error"

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.details = details


# -- amsbib ---------------------------------------------------------------

class UnbalancedBraces(DomainError):
    code = "unbalanced_braces"


class EmptyReference(DomainError):
    code = "empty_reference"


# -- archive --------------------------------------------------------------

class MalformedRecord(DomainError):
    code = "malformed_record"


class StorageFailure(DomainError):
    code = "storage_failure"


class UnknownJournal(DomainError):
    code = "unknown_journal"


class UnknownArticle(DomainError):
    code = "unknown_article"


class UnknownCluster(DomainError):
    code = "unknown_cluster"


class UnknownPerson(DomainError):
    code = "unknown_person"


class UnknownOrganization(DomainError):
    code = "unknown_organization"


class SameLanguageConflict(DomainError):
    code = "same_language_conflict"


class SelfMerge(DomainError):
    code = "self_merge"


class DuplicateSuspected(DomainError):
    """Registration matched existing persons; carries the candidate ids."""

    code = "duplicate_suspected"

    def __init__(self, message: str = "", candidates=(), **details):
        super().__init__(message, **details)
        self.candidates = list(candidates)


class EmptyQuery(DomainError):
    code = "empty_query"


# -- citegraph ------------------------------------------------------------

class UnknownReference(DomainError):
    code = "unknown_reference"


# -- editorial ------------------------------------------------------------

class UnknownManuscript(DomainError):
    code = "unknown_manuscript"


class UnregisteredAuthor(DomainError):
    code = "unregistered_author"


class MissingFile(DomainError):
    code = "missing_file"


class IllegalTransition(DomainError):
    code = "illegal_transition"


class Forbidden(DomainError):
    code = "forbidden"


class TerminalState(DomainError):
    code = "terminal_state"


class ConflictOfInterest(DomainError):
    code = "conflict_of_interest"


class NotAssigned(DomainError):
    code = "not_assigned"


class UnknownUser(DomainError):
    code = "unknown_user"


# -- gateway --------------------------------------------------------------

class Unauthorized(DomainError):
    code = "unauthorized"


class StaleCursor(DomainError):
    code = "stale_cursor"


class BadRequest(DomainError):
    code = "bad_request"
