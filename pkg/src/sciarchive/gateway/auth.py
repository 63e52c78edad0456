"""Token sessions over the local user table."""

from __future__ import annotations

import datetime as _dt
import hmac
import secrets
import threading
from dataclasses import dataclass

from ..archive.ingest import hash_password
from ..archive.store import Store
from ..errors import Unauthorized

SESSION_TTL = _dt.timedelta(hours=12)


@dataclass(frozen=True)
class Session:
    token: str
    user_id: str
    roles: tuple[tuple[str, str], ...]
    expires_at: _dt.datetime


class SessionManager:
    """In-memory session table; tokens are 128-bit url-safe strings and are
    never written to logs or the store."""

    def __init__(self, store: Store, clock=None):
        self.store = store
        self.clock = clock or (lambda: _dt.datetime.now(_dt.timezone.utc))
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def login(self, user_id: str, password: str) -> Session:
        user = self.store.snapshot().users.get(user_id)
        if user is None or not hmac.compare_digest(
            user.password_hash, hash_password(user_id, password)
        ):
            raise Unauthorized("invalid credentials")
        token = secrets.token_urlsafe(16)
        session = Session(
            token=token,
            user_id=user_id,
            roles=user.roles,
            expires_at=self.clock() + SESSION_TTL,
        )
        with self._lock:
            self._sessions[token] = session
        return session

    def logout(self, token: str) -> None:
        with self._lock:
            self._sessions.pop(token, None)

    def authenticate(self, token: str) -> Session:
        with self._lock:
            session = self._sessions.get(token)
        if session is None or session.expires_at <= self.clock():
            raise Unauthorized("missing or expired token")
        # roles may have changed since login; always reflect the current user
        user = self.store.snapshot().users.get(session.user_id)
        if user is None:
            raise Unauthorized("user no longer exists")
        return Session(
            token=token,
            user_id=session.user_id,
            roles=user.roles,
            expires_at=session.expires_at,
        )
