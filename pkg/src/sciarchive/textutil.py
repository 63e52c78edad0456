"""Shared text normalization helpers (case folding, diacritic folding, tokens)."""

from __future__ import annotations

import re
import unicodedata

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


def fold(text: str) -> str:
    """Casefold and strip diacritics (NFKD, combining marks removed)."""
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(c for c in decomposed if not unicodedata.combining(c)).casefold()


def words(text: str) -> list[str]:
    """Folded word tokens of *text* (alphanumeric runs, underscores excluded)."""
    return _WORD_RE.findall(fold(text))


def collapse_ws(text: str) -> str:
    return re.sub(r"\s+", " ", text).strip()
