"""Lossless tokenizer for AMSBIB source text.

The token stream reproduces the input byte-for-byte when the lexemes are
concatenated.  ``%`` starts a comment outside brace groups; comments are kept
as their own tokens so losslessness holds while the parser can drop them.
Inline math (``$...$`` or ``$$...$$``) is swallowed into text tokens so that
backslash commands inside math never surface as command tokens.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from ..errors import UnbalancedBraces


class TokenKind(enum.Enum):
    COMMAND = "command"
    GROUP_OPEN = "group_open"
    GROUP_CLOSE = "group_close"
    TEXT = "text"
    COMMENT = "comment"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    value: str
    byte_offset: int

    @property
    def lexeme(self) -> str:
        if self.kind is TokenKind.COMMAND:
            return "\\" + self.value
        if self.kind is TokenKind.GROUP_OPEN:
            return "{"
        if self.kind is TokenKind.GROUP_CLOSE:
            return "}"
        return self.value


def scan_math(text: str, start: int) -> int:
    """Return the index just past the math span starting at ``text[start] == '$'``.

    Unterminated math runs to end of input (lenient by design).
    """
    if text.startswith("$$", start):
        end = text.find("$$", start + 2)
        return len(text) if end < 0 else end + 2
    i = start + 1
    while i < len(text):
        c = text[i]
        if c == "\\":
            i += 2
            continue
        if c == "$":
            return i + 1
        i += 1
    return len(text)


def tokenize(source: str) -> list[Token]:
    """Tokenize *source*; raises UnbalancedBraces at the first unmatched brace."""
    raw: list[tuple[TokenKind, str]] = []
    buf: list[str] = []
    open_positions: list[int] = []  # char offsets of unmatched '{'
    i = 0
    n = len(source)

    def flush() -> None:
        if buf:
            raw.append((TokenKind.TEXT, "".join(buf)))
            buf.clear()

    while i < n:
        c = source[i]
        if c == "\\":
            nxt = source[i + 1] if i + 1 < n else ""
            if nxt.isalpha():
                flush()
                j = i + 1
                while j < n and source[j].isalpha():
                    j += 1
                raw.append((TokenKind.COMMAND, source[i + 1 : j]))
                i = j
            else:
                # escaped character (\{, \%, \~, lone backslash at EOF): plain text
                buf.append(source[i : i + 2] if nxt else c)
                i += 2 if nxt else 1
        elif c == "{":
            flush()
            open_positions.append(i)
            raw.append((TokenKind.GROUP_OPEN, "{"))
            i += 1
        elif c == "}":
            if not open_positions:
                raise UnbalancedBraces(
                    f"unmatched '}}' at byte {_byte_offset(source, i)}",
                    position=_byte_offset(source, i),
                )
            flush()
            open_positions.pop()
            raw.append((TokenKind.GROUP_CLOSE, "}"))
            i += 1
        elif c == "%" and not open_positions:
            flush()
            eol = source.find("\n", i)
            end = n if eol < 0 else eol + 1
            raw.append((TokenKind.COMMENT, source[i:end]))
            i = end
        elif c == "$":
            j = scan_math(source, i)
            buf.append(source[i:j])
            i = j
        else:
            buf.append(c)
            i += 1

    flush()
    if open_positions:
        pos = open_positions[0]
        raise UnbalancedBraces(
            f"unmatched '{{' at byte {_byte_offset(source, pos)}",
            position=_byte_offset(source, pos),
        )

    tokens: list[Token] = []
    offset = 0
    for kind, value in raw:
        tokens.append(Token(kind, value, offset))
        offset += len(Token(kind, value, 0).lexeme.encode("utf-8"))
    return tokens


def _byte_offset(source: str, char_index: int) -> int:
    return len(source[:char_index].encode("utf-8"))
