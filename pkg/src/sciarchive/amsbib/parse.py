"""Parser from AMSBIB markup to structured references."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Union

from ..errors import EmptyReference, UnbalancedBraces
from .tokens import Token, TokenKind, scan_math, tokenize

YEAR_MIN = 1600
YEAR_MAX = 2100

# Commands that populate a dedicated field, in canonical render order.
FIELD_COMMANDS = ("by", "paper", "book", "jour", "yr", "vol", "issue", "pages", "extra")

# Link command -> link kind held in ParsedReference.links.
LINK_COMMANDS = {
    "crossref": "doi",
    "mathnet": "mathnet",
    "mathscinet": "mathscinet",
    "zmath": "zmath",
    "adsnasa": "adsnasa",
    "isi": "isi",
    "elink": "elink",
}
LINK_KIND_ORDER = ("doi", "mathnet", "mathscinet", "zmath", "adsnasa", "isi", "elink")
_LINK_KIND_TO_COMMAND = {v: k for k, v in LINK_COMMANDS.items()}

RECOGNIZED_COMMANDS = frozenset(FIELD_COMMANDS) | frozenset(LINK_COMMANDS)

REFERENCE_ORIGINS = ("journal_bibliography", "personal_list", "manual_entry")


class PageRange(NamedTuple):
    first: int
    last: int


Pages = Union[PageRange, str]


@dataclass(frozen=True)
class PersonName:
    family: str
    given: str = ""
    variant: Optional[str] = None

    def display(self) -> str:
        base = f"{self.given} {self.family}".strip()
        if self.variant:
            return f"{base} [{self.variant}]"
        return base


@dataclass(frozen=True)
class ParseWarning:
    message: str


@dataclass(frozen=True)
class RawReference:
    source: str
    origin: str = "manual_entry"

    def validate(self) -> None:
        if not self.source.strip():
            raise EmptyReference("reference source is empty")
        if self.origin not in REFERENCE_ORIGINS:
            raise EmptyReference(f"unknown reference origin {self.origin!r}")
        tokenize(self.source)  # raises UnbalancedBraces on imbalance


@dataclass
class ParsedReference:
    kind: str = "other"  # paper | book | other
    authors: tuple[PersonName, ...] = ()
    title: Optional[str] = None
    journal: Optional[str] = None
    year: Optional[int] = None
    volume: Optional[str] = None
    issue: Optional[str] = None
    pages: Optional[Pages] = None
    extra: Optional[str] = None
    links: dict = field(default_factory=dict)
    unknown_fields: tuple[tuple[str, str], ...] = ()
    warnings: list = field(default_factory=list, compare=False)

    def first_page(self) -> Optional[int]:
        if isinstance(self.pages, PageRange):
            return self.pages.first
        return None


def normalize_pages(raw: str) -> Pages:
    """Interpret a pages string: ``a--b``/``a-b`` or a single page number.

    Anything that is not a plain ascending page range with first page >= 1 is
    returned unchanged.
    """
    text = raw.strip()
    m = re.fullmatch(r"(\d+)\s*(?:--|-)\s*(\d+)", text)
    if m:
        first, last = int(m.group(1)), int(m.group(2))
        if 1 <= first <= last:
            return PageRange(first, last)
        return text
    if re.fullmatch(r"\d+", text):
        page = int(text)
        if page >= 1:
            return PageRange(page, page)
    return text


def render_pages(pages: Pages) -> str:
    if isinstance(pages, PageRange):
        if pages.first == pages.last:
            return str(pages.first)
        return f"{pages.first}--{pages.last}"
    return pages


def _normalize_field_text(value: str) -> str:
    """Canonical field text: ``~`` becomes a space and whitespace runs collapse,
    both applied only outside inline math; escaped characters are untouched."""
    out: list[str] = []
    i = 0
    n = len(value)
    while i < n:
        c = value[i]
        if c == "\\" and i + 1 < n:
            out.append(value[i : i + 2])
            i += 2
        elif c == "$":
            j = scan_math(value, i)
            out.append(value[i:j])
            i = j
        elif c == "~":
            out.append(" ")
            i += 1
        elif c.isspace():
            if out and out[-1] != " ":
                out.append(" ")
            i += 1
            while i < n and value[i].isspace():
                i += 1
        else:
            out.append(c)
            i += 1
    return "".join(out).strip()


_INITIAL_CHUNK = re.compile(r"[^\W\d_]{1,3}", re.UNICODE)


def _is_initial_token(token: str) -> bool:
    if not token.endswith("."):
        return False
    parts = token.split(".")[:-1]
    if not parts:
        return False
    for part in parts:
        part = part.lstrip("-")
        if not part or not _INITIAL_CHUNK.fullmatch(part):
            return False
    return True


def parse_person_name(text: str) -> PersonName:
    """Split one author string into (family, given initials, variant).

    Handles both initials-first ("A. N. Kolmogorov") and family-first
    ("Kolmogorov A. N.") orders; a trailing ``[...]`` is a transliteration
    variant, stored verbatim.
    """
    s = text.strip()
    variant = None
    m = re.search(r"\s*\[([^\[\]]*)\]\s*$", s)
    if m:
        variant = m.group(1).strip() or None
        s = s[: m.start()].strip()
    if s.startswith("{") and s.endswith("}") and _spans_whole_group(s):
        s = s[1:-1].strip()
    tokens = s.split()
    if not tokens:
        return PersonName(family="", given="", variant=variant)
    lead = 0
    while lead < len(tokens) and _is_initial_token(tokens[lead]):
        lead += 1
    if 0 < lead < len(tokens):
        return PersonName(
            family=" ".join(tokens[lead:]), given=" ".join(tokens[:lead]), variant=variant
        )
    trail = len(tokens)
    while trail > 0 and _is_initial_token(tokens[trail - 1]):
        trail -= 1
    if 0 < trail < len(tokens):
        return PersonName(
            family=" ".join(tokens[:trail]), given=" ".join(tokens[trail:]), variant=variant
        )
    if lead == len(tokens):  # only initials, no family word
        return PersonName(family="", given=" ".join(tokens), variant=variant)
    return PersonName(family=" ".join(tokens), given="", variant=variant)


def _spans_whole_group(s: str) -> bool:
    depth = 0
    for i, c in enumerate(s):
        if c == "{":
            depth += 1
        elif c == "}":
            depth -= 1
            if depth == 0:
                return i == len(s) - 1
    return False


def _split_authors(value: str) -> list[str]:
    """Split on top-level commas (outside braces and math)."""
    parts: list[str] = []
    buf: list[str] = []
    depth = 0
    i = 0
    n = len(value)
    while i < n:
        c = value[i]
        if c == "\\" and i + 1 < n:
            buf.append(value[i : i + 2])
            i += 2
            continue
        if c == "$":
            j = scan_math(value, i)
            buf.append(value[i:j])
            i = j
            continue
        if c == "{":
            depth += 1
        elif c == "}":
            depth = max(0, depth - 1)
        elif c == "," and depth == 0:
            parts.append("".join(buf))
            buf.clear()
            i += 1
            continue
        buf.append(c)
        i += 1
    parts.append("".join(buf))
    return [p for p in (part.strip() for part in parts) if p]


def elink_parts(identifier: str) -> tuple[str, str]:
    """Split an elink identifier ``{label}{url}`` into (label, url)."""
    m = re.fullmatch(r"\{(.*)\}\{(.*)\}", identifier, re.DOTALL)
    if not m:
        return identifier, identifier
    return m.group(1), m.group(2)


def _segment_fields(tokens: list[Token]) -> tuple[str, list[tuple[str, list[Token]]]]:
    """Split the token stream into leading free text and (command, value) spans.

    Only commands at brace depth zero start a new field; commands inside
    groups belong to the surrounding value.
    """
    body = [t for t in tokens if t.kind is not TokenKind.COMMENT]
    fields: list[tuple[str, list[Token]]] = []
    leading: list[Token] = []
    current: Optional[str] = None
    span: list[Token] = []
    depth = 0
    for tok in body:
        if tok.kind is TokenKind.GROUP_OPEN:
            depth += 1
        elif tok.kind is TokenKind.GROUP_CLOSE:
            depth -= 1
        if tok.kind is TokenKind.COMMAND and depth == 0:
            if current is None:
                pass
            else:
                fields.append((current, span))
            current = tok.value
            span = []
            continue
        if current is None:
            leading.append(tok)
        else:
            span.append(tok)
    if current is not None:
        fields.append((current, span))
    leading_text = "".join(t.lexeme for t in leading).strip()
    return leading_text, fields


def _span_value(span: list[Token]) -> str:
    """Assemble a field value from its token span.

    If the span is exactly one brace group (up to surrounding whitespace) the
    braces are stripped and the group content kept verbatim; otherwise the raw
    lexemes are joined and the ends trimmed.
    """
    toks = list(span)
    while toks and toks[0].kind is TokenKind.TEXT and not toks[0].value.strip():
        toks.pop(0)
    while toks and toks[-1].kind is TokenKind.TEXT and not toks[-1].value.strip():
        toks.pop()
    if toks and toks[0].kind is TokenKind.GROUP_OPEN:
        depth = 0
        for idx, tok in enumerate(toks):
            if tok.kind is TokenKind.GROUP_OPEN:
                depth += 1
            elif tok.kind is TokenKind.GROUP_CLOSE:
                depth -= 1
                if depth == 0:
                    if idx == len(toks) - 1:
                        return "".join(t.lexeme for t in toks[1:-1])
                    break
    return "".join(t.lexeme for t in toks).strip()


def parse_reference(raw: Union[RawReference, str]) -> ParsedReference:
    """Parse one AMSBIB reference.

    Later duplicates of a field win and attach a ParseWarning; unrecognized
    commands are preserved verbatim in input order.  Raises UnbalancedBraces
    or EmptyReference (no recognized field at all).
    """
    if isinstance(raw, str):
        raw = RawReference(source=raw)
    raw.validate()
    tokens = tokenize(raw.source)
    leading_text, fields = _segment_fields(tokens)

    ref = ParsedReference()
    unknown: list[tuple[str, str]] = []
    if leading_text:
        unknown.append(("", leading_text))

    def warn(msg: str) -> None:
        ref.warnings.append(ParseWarning(msg))

    for command, span in fields:
        if command not in RECOGNIZED_COMMANDS:
            unknown.append((command, "".join(t.lexeme for t in span).strip()))
            continue
        value = _span_value(span)
        if command in LINK_COMMANDS:
            kind = LINK_COMMANDS[command]
            if command == "elink":
                two = re.fullmatch(r"\{(.*?)\}\s*\{(.*)\}", "".join(t.lexeme for t in span).strip(), re.DOTALL)
                if two:
                    stored = "{%s}{%s}" % (two.group(1), two.group(2))
                else:
                    warn("malformed \\elink value, expected {label}{url}")
                    unknown.append((command, "".join(t.lexeme for t in span).strip()))
                    continue
                if kind in ref.links:
                    warn('duplicate link "elink"')
                ref.links[kind] = stored
            else:
                ident = _normalize_field_text(value)
                if not ident:
                    warn(f'empty link "\\{command}" ignored')
                    continue
                if kind in ref.links:
                    warn(f'duplicate link "{kind}"')
                ref.links[kind] = ident
            continue
        if command == "by":
            if ref.authors:
                warn('duplicate "by"')
            names = [
                parse_person_name(_normalize_field_text(a)) for a in _split_authors(value)
            ]
            ref.authors = tuple(
                n for n in names if n.family or n.given or n.variant
            )
            continue
        if command in ("paper", "book"):
            title = _normalize_field_text(value)
            if not title:
                warn(f'empty "\\{command}" title ignored')
                continue
            if ref.title is not None:
                warn('duplicate title command')
            ref.kind = command
            ref.title = title
            continue
        text = _normalize_field_text(value)
        if command == "yr":
            if not re.fullmatch(r"\d{1,4}", text) or not (YEAR_MIN <= int(text) <= YEAR_MAX):
                warn(f'year value {text!r} out of range, kept as unknown field')
                unknown.append((command, "".join(t.lexeme for t in span).strip()))
                continue
            if ref.year is not None:
                warn('duplicate "yr"')
            ref.year = int(text)
            continue
        if not text:
            warn(f'empty "\\{command}" ignored')
            continue
        if command == "jour":
            if ref.journal is not None:
                warn('duplicate "jour"')
            ref.journal = text
        elif command == "vol":
            if ref.volume is not None:
                warn('duplicate "vol"')
            ref.volume = text
        elif command == "issue":
            if ref.issue is not None:
                warn('duplicate "issue"')
            ref.issue = text
        elif command == "pages":
            if ref.pages is not None:
                warn('duplicate "pages"')
            ref.pages = normalize_pages(text)
        elif command == "extra":
            if ref.extra is not None:
                warn('duplicate "extra"')
            ref.extra = text

    ref.unknown_fields = tuple(unknown)
    populated = (
        bool(ref.authors)
        or bool(ref.links)
        or any(
            v is not None
            for v in (ref.title, ref.journal, ref.year, ref.volume, ref.issue, ref.pages, ref.extra)
        )
    )
    if not populated:
        raise EmptyReference("no recognized field in reference")
    return ref
