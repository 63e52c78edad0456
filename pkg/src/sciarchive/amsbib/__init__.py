"""AMSBIB structured bibliographic markup.

A reference is a flat sequence of ``\\command value`` fields.  Values run to
the next top-level command; a brace group delimits a value explicitly; inline
``$...$`` math is opaque text.  The dialect understood here:

    \\by       authors, comma separated, ``~`` is a non-breaking space
    \\paper    title of a journal paper (sets kind=paper)
    \\book     title of a book (sets kind=book)
    \\jour \\yr \\vol \\issue \\pages \\extra
    \\crossref \\mathnet \\mathscinet \\zmath \\adsnasa \\isi   external ids
    \\elink{label}{url}                                    free-form link

Unrecognized commands are preserved verbatim as unknown fields.
"""

from .tokens import Token, TokenKind, tokenize
from .parse import (
    PageRange,
    ParseWarning,
    ParsedReference,
    PersonName,
    RawReference,
    elink_parts,
    normalize_pages,
    parse_person_name,
    parse_reference,
    render_pages,
)
from .render import LINK_URL_TEMPLATES, link_url, render

__all__ = [
    "LINK_URL_TEMPLATES",
    "PageRange",
    "ParseWarning",
    "ParsedReference",
    "PersonName",
    "RawReference",
    "Token",
    "TokenKind",
    "elink_parts",
    "link_url",
    "normalize_pages",
    "parse_person_name",
    "parse_reference",
    "render",
    "render_pages",
    "tokenize",
]
