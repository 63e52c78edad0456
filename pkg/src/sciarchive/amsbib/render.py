"""Renderers for parsed references: canonical AMSBIB, HTML, XML, plain text."""

from __future__ import annotations

import html as _html
from typing import Optional
from xml.sax.saxutils import escape as _xml_escape, quoteattr as _xml_attr

from .parse import (
    LINK_KIND_ORDER,
    _LINK_KIND_TO_COMMAND,
    PageRange,
    ParsedReference,
    PersonName,
    elink_parts,
    render_pages,
)
from .tokens import scan_math as _scan_math

LINK_URL_TEMPLATES = {
    "doi": "https://doi.org/{id}",
    "mathnet": "http://mi.mathnet.ru/{id}",
    "mathscinet": "https://mathscinet.ams.org/mathscinet-getitem?mr={id}",
    "zmath": "https://zbmath.org/?q=an:{id}",
    "adsnasa": "https://adsabs.harvard.edu/abs/{id}",
}

RENDER_FORMATS = ("amsbib", "html", "xml", "plain")


def link_url(kind: str, identifier: str) -> str:
    """Resolve a link entry to its target URL."""
    if kind == "elink":
        return elink_parts(identifier)[1]
    template = LINK_URL_TEMPLATES[kind]
    return template.replace("{id}", identifier)


def link_label(kind: str, identifier: str) -> str:
    if kind == "elink":
        label = elink_parts(identifier)[0]
        return label or "link"
    return {"doi": "crossref"}.get(kind, kind)


def render(ref: ParsedReference, format: str = "amsbib") -> str:
    if format == "amsbib":
        return _render_amsbib(ref)
    if format == "html":
        return _render_html(ref)
    if format == "xml":
        return _render_xml(ref)
    if format == "plain":
        return _render_plain(ref)
    raise ValueError(f"unknown render format {format!r}")


# -- canonical AMSBIB -------------------------------------------------------

def _needs_brace_wrap(value: str) -> bool:
    # A value that is itself one whole brace group would lose its braces on
    # reparse, and a top-level '%' would start a comment; both need wrapping.
    if value.startswith("{") and value.endswith("}"):
        depth = 0
        for i, c in enumerate(value):
            if c == "{":
                depth += 1
            elif c == "}":
                depth -= 1
                if depth == 0:
                    if i == len(value) - 1:
                        return True
                    break
    depth = 0
    i = 0
    while i < len(value):
        c = value[i]
        if c == "\\" and i + 1 < len(value):
            i += 2
            continue
        if c == "$":
            i = _scan_math(value, i)
            continue
        if c == "{":
            depth += 1
        elif c == "}":
            depth -= 1
        elif c == "%" and depth == 0:
            return True
        i += 1
    return False


def _emit(command: str, value: str) -> str:
    if not value:
        return f"\\{command}"
    if _needs_brace_wrap(value):
        return f"\\{command} {{{value}}}"
    return f"\\{command} {value}"


def _author_text(a: PersonName) -> str:
    return a.display()


def _render_amsbib(ref: ParsedReference) -> str:
    parts: list[str] = []
    # free text captured before the first command re-renders first, so a
    # reparse sees it in the same position
    for command, value in ref.unknown_fields:
        if not command and value:
            parts.append(value)
    if ref.authors:
        parts.append(_emit("by", ", ".join(_author_text(a) for a in ref.authors)))
    if ref.title is not None and ref.kind in ("paper", "book"):
        parts.append(_emit(ref.kind, ref.title))
    if ref.journal is not None:
        parts.append(_emit("jour", ref.journal))
    if ref.year is not None:
        parts.append(_emit("yr", str(ref.year)))
    if ref.volume is not None:
        parts.append(_emit("vol", ref.volume))
    if ref.issue is not None:
        parts.append(_emit("issue", ref.issue))
    if ref.pages is not None:
        parts.append(_emit("pages", render_pages(ref.pages)))
    if ref.extra is not None:
        parts.append(_emit("extra", ref.extra))
    for kind in LINK_KIND_ORDER:
        if kind in ref.links:
            command = _LINK_KIND_TO_COMMAND[kind]
            if kind == "elink":
                parts.append(f"\\elink{ref.links[kind]}")
            else:
                parts.append(_emit(command, ref.links[kind]))
    for command, value in ref.unknown_fields:
        # unknown values are verbatim source slices (braces included), so no
        # brace wrapping is applied here
        if command:
            parts.append(f"\\{command} {value}" if value else f"\\{command}")
    return " ".join(parts)


# -- display formats ---------------------------------------------------------

def _plain_pieces(ref: ParsedReference) -> list[str]:
    pieces: list[str] = []
    if ref.authors:
        pieces.append(", ".join(_author_text(a) for a in ref.authors))
    if ref.title:
        pieces.append(ref.title)
    if ref.journal:
        pieces.append(ref.journal)
    if ref.year is not None:
        pieces.append(str(ref.year))
    if ref.volume:
        pieces.append(ref.volume)
    if ref.issue:
        pieces.append(f"no. {ref.issue}")
    if ref.pages is not None:
        pieces.append(render_pages(ref.pages))
    if ref.extra:
        pieces.append(ref.extra)
    return pieces


def _render_plain(ref: ParsedReference) -> str:
    pieces = _plain_pieces(ref)
    pieces.extend(
        link_url(kind, ref.links[kind]) for kind in LINK_KIND_ORDER if kind in ref.links
    )
    return ", ".join(pieces)


def _render_html(ref: ParsedReference) -> str:
    out: list[str] = []
    if ref.authors:
        out.append(
            '<span class="authors">'
            + _html.escape(", ".join(_author_text(a) for a in ref.authors))
            + "</span>"
        )
    if ref.title:
        tag = "i" if ref.kind == "paper" else "b"
        out.append(f'<{tag} class="title">{_html.escape(ref.title)}</{tag}>')
    if ref.journal:
        out.append('<span class="journal">' + _html.escape(ref.journal) + "</span>")
    if ref.year is not None:
        out.append(str(ref.year))
    if ref.volume:
        out.append(_html.escape(ref.volume))
    if ref.issue:
        out.append("no. " + _html.escape(ref.issue))
    if ref.pages is not None:
        out.append(_html.escape(render_pages(ref.pages)))
    if ref.extra:
        out.append(_html.escape(ref.extra))
    for kind in LINK_KIND_ORDER:
        if kind in ref.links:
            url = link_url(kind, ref.links[kind])
            label = link_label(kind, ref.links[kind])
            out.append(
                f'<a href="{_html.escape(url, quote=True)}">{_html.escape(label)}</a>'
            )
    return '<span class="reference">' + ", ".join(out) + "</span>"


def _render_xml(ref: ParsedReference) -> str:
    out: list[str] = [f'<reference kind="{ref.kind}">']
    if ref.authors:
        out.append("<authors>")
        for a in ref.authors:
            attrs = f" family={_xml_attr(a.family)} given={_xml_attr(a.given)}"
            if a.variant:
                attrs += f" variant={_xml_attr(a.variant)}"
            out.append(f"<author{attrs}/>")
        out.append("</authors>")
    if ref.title is not None:
        out.append(f"<title>{_xml_escape(ref.title)}</title>")
    if ref.journal is not None:
        out.append(f"<journal>{_xml_escape(ref.journal)}</journal>")
    if ref.year is not None:
        out.append(f"<year>{ref.year}</year>")
    if ref.volume is not None:
        out.append(f"<volume>{_xml_escape(ref.volume)}</volume>")
    if ref.issue is not None:
        out.append(f"<issue>{_xml_escape(ref.issue)}</issue>")
    if ref.pages is not None:
        if isinstance(ref.pages, PageRange):
            out.append(f'<pages first="{ref.pages.first}" last="{ref.pages.last}"/>')
        else:
            out.append(f"<pages>{_xml_escape(ref.pages)}</pages>")
    if ref.extra is not None:
        out.append(f"<extra>{_xml_escape(ref.extra)}</extra>")
    if ref.links:
        out.append("<links>")
        for kind in LINK_KIND_ORDER:
            if kind in ref.links:
                url = link_url(kind, ref.links[kind])
                out.append(f"<link kind={_xml_attr(kind)} href={_xml_attr(url)}/>")
        out.append("</links>")
    for command, value in ref.unknown_fields:
        out.append(
            f"<unknown command={_xml_attr(command)}>{_xml_escape(value)}</unknown>"
        )
    out.append("</reference>")
    return "".join(out)
