"""Demonstration catalog builder.

Builds a complete store exercising every subsystem: six journals with
constructed citation data whose integral and restricted impact factors for
evaluation year 2011 (window 2009-2010) land on known values, a set of
editorial users, and a small manuscript flow.

For each journal the tuple is (citable clusters in window, English-version
member articles in window, citing documents dated 2011, citing documents
that target English versions from ISI-indexed venues).
"""

from __future__ import annotations

import datetime as _dt
import itertools
import json
from typing import Optional

from .archive.ingest import ingest
from .archive.store import Store
from .editorial.workflow import Editorial

EVALUATION_YEAR = 2011
WINDOW = (2009, 2010)

JOURNALS = [
    # journal_id, title, translated title, P integral, P restricted, C integral, C restricted
    ("mat-sb", "Matematicheskii Sbornik", "Sbornik: Mathematics", 160, 150, 130, 85),
    (
        "trudy-mi",
        "Trudy Matem. Instituta im. V. A. Steklova",
        "Proceedings of the Steklov Institute of Mathematics",
        165,
        245,
        75,
        42,
    ),
    (
        "avtomat-telemekh",
        "Avtomatika i Telemekhanika",
        "Automation and Remote Control",
        325,
        390,
        227,
        96,
    ),
    ("diskret-mat", "Diskretnaya Matematika", None, 89, 0, 43, 0),
    ("semr", "Siberian Electronic Mathematical Reports", None, 98, 0, 37, 0),
    ("rjnd", "Russian Journal of Nonlinear Dynamics", None, 86, 0, 35, 0),
]

EXPECTED_TABLE = {
    "mat-sb": ("130", "0.813", "85", "0.567"),
    "trudy-mi": ("75", "0.455", "42", "0.171"),
    "avtomat-telemekh": ("227", "0.698", "96", "0.246"),
    "diskret-mat": ("43", "0.483", "--", "--"),
    "semr": ("37", "0.378", "--", "--"),
    "rjnd": ("35", "0.407", "--", "--"),
}

_FAMILIES = (
    "Ivanov", "Petrov", "Sidorov", "Smirnov", "Kuznetsov", "Popov", "Volkov",
    "Fedorov", "Morozov", "Egorov", "Nikitin", "Orlov", "Belov", "Komarov",
    "Sorokin", "Pavlov", "Semenov", "Golubev", "Vinogradov", "Bogdanov",
)
_INITIALS = ("A. A.", "B. V.", "V. G.", "G. D.", "D. E.", "E. Zh.", "I. K.", "K. L.")

AUTHOR_POOL = [
    (f"auth-p{i:02d}", family, initials)
    for i, (family, initials) in enumerate(
        itertools.islice(itertools.product(_FAMILIES, _INITIALS), 40), start=1
    )
]

_TOPICS = (
    "boundary value problems", "spectral asymptotics", "random matrices",
    "integrable systems", "graph colorings", "optimal control",
    "homological algebra", "diophantine approximations", "wave propagation",
    "stability of motion", "queueing networks", "minimal surfaces",
)


def _title(journal_id: str, k: int) -> str:
    topic = _TOPICS[k % len(_TOPICS)]
    return f"On {topic}, {journal_id.replace('-', ' ')} series {k}"


def demo_records() -> list[str]:
    """NDJSON lines for the full demonstration catalog."""
    lines: list[dict] = []
    lines.append(
        {
            "type": "organization",
            "organization_id": "org-steklov",
            "name": "Steklov Mathematical Institute",
            "url": "http://www.mi-ras.ru",
        }
    )
    for person_id, family, initials in AUTHOR_POOL:
        lines.append(
            {
                "type": "person",
                "person_id": person_id,
                "canonical_name": {"family": family, "given": initials},
                "affiliations": [{"organization_id": "org-steklov"}],
            }
        )

    for journal_id, title, translated, p_int, p_res, c_int, c_res in JOURNALS:
        record = {
            "type": "journal",
            "journal_id": journal_id,
            "title": title,
            "founder": "Russian Academy of Sciences",
            "publisher": "Steklov Mathematical Institute",
            "aliases": [title.replace("Matem.", "Matematicheskogo")] if "Matem." in title else [],
            "isi_indexed": p_res > 0,
        }
        if translated:
            record["translated_title"] = translated
        lines.append(record)
        lines.append(
            {"type": "access_policy", "journal_id": journal_id, "moving_wall_years": 3}
        )

        n_en_linked = min(p_res, p_int)
        for k in range(p_int):
            year = WINDOW[0] + (k % 2)
            author = AUTHOR_POOL[k % len(AUTHOR_POOL)][0]
            first = 10 * k + 1
            lines.append(
                {
                    "type": "article",
                    "article_id": f"{journal_id}-r{k:04d}",
                    "journal_id": journal_id,
                    "year": year,
                    "volume": str(200 + (year - WINDOW[0])),
                    "issue": str(1 + k % 6),
                    "pages": f"{first}--{first + 8}",
                    "language": "ru",
                    "title": _title(journal_id, k),
                    "abstract": f"Results about {_TOPICS[k % len(_TOPICS)]}.",
                    "keywords": _TOPICS[k % len(_TOPICS)].split(),
                    "authors": [author],
                    "citable": True,
                }
            )
            if k < n_en_linked:
                lines.append(
                    {
                        "type": "article",
                        "article_id": f"{journal_id}-e{k:04d}",
                        "journal_id": journal_id,
                        "year": year,
                        "volume": f"E{200 + (year - WINDOW[0])}",
                        "issue": str(1 + k % 6),
                        "pages": f"{first}--{first + 8}",
                        "language": "en",
                        "title": _title(journal_id, k) + " (English version)",
                        "authors": [author],
                        "citable": True,
                    }
                )
                lines.append(
                    {
                        "type": "version_link",
                        "a": f"{journal_id}-r{k:04d}",
                        "b": f"{journal_id}-e{k:04d}",
                    }
                )
        # English-only supplementary items: counted by the restricted
        # denominator, not citable in the integral sense
        for x in range(max(0, p_res - p_int)):
            year = WINDOW[0] + (x % 2)
            first = 9000 + 10 * x + 1
            lines.append(
                {
                    "type": "article",
                    "article_id": f"{journal_id}-x{x:04d}",
                    "journal_id": journal_id,
                    "year": year,
                    "volume": f"S{200 + (year - WINDOW[0])}",
                    "issue": "S",
                    "pages": f"{first}--{first + 4}",
                    "language": "en",
                    "title": f"Supplementary notes {x} for {journal_id}",
                    "citable": False,
                }
            )

        for i in range(c_int):
            if i < c_res:
                k = i % n_en_linked
                target_suffix = f"e{k:04d}"
                year = WINDOW[0] + (k % 2)
                volume = f"E{200 + (year - WINDOW[0])}"
                isi = True
                title = _title(journal_id, k) + " (English version)"
            else:
                k = i % p_int
                target_suffix = f"r{k:04d}"
                year = WINDOW[0] + (k % 2)
                volume = str(200 + (year - WINDOW[0]))
                isi = False
                title = _title(journal_id, k)
            first = 10 * k + 1
            family = AUTHOR_POOL[k % len(AUTHOR_POOL)][1]
            given = AUTHOR_POOL[k % len(AUTHOR_POOL)][2]
            source = (
                f"\\by {given.replace(' ', '~')}~{family} "
                f"\\paper {title} "
                f"\\jour {JOURNAL_TITLES[journal_id]} "
                f"\\yr {year} \\vol {volume} \\pages {first}--{first + 8}"
            )
            lines.append(
                {
                    "type": "reference",
                    "citing": f"d-{journal_id}-{i:04d}",
                    "citing_year": EVALUATION_YEAR,
                    "citing_isi_indexed": isi,
                    "source": source,
                    "origin": "journal_bibliography",
                }
            )

    for user_id, name, roles, person in USERS:
        lines.append(
            {
                "type": "user",
                "user_id": user_id,
                "name": name,
                "password": f"pw-{user_id}",
                "roles": roles,
                "person_id": person,
            }
        )
    return [json.dumps(record, ensure_ascii=False) for record in lines]


JOURNAL_TITLES = {j[0]: j[1] for j in JOURNALS}

USERS = [
    ("author1", "A. A. Ivanov", [["mat-sb", "Author"]], "auth-p01"),
    ("author2", "B. V. Ivanov", [["mat-sb", "Author"]], "auth-p02"),
    (
        "editor1",
        "E. E. Redaktorov",
        [["mat-sb", "Editor"], ["trudy-mi", "Editor"]],
        None,
    ),
    ("referee1", "P. P. Retsenzentov", [["mat-sb", "Referee"]], "auth-p10"),
    ("referee2", "V. V. Otzyvov", [["mat-sb", "Referee"]], "auth-p11"),
    ("admin1", "S. S. Smotritelev", [["mat-sb", "JournalAdministrator"]], None),
]


class _DemoClock:
    def __init__(self, start: Optional[_dt.datetime] = None):
        self.now = start or _dt.datetime(2026, 1, 1, 12, 0, 0, tzinfo=_dt.timezone.utc)

    def __call__(self) -> _dt.datetime:
        self.now += _dt.timedelta(hours=6)
        return self.now


def run_editorial_demo(store: Store, clock: Optional[_DemoClock] = None) -> dict:
    """Drive a small deterministic manuscript flow; returns the manuscript ids."""
    editorial = Editorial(store, clock=clock or _DemoClock())
    latex = ("main.tex", b"\\documentclass{article} demo body")
    pdf = ("main.pdf", b"%PDF-1.4 demo body")

    ms1 = editorial.submit_manuscript(
        "author1",
        "mat-sb",
        {
            "title": "Asymptotics of orthogonal polynomials",
            "abstract": "We study asymptotics.",
            "keywords": ["asymptotics", "orthogonal polynomials"],
            "authors": ["auth-p01"],
        },
        latex,
        pdf,
    )
    editorial.transition(ms1, "Classification", "editor1")
    editorial.transition(ms1, "PeerReview", "editor1")
    editorial.assign_referee(ms1, "referee1", "editor1")
    editorial.respond_to_assignment(ms1, "referee1", accept=True)
    editorial.submit_review(
        ms1, "referee1", "minor", ("review.txt", b"Sound result; fix typos.")
    )
    editorial.transition(ms1, "AuthorsRevision", "editor1")
    editorial.upload_revision(ms1, "author1", "main-v2.tex", b"revised body")
    editorial.transition(ms1, "PeerReview", "author1")
    editorial.transition(ms1, "ScientificEditing", "editor1")
    editorial.transition(ms1, "Translation", "editor1")
    editorial.transition(ms1, "EnglishEditing", "editor1")
    editorial.transition(ms1, "Forthcoming", "editor1")

    ms2 = editorial.submit_manuscript(
        "author2",
        "mat-sb",
        {
            "title": "A note on divergent series",
            "abstract": "A short note.",
            "keywords": ["series"],
            "authors": ["auth-p02"],
        },
        ("note.tex", b"\\documentclass{article} note"),
        ("note.pdf", b"%PDF-1.4 note"),
    )
    editorial.transition(ms2, "Classification", "editor1")
    editorial.transition(ms2, "Rejected", "editor1", note="out of scope")

    ms3 = editorial.submit_manuscript(
        "author1",
        "mat-sb",
        {
            "title": "Spectral gaps of periodic operators",
            "abstract": "Gap bounds.",
            "keywords": ["spectral theory"],
            "authors": ["auth-p01"],
        },
        ("gaps.tex", b"\\documentclass{article} gaps"),
        ("gaps.pdf", b"%PDF-1.4 gaps"),
    )
    return {"ms1": ms1, "ms2": ms2, "ms3": ms3}


def build_store(
    path: Optional[str] = None, *, with_editorial: bool = True, current_year: int = 2026
) -> Store:
    store = Store(path, current_year=current_year)
    report = ingest(store, demo_records())
    if report.rejected:
        raise RuntimeError(f"demo fixture rejected records: {report.rejections[:5]}")
    if with_editorial:
        run_editorial_demo(store)
    return store


def main(argv: Optional[list[str]] = None) -> int:
    import argparse

    from .archive.ingest import export_records

    parser = argparse.ArgumentParser(prog="sciarchive-demo")
    parser.add_argument("out", help="path of the store file to write")
    args = parser.parse_args(argv)
    store = build_store(args.out)
    del store
    print(f"demo store written to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
