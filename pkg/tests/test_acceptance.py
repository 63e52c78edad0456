"""Acceptance suite.

One test per acceptance criterion, each at its stated size and tolerance,
emitting one PASS line on success (pytest reports failures itself):

  A1  comparison-table reproduction on the documented six-journal fixture
  A2  impact factors equal brute force on 100 randomized stores
  A3  markup round-trip corpus + 100k-input fuzz
  A4  resolver determinism and precedence on constructed ground truth
  A5  workflow properties over 10k randomized action sequences
  A6  CLI / HTTP / direct-call surface equivalence (golden files)
  A7  search equals linear-scan oracles including tie order
"""

from __future__ import annotations

import datetime as dt
import json
import random
import string
import time
from fractions import Fraction
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from fixtures_random import oracle_citable_items, oracle_citation_count, random_store
from sciarchive import demo
from sciarchive.amsbib import parse_reference, render, tokenize
from sciarchive.archive import Store, ingest, search_publications
from sciarchive.citegraph import cited_reference_search, normalize_title
from sciarchive.editorial import (
    Editorial,
    STAGES,
    TERMINAL_STAGES,
    TRANSITIONS,
    allowed_roles,
)
from sciarchive.errors import DomainError, EmptyReference, UnbalancedBraces
from sciarchive.gateway import services
from sciarchive.gateway.app import create_app
from sciarchive.gateway.cli import main as cli_main
from sciarchive.metrics import MetricsQuery, comparison_report, impact_factor, report_csv
from sciarchive.textutil import words

GOLDEN_DIR = Path(__file__).parent / "golden"


def _report(line: str) -> None:
    print(f"[PASS] {line}")


# =====================================================================
# A1: comparison-table fixture reproduction
# =====================================================================

def test_a1_table_reproduction():
    started = time.monotonic()
    store = demo.build_store(with_editorial=False)
    rows = comparison_report(store.snapshot(), [j[0] for j in demo.JOURNALS], 2011, 2)
    assert [r.journal_id for r in rows] == [j[0] for j in demo.JOURNALS]
    for row in rows:
        assert row.cells()[1:] == demo.EXPECTED_TABLE[row.journal_id], row.journal_id
    # spelled-out spot checks of the headline journal
    snap = store.snapshot()
    integral = impact_factor(snap, MetricsQuery("mat-sb", 2011, 2, "integral"))
    restricted = impact_factor(snap, MetricsQuery("mat-sb", 2011, 2, "restricted"))
    assert integral.citable_items == 160
    assert restricted.citable_items == 150
    assert integral.citations == 130
    assert restricted.citations == 85
    assert integral.value == Fraction(130, 160)
    assert integral.rounded == "0.813"
    assert restricted.rounded == "0.567"
    elapsed = time.monotonic() - started
    assert elapsed < 5.0, f"fixture + report took {elapsed:.2f}s"
    _report(
        f"A1 table reproduction: 6 journals, every cell exact, {elapsed:.2f}s < 5s"
    )


# =====================================================================
# A2: metrics equal brute force on randomized stores
# =====================================================================

def test_a2_metrics_oracle_100_random_stores():
    total_links = 0
    checked = 0
    for seed in range(100):
        if seed == 98:
            store = random_store(seed, n_links=50_000, max_articles_per_journal=120)
            years = (2009, 2011, 2013)
        elif seed == 99:
            store = random_store(seed, n_links=100_000, max_articles_per_journal=150)
            years = (2009, 2011, 2013)
        else:
            store = random_store(seed, n_links=100 + seed * 9)
            years = tuple(range(2007, 2015))
        snap = store.snapshot()
        total_links += len(snap.references)
        for journal_id in snap.journals:
            for year in years:
                for horizon in (1, 2, 5):
                    window = (year - horizon, year - 1)
                    for mode in ("integral", "restricted"):
                        result = impact_factor(
                            snap, MetricsQuery(journal_id, year, horizon, mode)
                        )
                        c = oracle_citation_count(snap, journal_id, window, year, mode)
                        p = oracle_citable_items(snap, journal_id, window, mode)
                        assert result.citations == c, (seed, journal_id, year, horizon, mode)
                        assert result.citable_items == p, (seed, journal_id, year, horizon, mode)
                        if p == 0:
                            assert result.value is None
                        else:
                            assert result.value == Fraction(c, p)
                        checked += 1
    assert total_links <= 100 * 100_000
    _report(
        f"A2 metrics oracle: 100 stores, {total_links} refs, {checked} queries, exact match"
    )


# =====================================================================
# A3: markup round-trip corpus and fuzz
# =====================================================================

def test_a3_roundtrip_corpus_and_fuzz(corpus):
    assert len(corpus) >= 50
    commands = set()
    for source in corpus:
        for token in tokenize(source):
            if token.kind.value == "command":
                commands.add(token.value)
        ref = parse_reference(source)
        canonical = render(ref, "amsbib")
        assert parse_reference(canonical) == ref
        assert render(parse_reference(canonical), "amsbib") == canonical
    assert {
        "by", "paper", "book", "jour", "yr", "vol", "issue", "pages", "extra",
        "crossref", "mathnet", "mathscinet", "zmath", "adsnasa", "isi", "elink",
    } <= commands

    rng = random.Random(424242)
    arbitrary = "\\{}$%~ \n\t" + string.ascii_letters + string.digits + "Ааé中"
    structured = [
        "\\by", "\\paper", "\\jour", "\\yr", "\\pages", "\\vol", "\\book",
        "\\elink", "\\zzz", "{", "}", "$x$", "1999", "--", "%c\n", "A.~B.",
        "word", ",", " ",
    ]
    runs = 100_000
    parsed_count = 0
    for i in range(runs):
        if i % 2 == 0:
            source = "".join(
                rng.choice(arbitrary) for _ in range(rng.randrange(0, 60))
            )
        else:
            source = " ".join(
                rng.choice(structured) for _ in range(rng.randrange(1, 14))
            )
        try:
            parse_reference(source)
            parsed_count += 1
        except (UnbalancedBraces, EmptyReference):
            continue
    assert parsed_count > 10_000  # the fuzzer does reach the parser proper
    _report(
        f"A3 markup round-trip: {len(corpus)} corpus refs fixpoint; fuzz {runs} inputs, no crash"
    )


# =====================================================================
# A4: resolver ground truth
# =====================================================================

def _independent_similarity(a: str, b: str) -> float:
    def grams(s):
        padded = f" {s} "
        return {padded[i : i + 3] for i in range(len(padded) - 2)} if len(padded) >= 3 else set()

    ta, tb = grams(a), grams(b)
    if not ta or not tb:
        return 0.0
    return len(ta & tb) / len(ta | tb)


NOUNS = ("operator", "manifold", "lattice", "semigroup", "functional", "polynomial",
         "boundary", "spectrum", "measure", "graph")
ADJS = ("periodic", "bounded", "discrete", "stochastic", "analytic", "convex",
        "compact", "singular", "uniform", "minimal")


def _resolver_fixture():
    records = [
        json.dumps({"type": "journal", "journal_id": "jr-a", "title": "Archive Journal A", "aliases": ["Arch. J. A"]}),
        json.dumps({"type": "journal", "journal_id": "jr-b", "title": "Archive Journal B"}),
        json.dumps({"type": "person", "person_id": "pr-1", "canonical_name": {"family": "Avtorov", "given": "A."}}),
    ]
    titles = {}
    for i in range(1000):
        title = (
            f"On {ADJS[i % 10]} {NOUNS[(i // 10) % 10]} families "
            f"kind{i % 7} part{i:04d}"
        )
        titles[f"art{i:04d}"] = title
        records.append(
            json.dumps(
                {
                    "type": "article",
                    "article_id": f"art{i:04d}",
                    "journal_id": "jr-a" if i % 2 == 0 else "jr-b",
                    "year": 1950 + (i % 60),
                    "volume": str(i),
                    "pages": f"{10 * i + 1}--{10 * i + 9}",
                    "title": title,
                    "authors": ["pr-1"],
                }
            )
        )
    store = Store(current_year=2026)
    report = ingest(store, records)
    assert report.rejected == 0, report.rejections
    return store, titles


def test_a4_resolver_ground_truth():
    store, titles = _resolver_fixture()
    snap = store.snapshot()
    rng = random.Random(31337)

    expected = {}  # citing doc id -> (article_id | None, score | None, method | None)
    reference_records = []

    chosen = rng.sample(sorted(titles), 450)
    for n, article_id in enumerate(chosen[:300]):  # exact-key population
        article = snap.articles[article_id]
        journal_title = "Arch. J. A" if article.journal_id == "jr-a" else "Archive Journal B"
        source = (
            f"\\paper {titles[article_id]} \\jour {journal_title} "
            f"\\yr {article.year} \\vol {article.volume} "
            f"\\pages {article.pages.first}--{article.pages.last}"
        )
        doc = f"cite-exact-{n:04d}"
        expected[doc] = (article_id, 1.0, "exact_key")
        reference_records.append(
            json.dumps({"type": "reference", "citing": doc, "citing_year": 2015, "source": source})
        )

    fuzz_count = 0
    for n, article_id in enumerate(chosen[300:450]):  # fuzzy population
        article = snap.articles[article_id]
        tokens = titles[article_id].split()
        k = n % (len(tokens) - 1)
        tokens[k], tokens[k + 1] = tokens[k + 1], tokens[k]
        mangled = " ".join(tokens)
        score = _independent_similarity(
            normalize_title(mangled), normalize_title(titles[article_id])
        )
        assert score >= 0.75, "constructed perturbation must stay above threshold"
        # checked at construction: the intended article must outrank all other
        # catalog titles in the +-1 year window
        window_rivals = [
            aid
            for aid, a in snap.articles.items()
            if abs(a.year - article.year) <= 1 and aid != article_id
        ]
        rival_best = max(
            (
                _independent_similarity(
                    normalize_title(mangled), normalize_title(snap.articles[aid].title)
                )
                for aid in window_rivals
            ),
            default=0.0,
        )
        assert rival_best < score, "fixture titles must keep rivals below the target"
        source = f"\\paper {mangled} \\yr {article.year}"
        doc = f"cite-fuzzy-{n:04d}"
        expected[doc] = (article_id, score, "fuzzy_title")
        reference_records.append(
            json.dumps({"type": "reference", "citing": doc, "citing_year": 2015, "source": source})
        )
        fuzz_count += 1

    for n in range(50):  # unresolvable population
        source = f"\\paper Chronicles of unrelated {n} matters entirely \\yr {1700 + n}"
        doc = f"cite-none-{n:04d}"
        expected[doc] = None
        reference_records.append(
            json.dumps({"type": "reference", "citing": doc, "citing_year": 2015, "source": source})
        )

    report = ingest(store, reference_records)
    assert report.rejected == 0, report.rejections
    snap = store.snapshot()
    by_doc = {r.citing.doc_id: r for r in snap.references.values()}
    assert len(by_doc) == 500

    for doc, truth in expected.items():
        resolution = by_doc[doc].resolution
        if truth is None:
            assert resolution is None, doc
        else:
            article_id, score, method = truth
            assert resolution is not None, doc
            assert resolution.article_id == article_id, doc
            assert resolution.method == method, doc
            assert resolution.score == score, doc

    # determinism: resolving the full set a second time reproduces every result
    from sciarchive.citegraph import resolve_reference

    for doc, reference in by_doc.items():
        once = resolve_reference(snap, reference.parsed)
        twice = resolve_reference(snap, reference.parsed)
        assert once == twice
    _report("A4 resolver: 1000 articles, 300 exact + 150 fuzzy + 50 unresolved match ground truth")


# =====================================================================
# A5: workflow properties over randomized sequences
# =====================================================================

def _editorial_env(seed: int):
    store = Store(current_year=2026)
    records = [
        {"type": "journal", "journal_id": "jed", "title": "Editorial Journal"},
        {"type": "person", "person_id": "pa", "canonical_name": {"family": "Avtorov", "given": "A."}},
        {"type": "person", "person_id": "pb", "canonical_name": {"family": "Soavtorov", "given": "B."}},
        {"type": "person", "person_id": "pr", "canonical_name": {"family": "Retsenzentov", "given": "P."}},
        {"type": "user", "user_id": "au", "name": "A. Avtorov", "password": "x", "roles": [["jed", "Author"]], "person_id": "pa"},
        {"type": "user", "user_id": "au2", "name": "B. Soavtorov", "password": "x", "roles": [["jed", "Author"]], "person_id": "pb"},
        {"type": "user", "user_id": "ed", "name": "E. Redaktorov", "password": "x", "roles": [["jed", "Editor"]]},
        {"type": "user", "user_id": "ref1", "name": "P. Retsenzentov", "password": "x", "roles": [["jed", "Referee"]], "person_id": "pr"},
        {"type": "user", "user_id": "ref2", "name": "V. Otzyvov", "password": "x", "roles": [["jed", "Referee"]]},
        {"type": "user", "user_id": "adm", "name": "S. Smotritelev", "password": "x", "roles": [["jed", "JournalAdministrator"]]},
    ]
    assert ingest(store, [json.dumps(r) for r in records]).rejected == 0

    class Clock:
        def __init__(self):
            self.now = dt.datetime(2026, 1, 1, tzinfo=dt.timezone.utc)

        def __call__(self):
            self.now += dt.timedelta(minutes=7)
            return self.now

    return store, Editorial(store, clock=Clock())


def test_a5_workflow_random_sequences_10k():
    rng = random.Random(777)
    users = ["au", "au2", "ed", "ref1", "ref2", "adm"]
    sequences = 0
    actions_done = 0
    n_envs = 200
    per_env = 50
    latex = ("m.tex", b"latex body")
    pdf = ("m.pdf", b"pdf body")
    for env_no in range(n_envs):
        store, editorial = _editorial_env(env_no)
        manuscripts = []
        for m in range(per_env):
            submitter = rng.choice(["au", "au2"])
            ms = editorial.submit_manuscript(
                submitter,
                "jed",
                {"title": f"T{env_no}-{m}", "authors": ["pa" if submitter == "au" else "pb"]},
                latex,
                pdf,
            )
            manuscripts.append(ms)
            for _ in range(rng.randrange(2, 9)):
                actions_done += 1
                op = rng.random()
                try:
                    if op < 0.55:
                        editorial.transition(
                            ms, rng.choice(STAGES), rng.choice(users)
                        )
                    elif op < 0.7:
                        editorial.assign_referee(
                            ms, rng.choice(["ref1", "ref2"]), rng.choice(users)
                        )
                    elif op < 0.8:
                        editorial.respond_to_assignment(
                            ms, rng.choice(["ref1", "ref2"]), rng.random() < 0.8
                        )
                    elif op < 0.9:
                        editorial.submit_review(
                            ms,
                            rng.choice(["ref1", "ref2"]),
                            rng.choice(["accept", "minor", "major", "reject"]),
                            ("r.txt", b"review body"),
                        )
                    else:
                        editorial.upload_revision(
                            ms, submitter, "v2.tex", b"revised"
                        )
                except DomainError:
                    pass
            sequences += 1
        snap = store.snapshot()
        for ms in manuscripts:
            chain = snap.flows[ms]
            # chain integrity and replay
            stage = "Submitted"
            last_ts = None
            for i, record in enumerate(chain):
                assert record.from_stage == stage
                stage = record.to_stage
                if last_ts is not None:
                    assert record.timestamp > last_ts
                last_ts = record.timestamp
                if i < len(chain) - 1:
                    assert record.to_stage not in TERMINAL_STAGES  # terminality
                if i > 0 and record.from_stage != record.to_stage:
                    assert record.to_stage in TRANSITIONS[record.from_stage]
                    assert record.actor_role in allowed_roles(
                        record.from_stage, record.to_stage
                    )
            assert snap.manuscripts[ms].current_stage == stage
        # author-view redaction: serialized views carry no referee identity
        for ms in rng.sample(manuscripts, 10):
            view = json.dumps(
                editorial.view_flow(ms, snap.manuscripts[ms].submitted_by),
                ensure_ascii=False,
            )
            for secret in ("ref1", "ref2", "P. Retsenzentov", "V. Otzyvov"):
                assert secret not in view
    assert sequences == 10_000
    _report(
        f"A5 workflow: {sequences} randomized sequences ({actions_done} actions), "
        "integrity/terminality/roles/redaction hold"
    )


# =====================================================================
# A6: surface equivalence (direct vs HTTP vs CLI, golden files)
# =====================================================================

@pytest.fixture(scope="module")
def fixture_store(tmp_path_factory):
    path = tmp_path_factory.mktemp("acceptance") / "store.ndjson"
    store = demo.build_store(str(path))
    return store, str(path)


def _canonical(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=2)


def test_a6_surface_equivalence(fixture_store, capsys):
    store, store_path = fixture_store
    snap = store.snapshot()
    editorial = Editorial(store)
    client = TestClient(create_app(store, editorial=editorial))

    period = ("2026-01-01T00:00:00+00:00", "2027-01-01T00:00:00+00:00")
    period_dt = tuple(dt.datetime.fromisoformat(p) for p in period)
    journal_ids = [j[0] for j in demo.JOURNALS]

    def cli_capture(argv) -> str:
        code = cli_main(argv)
        out = capsys.readouterr().out
        assert code == 0, out
        return out

    def login(user):
        response = client.post(
            "/api/v1/auth/login", json={"user_id": user, "password": f"pw-{user}"}
        )
        return {"Authorization": f"Bearer {response.json()['token']}"}

    surfaces: dict[str, dict] = {}

    # journals: direct vs HTTP
    direct = services.journals_list(snap)
    http = client.get("/api/v1/journals", params={"limit": 200}).json()["items"]
    assert http == direct
    surfaces["journals"] = {"direct": direct}

    direct = services.journal_json(snap, "mat-sb")
    assert client.get("/api/v1/journals/mat-sb").json() == direct
    surfaces["journal_mat_sb"] = {"direct": direct}

    # impact factor: direct vs HTTP vs CLI
    for mode in ("integral", "restricted"):
        direct = services.impact_json(snap, "mat-sb", 2011, 2, mode)
        http = client.get(
            "/api/v1/journals/mat-sb/impact-factor",
            params={"year": 2011, "horizon": 2, "mode": mode},
        ).json()
        assert http == direct
        cli_json = json.loads(
            cli_capture(
                [
                    "metrics", "if", "--store", store_path, "--journal", "mat-sb",
                    "--year", "2011", "--horizon", "2", "--mode", mode, "--json",
                ]
            )
        )
        assert cli_json == direct
        plain = cli_capture(
            [
                "metrics", "if", "--store", store_path, "--journal", "mat-sb",
                "--year", "2011", "--horizon", "2", "--mode", mode,
            ]
        ).strip()
        assert plain == direct["rounded"]
        surfaces[f"impact_{mode}"] = {"direct": direct}

    # comparison report: direct vs HTTP vs CLI (json and csv)
    direct = services.report_json(snap, journal_ids, 2011, 2)
    http = client.get(
        "/api/v1/journals/mat-sb/report",
        params={"year": 2011, "horizon": 2, "peers": ",".join(journal_ids[1:])},
    ).json()
    assert http == direct
    cli_json = json.loads(
        cli_capture(
            [
                "metrics", "report", "--store", store_path,
                "--journals", ",".join(journal_ids), "--year", "2011",
                "--horizon", "2", "--format", "json",
            ]
        )
    )
    assert cli_json == direct
    csv_direct = report_csv(comparison_report(snap, journal_ids, 2011, 2))
    csv_cli = cli_capture(
        [
            "metrics", "report", "--store", store_path,
            "--journals", ",".join(journal_ids), "--year", "2011",
            "--horizon", "2", "--format", "csv",
        ]
    )
    assert csv_cli == csv_direct
    surfaces["report"] = {"direct": direct, "csv": csv_direct}

    # articles and links
    direct = services.article_json(snap, "mat-sb-r0000")
    assert client.get("/api/v1/articles/mat-sb-r0000").json() == direct
    surfaces["article"] = {"direct": direct}

    direct = services.forward_links_json(snap, "mat-sb-e0000", True)
    assert (
        client.get("/api/v1/articles/mat-sb-e0000/forward-links").json() == direct
    )
    surfaces["forward_links"] = {"direct": direct}

    # publication search
    direct = services.search_json(snap, title_keywords=["boundary", "value"])
    http = client.get(
        "/api/v1/search", params={"title_keywords": "boundary value", "limit": 200}
    ).json()
    assert http["hits"] == direct["hits"][:200]
    surfaces["search"] = {"direct": direct}

    # cited-reference search: direct vs HTTP vs CLI
    direct = services.refs_search_json(snap, title_terms=["boundary"], year=2009)
    http = client.get(
        "/api/v1/references/search",
        params={"title_terms": "boundary", "year": 2009, "limit": 200},
    ).json()
    assert http["references"] == direct["references"][:200]
    cli_json = json.loads(
        cli_capture(
            [
                "refs", "search", "--store", store_path,
                "--title", "boundary", "--year", "2009",
            ]
        )
    )
    assert cli_json == direct
    surfaces["refs_search"] = {"direct": direct}

    # reference parsing: direct vs HTTP vs CLI
    source = "\\by A.~N.~Kolmogorov \\paper On tables of random numbers \\jour Sankhya Ser.~A \\yr 1963 \\vol 25 \\pages 369--376"
    direct = services.parse_json(source)
    http = client.post("/api/v1/references/parse", content=source).json()
    assert http == direct
    src_file = Path(store_path).parent / "one.amsbib"
    src_file.write_text(source, encoding="utf-8")
    cli_json = json.loads(cli_capture(["refs", "parse", "--file", str(src_file)]))
    assert cli_json == direct
    surfaces["refs_parse"] = {"direct": direct}

    # person publications
    direct = services.person_publications_json(snap, "auth-p01")
    assert client.get("/api/v1/persons/auth-p01/publications").json() == direct
    surfaces["person_publications"] = {"direct": direct}

    # forthcoming
    direct = services.forthcoming_json(editorial, "mat-sb")
    assert client.get("/api/v1/journals/mat-sb/forthcoming").json() == direct
    surfaces["forthcoming"] = {"direct": direct}

    # editorial report: direct vs HTTP vs CLI
    direct = services.editorial_report_json(editorial, "mat-sb", *period_dt)
    http = client.get(
        "/api/v1/journals/mat-sb/editorial-report",
        params={"date_from": period[0], "date_to": period[1]},
        headers=login("editor1"),
    ).json()
    assert http == direct
    cli_json = json.loads(
        cli_capture(
            [
                "editorial", "report", "--store", store_path, "--journal", "mat-sb",
                "--date-from", period[0], "--date-to", period[1],
            ]
        )
    )
    assert cli_json == direct
    surfaces["editorial_report"] = {"direct": direct}

    # transition table
    direct = services.transitions_json()
    assert client.get("/api/v1/editorial/transitions").json() == direct
    surfaces["transitions"] = {"direct": direct}

    # health
    assert client.get("/api/v1/health").json() == {"status": "ok"}

    # golden comparison: every payload must match the committed bytes
    GOLDEN_DIR.mkdir(exist_ok=True)
    mismatches = []
    for name, payload in surfaces.items():
        golden_path = GOLDEN_DIR / f"{name}.json"
        rendered = _canonical(payload) + "\n"
        if not golden_path.exists():
            golden_path.write_text(rendered, encoding="utf-8")
        elif golden_path.read_text(encoding="utf-8") != rendered:
            mismatches.append(name)
    assert not mismatches, f"golden drift in {mismatches}"
    _report(
        f"A6 surface equivalence: {len(surfaces)} read surfaces identical across "
        "direct/HTTP/CLI and golden files"
    )


# =====================================================================
# A7: search oracles including tie order
# =====================================================================

def test_a7_search_oracles(corpus):
    # publication search on a ~3000-article fixture
    rng = random.Random(5150)
    vocabulary = (
        "random tables numbers spectral theory groups boundary value measure "
        "entropy chains lattice operators graphs flows rings"
    ).split()
    records = [
        json.dumps({"type": "journal", "journal_id": f"js{j}", "title": f"Search Journal {j}"})
        for j in range(5)
    ]
    records.append(json.dumps({"type": "organization", "organization_id": "os1", "name": "Search Institute"}))
    person_ids = []
    for i in range(40):
        pid = f"ps{i:03d}"
        person_ids.append(pid)
        records.append(
            json.dumps(
                {
                    "type": "person",
                    "person_id": pid,
                    "canonical_name": {
                        "family": rng.choice(["Ivanov", "Petrov", "Sidorov", "Markov"]),
                        "given": rng.choice(["A. A.", "B. B.", "C. C."]),
                    },
                    "affiliations": [{"organization_id": "os1"}],
                }
            )
        )
    n_articles = 3000
    for i in range(n_articles):
        records.append(
            json.dumps(
                {
                    "type": "article",
                    "article_id": f"sa{i:05d}",
                    "journal_id": f"js{i % 5}",
                    "year": 1960 + (i % 55),
                    "volume": str(i),
                    "pages": f"{2 * i + 1}--{2 * i + 2}",
                    "title": " ".join(rng.choices(vocabulary, k=rng.randrange(3, 7))),
                    "abstract": " ".join(rng.choices(vocabulary, k=rng.randrange(6, 18))),
                    "keywords": rng.sample(vocabulary, k=rng.randrange(0, 3)),
                    "authors": rng.sample(person_ids, k=rng.randrange(1, 3)),
                }
            )
        )
    store = Store(current_year=2026)
    report = ingest(store, records)
    assert report.rejected == 0, report.rejections
    snap = store.snapshot()
    assert len(snap.articles) <= 10_000

    def publication_oracle(query):
        hits = []
        for aid in snap.articles:
            article = snap.articles[aid]
            title_tokens = words(article.title)
            keyword_tokens = [w for kw in article.keywords for w in words(kw)]
            abstract_tokens = words(article.abstract)
            author_tokens = []
            org_tokens = []
            for pid in article.authors:
                person = snap.persons[pid]
                author_tokens += words(person.canonical_name.family) + words(
                    person.canonical_name.given
                )
                for aff in person.affiliations:
                    org_tokens += words(snap.organizations[aff.organization_id].name)
            ok = all(
                t in title_tokens or t in keyword_tokens
                for t in query.get("title_keywords", [])
            )
            ok = ok and all(
                t in abstract_tokens or t in keyword_tokens
                for t in query.get("abstract_keywords", [])
            )
            ok = ok and all(
                t in author_tokens for t in words(query.get("author_name", "") or "")
            )
            ok = ok and all(
                t in org_tokens
                for t in words(query.get("organization_name", "") or "")
            )
            if query.get("journal_id"):
                ok = ok and article.journal_id == query["journal_id"]
            if query.get("year_range"):
                low, high = query["year_range"]
                ok = ok and low <= article.year <= high
            if not ok:
                continue
            score = 0
            for term in sorted(
                set(query.get("title_keywords", []) + query.get("abstract_keywords", []))
            ):
                score += (
                    3 * title_tokens.count(term)
                    + 2 * keyword_tokens.count(term)
                    + abstract_tokens.count(term)
                )
            hits.append((aid, score))
        hits.sort(key=lambda h: (-h[1], h[0]))
        return hits

    pub_queries = 0
    for _ in range(50):
        query = {}
        if rng.random() < 0.8:
            query["title_keywords"] = rng.choices(vocabulary, k=rng.randrange(1, 3))
        if rng.random() < 0.4:
            query["abstract_keywords"] = rng.choices(vocabulary, k=rng.randrange(1, 2))
        if rng.random() < 0.3:
            query["author_name"] = rng.choice(["Ivanov", "Markov"])
        if rng.random() < 0.2:
            query["journal_id"] = f"js{rng.randrange(5)}"
        if rng.random() < 0.3:
            low = rng.randrange(1960, 2010)
            query["year_range"] = (low, low + 12)
        if not query:
            query["title_keywords"] = ["random"]
        got = [(h.article_id, h.score) for h in search_publications(snap, **query)]
        assert got == publication_oracle(query), query
        pub_queries += 1

    # cited-reference search on the demonstration reference set
    ref_store = demo.build_store(with_editorial=False)
    ref_snap = ref_store.snapshot()
    ref_queries = 0
    families = ["Ivanov", "Petrov", "Smirnov", "Popov"]
    for _ in range(40):
        query = {}
        if rng.random() < 0.7:
            query["title_terms"] = [rng.choice(["boundary", "spectral", "random", "series"])]
        if rng.random() < 0.5:
            query["year"] = rng.choice([2009, 2010])
        if rng.random() < 0.4:
            query["author_family"] = rng.choice(families)
        if not query:
            query["year"] = 2009
        got = [
            r.reference_id for r in cited_reference_search(ref_snap, **query)
        ]
        expected = []
        for rid in sorted(ref_snap.references):
            parsed = ref_snap.references[rid].parsed
            if "year" in query and parsed.year != query["year"]:
                continue
            if "title_terms" in query:
                tokens = set(words(normalize_title(parsed.title or "")))
                if not all(t in tokens for t in query["title_terms"]):
                    continue
            if "author_family" in query:
                if query["author_family"].casefold() not in {
                    a.family.casefold() for a in parsed.authors
                }:
                    continue
            expected.append(rid)
        assert got == expected, query
        ref_queries += 1

    _report(
        f"A7 search oracles: {pub_queries} publication queries on {n_articles} articles "
        f"and {ref_queries} cited-reference queries match linear scans"
    )
