"""Admin CLI.

Subcommand groups mirror the HTTP surface: ``archive ingest|export|serve``,
``refs parse|resolve|search``, ``metrics if|report``, ``editorial report``.
Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from typing import Optional

from ..archive.ingest import export_records, ingest
from ..archive.store import Store
from ..editorial.workflow import Editorial
from ..errors import DomainError
from ..metrics import comparison_report, report_csv, report_table
from . import services
from .config import Config, load_config


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=2)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sciarchive")
    parser.add_argument("--config", help="path to key=value config file")
    groups = parser.add_subparsers(dest="group", required=True)

    archive = groups.add_parser("archive", help="store administration")
    archive_cmd = archive.add_subparsers(dest="command", required=True)
    p = archive_cmd.add_parser("ingest", help="load an NDJSON record stream")
    p.add_argument("--store", help="store file path")
    p.add_argument("--file", required=True, help="NDJSON input, '-' for stdin")
    p = archive_cmd.add_parser("export", help="write the canonical export")
    p.add_argument("--store", help="store file path")
    p.add_argument("--out", help="output path, stdout when omitted")
    p = archive_cmd.add_parser("serve", help="run the HTTP gateway")
    p.add_argument("--store", help="store file path")
    p.add_argument("--listen", help="host:port override")

    refs = groups.add_parser("refs", help="reference tools")
    refs_cmd = refs.add_subparsers(dest="command", required=True)
    p = refs_cmd.add_parser("parse", help="parse one reference file")
    p.add_argument("--file", required=True, help="input file, '-' for stdin")
    p.add_argument(
        "--format",
        default="json",
        choices=["json", "amsbib", "html", "xml", "plain"],
    )
    p = refs_cmd.add_parser("resolve", help="resolve references against the catalog")
    p.add_argument("--store", help="store file path")
    p.add_argument("--file", required=True, help="input file, '-' for stdin")
    p = refs_cmd.add_parser("search", help="cited-reference search")
    p.add_argument("--store", help="store file path")
    p.add_argument("--title", help="space separated title terms")
    p.add_argument("--year", type=int)
    p.add_argument("--author", help="author family name")
    p.add_argument("--pages")

    metrics = groups.add_parser("metrics", help="impact factors")
    metrics_cmd = metrics.add_subparsers(dest="command", required=True)
    p = metrics_cmd.add_parser("if", help="one impact factor value")
    p.add_argument("--store", help="store file path")
    p.add_argument("--journal", required=True)
    p.add_argument("--year", type=int, required=True)
    p.add_argument("--horizon", type=int, default=2, choices=[1, 2, 5])
    p.add_argument("--mode", default="integral", choices=["integral", "restricted"])
    p.add_argument("--json", action="store_true", dest="as_json")
    p = metrics_cmd.add_parser("report", help="comparison report")
    p.add_argument("--store", help="store file path")
    p.add_argument("--journals", required=True, help="comma separated journal ids")
    p.add_argument("--year", type=int, required=True)
    p.add_argument("--horizon", type=int, default=2, choices=[1, 2, 5])
    p.add_argument("--format", default="csv", choices=["csv", "table", "json"])

    editorial = groups.add_parser("editorial", help="editorial reports")
    editorial_cmd = editorial.add_subparsers(dest="command", required=True)
    p = editorial_cmd.add_parser("report", help="activity report for a journal")
    p.add_argument("--store", help="store file path")
    p.add_argument("--journal", required=True)
    p.add_argument("--date-from", required=True, help="ISO date/time, inclusive")
    p.add_argument("--date-to", required=True, help="ISO date/time, exclusive")

    return parser


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _open_store(args, config: Config) -> Store:
    path = getattr(args, "store", None) or config.store_path
    return Store(
        path,
        fuzzy_threshold=config.fuzzy_threshold,
        moving_wall_default=config.moving_wall_default,
    )


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = load_config(args.config) if args.config else Config()
    try:
        return _dispatch(args, config)
    except DomainError as exc:
        print(f"error [{exc.code}]: {exc.message}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error [io]: {exc}", file=sys.stderr)
        return 1


def _dispatch(args, config: Config) -> int:
    if args.group == "archive":
        return _archive(args, config)
    if args.group == "refs":
        return _refs(args, config)
    if args.group == "metrics":
        return _metrics(args, config)
    if args.group == "editorial":
        return _editorial(args, config)
    return 2


def _archive(args, config: Config) -> int:
    if args.command == "ingest":
        store = _open_store(args, config)
        report = ingest(store, _read_input(args.file))
        print(
            _dump(
                {
                    "created": report.created,
                    "updated": report.updated,
                    "rejected": report.rejected,
                    "rejections": [[i, reason] for i, reason in report.rejections],
                }
            )
        )
        return 0
    if args.command == "export":
        store = _open_store(args, config)
        text = export_records(store.snapshot())
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0
    if args.command == "serve":
        import uvicorn

        from .app import create_app

        store = _open_store(args, config)
        app = create_app(store, ui_dir=config.ui_dir)
        listen = args.listen or config.listen_addr
        host, _, port = listen.rpartition(":")
        uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")
        return 0
    return 2


def _refs(args, config: Config) -> int:
    if args.command == "parse":
        source = _read_input(args.file)
        if args.format == "json":
            print(_dump(services.parse_json(source)))
        else:
            print(services.parse_json(source, args.format)["rendered"])
        return 0
    if args.command == "resolve":
        store = _open_store(args, config)
        source = _read_input(args.file)
        print(_dump(services.resolve_json(store.snapshot(), source)))
        return 0
    if args.command == "search":
        store = _open_store(args, config)
        result = services.refs_search_json(
            store.snapshot(),
            title_terms=args.title.split() if args.title else None,
            year=args.year,
            author_family=args.author,
            pages=args.pages,
        )
        print(_dump(result))
        return 0
    return 2


def _metrics(args, config: Config) -> int:
    store = _open_store(args, config)
    state = store.snapshot()
    if args.command == "if":
        result = services.impact_json(
            state, args.journal, args.year, args.horizon, args.mode
        )
        if args.as_json:
            print(_dump(result))
        else:
            print(result["rounded"] if result["defined"] else "undefined")
        return 0
    if args.command == "report":
        ids = [j for j in args.journals.split(",") if j]
        if args.format == "json":
            print(_dump(services.report_json(state, ids, args.year, args.horizon)))
        else:
            rows = comparison_report(state, ids, args.year, args.horizon)
            text = report_csv(rows) if args.format == "csv" else report_table(rows)
            sys.stdout.write(text)
        return 0
    return 2


def _editorial(args, config: Config) -> int:
    if args.command == "report":
        store = _open_store(args, config)
        editorial = Editorial(store)
        start = _dt.datetime.fromisoformat(args.date_from)
        end = _dt.datetime.fromisoformat(args.date_to)
        print(_dump(services.editorial_report_json(editorial, args.journal, start, end)))
        return 0
    return 2


if __name__ == "__main__":
    sys.exit(main())
