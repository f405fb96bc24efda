"""soograph command line: ingest, query, repl, network, synth, library, serve.

Exit codes: 0 success, 1 I/O failure, 2 parse/usage error, 3 evaluation
error. ``--now`` pins every NOW-relative computation (trend windows, entdate
ranges, read boosts) for the whole invocation, which is what makes query
output reproducible across runs against a fixed store.
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import logging
import os
import sys
from pathlib import Path

from soograph.config import Config, load_config
from soograph.engine import Engine
from soograph.errors import (EvaluationError, InvalidArgumentError, NotFoundError,
                             ParseError, SoographError)
from soograph.evaluate import Evaluator
from soograph.netviz import build_paper_network, cluster_network, export_graph
from soograph.query import parse, to_canonical_string
from soograph.render import entries_payload, format_table, query_payload
from soograph.store import CorpusStore
from soograph.synth import SynthParams, write_files

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_IO, EXIT_PARSE, EXIT_EVAL = 0, 1, 2, 3


def _common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data-dir", default=os.environ.get("SOOGRAPH_DATA_DIR"),
                        help="store directory (or $SOOGRAPH_DATA_DIR)")
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--now", help="reference date YYYY-MM-DD (default: today UTC)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="soograph")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load documents (and read events) into the store")
    _common_options(p)
    p.add_argument("docs", help="document JSONL file")
    p.add_argument("--reads", help="read-event JSONL file")

    p = sub.add_parser("query", help="run one query")
    _common_options(p)
    p.add_argument("query")
    p.add_argument("--format", choices=("table", "json", "ids"), default="table")
    p.add_argument("--limit", type=int, default=20, help="display rows (table/ids only)")

    p = sub.add_parser("repl", help="interactive query loop")
    _common_options(p)
    p.add_argument("--limit", type=int, default=20)

    p = sub.add_parser("network", help="build and export the coupling network of a query")
    _common_options(p)
    p.add_argument("query")
    p.add_argument("--format", default="json", help="dot, graphml, or json")
    p.add_argument("--max-nodes", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--n-docs", type=int, default=100)
    p.add_argument("--n-topics", type=int, default=5)
    p.add_argument("--refs-mean", type=float, default=5.0)
    p.add_argument("--pa-exponent", type=float, default=1.0)
    p.add_argument("--n-readers", type=int, default=20)
    p.add_argument("--reads-mean", type=float, default=8.0)
    p.add_argument("--year-lo", type=int, default=1990)
    p.add_argument("--year-hi", type=int, default=2020)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--docs-out", default="docs.jsonl")
    p.add_argument("--reads-out", default="reads.jsonl")

    p = sub.add_parser("library", help="manage saved libraries")
    _common_options(p)
    lib_sub = p.add_subparsers(dest="library_command", required=True)
    ps = lib_sub.add_parser("save")
    ps.add_argument("name")
    ps.add_argument("--from-query", help="save the result ids of this query")
    ps.add_argument("--ids-file", help="file of doc ids, one per line (default: stdin)")
    ps = lib_sub.add_parser("show")
    ps.add_argument("name")
    lib_sub.add_parser("list")

    p = sub.add_parser("serve", help="serve the HTTP API (and explorer, if built)")
    _common_options(p)
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--static", help="directory of explorer assets to serve at /")

    return parser


def _resolve_now(args) -> dt.date:
    if getattr(args, "now", None):
        return dt.date.fromisoformat(args.now)
    return dt.datetime.now(dt.timezone.utc).date()


def _load_engine(args) -> Engine:
    if not args.data_dir:
        raise InvalidArgumentError("no data dir: pass --data-dir or set SOOGRAPH_DATA_DIR")
    config = load_config(args.config) if args.config else Config()
    return Engine.load(args.data_dir, config)


def cmd_ingest(args) -> int:
    if not args.data_dir:
        raise InvalidArgumentError("no data dir: pass --data-dir or set SOOGRAPH_DATA_DIR")
    data_dir = Path(args.data_dir)
    store = CorpusStore.load(data_dir) if (data_dir / "docs.jsonl").exists() else CorpusStore(data_dir)
    stats = store.ingest_document_file(args.docs)
    print(json.dumps({"documents": stats.as_dict()}))
    if args.reads:
        stats = store.ingest_read_event_file(args.reads)
        print(json.dumps({"read_events": stats.as_dict()}))
    return EXIT_OK


def cmd_query(args) -> int:
    engine = _load_engine(args)
    now = _resolve_now(args)
    ast = parse(args.query)
    ranked = Evaluator(engine, now).evaluate(ast)
    if args.format == "json":
        print(json.dumps(query_payload(engine, to_canonical_string(ast), ranked)))
    elif args.format == "ids":
        for doc_id in ranked.ids()[:args.limit]:
            print(doc_id)
    else:
        print(format_table(engine, ranked, args.limit))
    return EXIT_OK


def cmd_repl(args) -> int:
    try:
        import readline  # noqa: F401  (line editing + in-session history)
    except ImportError:
        pass
    engine = _load_engine(args)
    now = _resolve_now(args)
    last_ids: list[str] = []
    while True:
        try:
            line = input("soograph> ").strip()
        except EOFError:
            print()
            return EXIT_OK
        if not line:
            continue
        if line == r"\quit":
            return EXIT_OK
        if line.startswith(r"\save"):
            parts = line.split(None, 1)
            if len(parts) < 2 or not parts[1].strip():
                print("usage: \\save <name>", file=sys.stderr)
                continue
            engine.store.save_library(parts[1].strip(), last_ids)
            print(f"saved {len(last_ids)} ids to library/{parts[1].strip()}")
            continue
        if r"\last" in line:
            engine.store.save_library("__last__", last_ids)
            line = line.replace(r"\last", "docs(library/__last__)")
        try:
            ranked = Evaluator(engine, now).evaluate(parse(line))
        except SoographError as exc:
            print(f"error: {exc}", file=sys.stderr)
            continue
        last_ids = ranked.ids()
        print(format_table(engine, ranked, args.limit))
    return EXIT_OK


def cmd_network(args) -> int:
    engine = _load_engine(args)
    now = _resolve_now(args)
    ranked = Evaluator(engine, now).evaluate(parse(args.query))
    network = build_paper_network(engine, ranked, max_nodes=args.max_nodes,
                                  min_weight=engine.config.netviz_min_weight)
    cluster_network(engine, network, seed=args.seed)
    sys.stdout.buffer.write(export_graph(network, args.format))
    sys.stdout.buffer.flush()
    return EXIT_OK


def cmd_synth(args) -> int:
    params = SynthParams(
        n_docs=args.n_docs, n_topics=args.n_topics, refs_mean=args.refs_mean,
        pa_exponent=args.pa_exponent, n_readers=args.n_readers,
        reads_mean=args.reads_mean, year_span=(args.year_lo, args.year_hi),
        seed=args.seed)
    write_files(params, args.docs_out, args.reads_out)
    return EXIT_OK


def cmd_library(args) -> int:
    if not args.data_dir:
        raise InvalidArgumentError("no data dir: pass --data-dir or set SOOGRAPH_DATA_DIR")
    store = CorpusStore.load(args.data_dir)
    if args.library_command == "list":
        for name in store.list_libraries():
            print(name)
        return EXIT_OK
    if args.library_command == "show":
        for doc_id in store.load_library(args.name).doc_ids:
            print(doc_id)
        return EXIT_OK
    # save
    if args.from_query:
        engine = Engine(store, Config())
        ranked = Evaluator(engine, _resolve_now(args)).evaluate(parse(args.from_query))
        ids = ranked.ids()
    elif args.ids_file:
        ids = [l.strip() for l in Path(args.ids_file).read_text(encoding="utf-8").splitlines()
               if l.strip()]
    else:
        ids = [l.strip() for l in sys.stdin if l.strip()]
    library = store.save_library(args.name, ids)
    print(f"saved {len(library.doc_ids)} ids to library/{library.name}")
    return EXIT_OK


def cmd_serve(args) -> int:
    from soograph.api import run_server

    engine = _load_engine(args)
    now = dt.date.fromisoformat(args.now) if args.now else None
    try:
        run_server(engine, host=args.host, port=args.port, default_now=now,
                   static_dir=args.static)
    except OSError as exc:
        print(f"cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    handlers = {
        "ingest": cmd_ingest, "query": cmd_query, "repl": cmd_repl,
        "network": cmd_network, "synth": cmd_synth, "library": cmd_library,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NotFoundError, EvaluationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EVAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
