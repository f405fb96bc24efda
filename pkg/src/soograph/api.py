"""Read-only HTTP JSON API: /query, /doc/<id>, /network, /healthz.

Serves one immutable engine snapshot; requests never mutate anything, so
any number can run concurrently and any request order yields identical
responses. A ``now`` query parameter mirrors the CLI ``--now`` so demo
output is reproducible. When a static directory is configured (the built
web explorer), it is served at ``/``.
"""

from __future__ import annotations

import datetime as dt
import json
import logging
import mimetypes
import time
import urllib.parse
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from soograph.engine import Engine
from soograph.errors import (EvaluationError, InvalidArgumentError, NotFoundError,
                             ParseError, UnsupportedFieldError)
from soograph.evaluate import Evaluator
from soograph.netviz import build_paper_network, cluster_network, export_graph
from soograph.query import parse, to_canonical_string
from soograph.render import query_payload

logger = logging.getLogger(__name__)

MAX_ROWS = 500
DEFAULT_ROWS = 25


class ApiServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, engine: Engine, host: str = "127.0.0.1", port: int = 8765,
                 default_now: dt.date | None = None, static_dir: str | None = None):
        self.engine = engine
        self.default_now = default_now
        self.static_dir = Path(static_dir).resolve() if static_dir else None
        super().__init__((host, port), _Handler)


class _Handler(BaseHTTPRequestHandler):
    server: ApiServer

    # -- plumbing ------------------------------------------------------

    def log_message(self, fmt, *args):  # one line per request via logging
        logger.info("%s %s", self.address_string(), fmt % args)

    def _send(self, status: int, body: bytes, content_type: str = "application/json") -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _send_json(self, status: int, payload: dict) -> None:
        self._send(status, json.dumps(payload).encode("utf-8"))

    def _now(self, params: dict[str, list[str]]) -> dt.date:
        if "now" in params:
            return dt.date.fromisoformat(params["now"][0])
        if self.server.default_now is not None:
            return self.server.default_now
        return dt.datetime.now(dt.timezone.utc).date()

    # -- routing -------------------------------------------------------

    def do_GET(self):  # noqa: N802 (http.server API)
        url = urllib.parse.urlparse(self.path)
        params = urllib.parse.parse_qs(url.query)
        try:
            if url.path == "/healthz":
                self._send_json(200, {"status": "ok", "n_docs": len(self.server.engine.store)})
            elif url.path == "/query":
                self._handle_query(params)
            elif url.path == "/network":
                self._handle_network(params)
            elif url.path.startswith("/doc/"):
                self._handle_doc(urllib.parse.unquote(url.path[len("/doc/"):]), params)
            elif self.server.static_dir is not None:
                self._handle_static(url.path)
            else:
                self._send_json(404, {"error": "not found"})
        except UnsupportedFieldError as exc:
            self._send_json(422, {"error": exc.message, "offset": exc.offset})
        except ParseError as exc:
            self._send_json(400, {"error": exc.message, "offset": exc.offset,
                                  "expected": sorted(exc.expected)})
        except (InvalidArgumentError, ValueError) as exc:
            self._send_json(400, {"error": str(exc)})
        except NotFoundError as exc:
            self._send_json(404, {"error": str(exc)})
        except EvaluationError as exc:
            self._send_json(500, {"error": str(exc)})
        except Exception as exc:  # pragma: no cover - last resort
            logger.exception("internal error")
            self._send_json(500, {"error": f"internal error: {exc}"})

    # -- endpoints -----------------------------------------------------

    def _handle_query(self, params) -> None:
        engine = self.server.engine
        text = params.get("q", [""])[0]
        if not text.strip():
            self._send_json(400, {"error": "empty query", "offset": 0})
            return
        rows = min(int(params.get("rows", [DEFAULT_ROWS])[0]), MAX_ROWS)
        start = int(params.get("start", [0])[0])
        now = self._now(params)
        began = time.perf_counter()
        ast = parse(text)
        ranked = Evaluator(engine, now).evaluate(ast)
        elapsed_ms = int((time.perf_counter() - began) * 1000)
        payload = query_payload(engine, to_canonical_string(ast), ranked)
        if start:
            payload["entries"] = payload["entries"][start:start + rows]
        else:
            payload["entries"] = payload["entries"][:rows]
        payload["elapsed_ms"] = elapsed_ms
        self._send_json(200, payload)

    def _handle_doc(self, doc_id: str, params) -> None:
        engine = self.server.engine
        doc = engine.store.get_document(doc_id)
        now = self._now(params)
        quoted = urllib.parse.quote(f"bibcode:{doc_id}")
        payload = doc.to_record()
        payload["citation_count"] = engine.citation_count(doc_id)
        payload["reads90"] = engine.reads_window(doc_id, now)
        payload["links"] = {
            kind: f"/query?q={kind}({quoted})"
            for kind in ("references", "citations", "trending", "similar")
        }
        self._send_json(200, payload)

    def _handle_network(self, params) -> None:
        engine = self.server.engine
        text = params.get("q", [""])[0]
        if not text.strip():
            self._send_json(400, {"error": "empty query", "offset": 0})
            return
        max_nodes = int(params.get("max_nodes", [100])[0])
        seed = int(params.get("seed", [0])[0])
        now = self._now(params)
        ranked = Evaluator(engine, now).evaluate(parse(text))
        network = build_paper_network(engine, ranked, max_nodes=max_nodes,
                                      min_weight=engine.config.netviz_min_weight)
        cluster_network(engine, network, seed=seed)
        self._send(200, export_graph(network, "json"))

    def _handle_static(self, path: str) -> None:
        root = self.server.static_dir
        rel = path.lstrip("/") or "index.html"
        target = (root / rel).resolve()
        if not str(target).startswith(str(root)) or not target.is_file():
            self._send_json(404, {"error": "not found"})
            return
        ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        self._send(200, target.read_bytes(), ctype)


def run_server(engine: Engine, host: str = "127.0.0.1", port: int = 8765,
               default_now: dt.date | None = None, static_dir: str | None = None) -> None:
    """Serve until interrupted; SIGTERM/SIGINT shut down cleanly."""
    server = ApiServer(engine, host, port, default_now, static_dir)
    logger.info("serving on http://%s:%d (n_docs=%d)", host, port, len(engine.store))
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
