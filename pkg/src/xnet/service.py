"""Operator-facing HTTP surface.

Endpoints (JSON bodies, permissive CORS so the browser console can run
from anywhere):

* ``GET /state``: full system snapshot (world, marking, aspect, recent log)
* ``POST /command``: ``{"text": ...}`` -> parse result or diagnostic
* ``GET /events``: server-sent events, one log record per message

When a static directory is configured (the built operator console), it
is served at ``/``. All mutation flows through the solver's queue, the
same path the CLI uses.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .commands import CommandParseError, CommandParser
from .eventlog import EventLog
from .solver import Solver

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json",
    ".json": "application/json",
    ".svg": "image/svg+xml",
}


class ControlService:
    def __init__(self, solver: Solver, parser: CommandParser, log: EventLog,
                 bind: str = "127.0.0.1:8080", static_dir: str | Path | None = None):
        self.solver = solver
        self.parser = parser
        self.log = log
        host, _, port = bind.rpartition(":")
        self.address = (host or "127.0.0.1", int(port))
        self.static_dir = Path(static_dir) if static_dir else None
        self._server: ThreadingHTTPServer | None = None
        self._thread: threading.Thread | None = None

    @property
    def url(self) -> str:
        host, port = self._server.server_address if self._server else self.address
        return f"http://{host}:{port}"

    def start(self) -> None:
        service = self

        class Handler(BaseHTTPRequestHandler):
            protocol_version = "HTTP/1.1"

            def log_message(self, *args):  # quiet access log
                pass

            def _cors(self):
                self.send_header("Access-Control-Allow-Origin", "*")
                self.send_header("Access-Control-Allow-Headers", "Content-Type")
                self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")

            def _json(self, status: int, payload: dict):
                body = json.dumps(payload).encode("utf-8")
                self.send_response(status)
                self._cors()
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def do_OPTIONS(self):
                self.send_response(204)
                self._cors()
                self.send_header("Content-Length", "0")
                self.end_headers()

            def do_GET(self):
                if self.path == "/state":
                    self._json(200, service.solver.snapshot())
                elif self.path == "/events":
                    self._stream_events()
                else:
                    self._static()

            def do_POST(self):
                if self.path != "/command":
                    self._json(404, {"ok": False, "error": "unknown endpoint"})
                    return
                length = int(self.headers.get("Content-Length", 0))
                try:
                    payload = json.loads(self.rfile.read(length) or b"{}")
                    text = payload["text"]
                except (ValueError, KeyError):
                    self._json(400, {"ok": False, "error": "body must be {\"text\": ...}"})
                    return
                try:
                    spec = service.parser.parse(text)
                except CommandParseError as exc:
                    self._json(400, {"ok": False, "error": str(exc), "hint": exc.hint})
                    return
                service.solver.submit(spec)
                self._json(200, {"ok": True, "actspec": spec.to_json()})

            def _stream_events(self):
                self.send_response(200)
                self._cors()
                self.send_header("Content-Type", "text/event-stream")
                self.send_header("Cache-Control", "no-cache")
                self.end_headers()
                cursor = service.log.subscribe()
                try:
                    self.wfile.write(b"retry: 1000\n\n")
                    self.wfile.flush()
                    while True:
                        record = cursor.get(timeout=5.0)
                        if record is None:
                            self.wfile.write(b": keepalive\n\n")
                        else:
                            data = json.dumps(record, sort_keys=True)
                            self.wfile.write(
                                f"id: {record['index']}\ndata: {data}\n\n".encode("utf-8"))
                        self.wfile.flush()
                except (BrokenPipeError, ConnectionResetError, OSError):
                    pass
                finally:
                    service.log.unsubscribe(cursor)

            def _static(self):
                root = service.static_dir
                if root is None:
                    self._json(404, {"ok": False, "error": "unknown endpoint"})
                    return
                relative = self.path.lstrip("/") or "index.html"
                target = (root / relative).resolve()
                if not str(target).startswith(str(root.resolve())) or not target.is_file():
                    self._json(404, {"ok": False, "error": "not found"})
                    return
                body = target.read_bytes()
                self.send_response(200)
                self._cors()
                self.send_header("Content-Type",
                                 _CONTENT_TYPES.get(target.suffix, "application/octet-stream"))
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

        self._server = ThreadingHTTPServer(self.address, Handler)
        self._server.daemon_threads = True
        self._thread = threading.Thread(target=self._server.serve_forever,
                                        name="control-service", daemon=True)
        self._thread.start()

    def stop(self) -> None:
        if self._server is not None:
            self._server.shutdown()
            self._server.server_close()
            self._server = None
