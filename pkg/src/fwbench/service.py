"""Local HTTP service over a session; the browser UI's only backend.

JSON endpoints mirror the document schema.  Reads are served from
immutable snapshots; mutating requests (apply, undo, redo) are serialized
through one lock, so the history list is linearizable.  CORS is wide open
because the client is a local page.
"""
from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .presentations import Presentation
from .rewrites import RewriteError, enumerate_candidates
from .serialization import (
    Document,
    ParseError,
    diff_to_jsonable,
    document_to_jsonable,
    op_from_jsonable,
    op_to_jsonable,
)
from .session import Session, SessionError

DEFAULT_OPS_CAP = 500


def presentation_body(session: Session) -> dict:
    return {
        "document": document_to_jsonable(Document.wrap(session.presentation)),
        "cursor": session.cursor,
        "historyLength": len(session),
    }


def ops_body(p: Presentation, offset: int = 0, limit: int = DEFAULT_OPS_CAP) -> dict:
    candidates = []
    for cand in enumerate_candidates(p):
        candidates.append(
            {
                "op": op_to_jsonable(cand.op),
                "satisfied": cand.satisfied,
                "unsatisfied": list(cand.unsatisfied),
            }
        )
        if len(candidates) >= offset + limit + 1:
            break
    window = candidates[offset : offset + limit]
    return {
        "ops": window,
        "offset": offset,
        "limit": limit,
        "capped": len(candidates) > offset + limit,
    }


def history_body(session: Session) -> dict:
    rows = []
    for n in range(len(session)):
        diff = session.diff(n)
        rows.append(
            {
                "index": n,
                "diff": diff_to_jsonable(diff) if diff is not None else None,
            }
        )
    return {"cursor": session.cursor, "snapshots": rows}


def make_handler(session: Session, lock: threading.Lock):
    class Handler(BaseHTTPRequestHandler):
        server_version = "fwbench"

        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send(self, status: int, body: dict):
            data = json.dumps(body, sort_keys=True).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.end_headers()
            self.wfile.write(data)

        def do_OPTIONS(self):
            self._send(204, {})

        def do_GET(self):
            url = urlparse(self.path)
            if url.path == "/presentation":
                with lock:
                    self._send(200, presentation_body(session))
            elif url.path == "/ops":
                query = parse_qs(url.query)
                try:
                    offset = int(query.get("offset", ["0"])[0])
                    limit = int(query.get("limit", [str(DEFAULT_OPS_CAP)])[0])
                except ValueError:
                    self._send(400, {"error": "bad-query", "message": "offset/limit must be integers"})
                    return
                with lock:
                    snapshot = session.presentation
                self._send(200, ops_body(snapshot, offset, min(limit, DEFAULT_OPS_CAP)))
            elif url.path == "/history":
                with lock:
                    self._send(200, history_body(session))
            else:
                self._send(404, {"error": "not-found", "message": f"no route {url.path}"})

        def _read_body(self) -> dict | None:
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b"{}"
            try:
                body = json.loads(raw.decode("utf-8"))
            except (json.JSONDecodeError, UnicodeDecodeError):
                self._send(400, {"error": "bad-json", "message": "request body is not JSON"})
                return None
            if not isinstance(body, dict):
                self._send(400, {"error": "bad-json", "message": "request body must be an object"})
                return None
            return body

        def do_POST(self):
            url = urlparse(self.path)
            if url.path == "/apply":
                body = self._read_body()
                if body is None:
                    return
                if "op" not in body:
                    self._send(400, {"error": "bad-request", "message": "missing op"})
                    return
                try:
                    op = op_from_jsonable(body["op"], "$.op")
                except ParseError as err:
                    self._send(400, {"error": "bad-op", "message": str(err)})
                    return
                with lock:
                    try:
                        diff = session.apply(op)
                    except RewriteError as err:
                        self._send(409, {"error": err.code, "message": str(err)})
                        return
                    except KeyError as err:
                        self._send(409, {"error": "not-found", "message": str(err)})
                        return
                    body = presentation_body(session)
                body["diff"] = diff_to_jsonable(diff)
                self._send(200, body)
            elif url.path in ("/undo", "/redo"):
                with lock:
                    try:
                        if url.path == "/undo":
                            session.undo()
                        else:
                            session.redo()
                    except SessionError as err:
                        self._send(409, {"error": err.code, "message": str(err)})
                        return
                    self._send(200, presentation_body(session))
            else:
                self._send(404, {"error": "not-found", "message": f"no route {url.path}"})

    return Handler


def serve(session: Session, port: int = 8642, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    """Bind the service; the caller runs ``serve_forever`` (or a thread does)."""
    lock = threading.Lock()
    handler = make_handler(session, lock)
    return ThreadingHTTPServer((host, port), handler)
