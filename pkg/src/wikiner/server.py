"""HTTP/1.1 facade over the annotation service, plus static UI hosting.

Endpoints (JSON bodies unless noted):

    GET  /api/tasks/next?annotator=ID   200 entity payload | 204 when done
    POST /api/labels                    {entity_id, annotator, label}
    GET  /api/progress                  per-annotator counts
    GET  /api/agreement                 agreement report
    GET  /api/disagreements             disagreement queue
    POST /api/adjudications             {entity_id, label}
    POST /api/finalize                  200 | 409 with unresolved ids
    GET  /api/export?format=tsv|jsonl   corpus file body

Domain errors map to 4xx responses shaped {code, message, details}.
Anything under a configured static directory is served for GET paths
outside /api/ so the browser UI ships with the service process.
"""

from __future__ import annotations

import io
import json
import mimetypes
import threading
import urllib.parse
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

from .annotation import (
    AnnotationService,
    NotDisagreed,
    NotEnoughAnnotators,
    UnknownAnnotator,
    UnknownEntity,
    Unresolved,
)
from .corpus import EntityRecord, InvalidLabel, export_corpus

_ERROR_STATUS = {
    "unknown_annotator": 404,
    "unknown_entity": 404,
    "invalid_label": 400,
    "bad_request": 400,
    "not_disagreed": 409,
    "not_enough_annotators": 409,
    "unresolved": 409,
    "not_found": 404,
}


def _entity_payload(record: EntityRecord) -> dict:
    payload = {
        "entity_id": record.id,
        "surface": record.surface,
        "provenance": [list(pair) for pair in record.provenance],
    }
    if record.candidate is not None:
        payload["tokens"] = [t.text for t in record.candidate.tokens]
        payload["tags"] = [t.pos_tag for t in record.candidate.tokens]
        payload["wordtypes"] = list(record.candidate.wordtypes)
        payload["confidence"] = record.candidate.confidence
    return payload


class ApiError(Exception):
    def __init__(self, code: str, message: str, details: Optional[dict] = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.details = details or {}

    @property
    def status(self) -> int:
        return _ERROR_STATUS.get(self.code, 400)


def _translate(exc: Exception) -> ApiError:
    if isinstance(exc, UnknownAnnotator):
        return ApiError("unknown_annotator", str(exc))
    if isinstance(exc, UnknownEntity):
        return ApiError("unknown_entity", f"no entity {exc}")
    if isinstance(exc, InvalidLabel):
        return ApiError("invalid_label", str(exc))
    if isinstance(exc, NotDisagreed):
        return ApiError("not_disagreed", str(exc))
    if isinstance(exc, NotEnoughAnnotators):
        return ApiError("not_enough_annotators", str(exc))
    if isinstance(exc, Unresolved):
        return ApiError(
            "unresolved", str(exc), {"entity_ids": exc.entity_ids}
        )
    raise exc


class AnnotationHTTPServer:
    """Owns the listening socket and routes requests to the service."""

    def __init__(
        self,
        service: AnnotationService,
        host: str = "127.0.0.1",
        port: int = 0,
        static_dir: Optional[Path] = None,
        export_dir: Optional[Path] = None,
    ) -> None:
        self.service = service
        self.static_dir = Path(static_dir).resolve() if static_dir else None
        self.export_dir = Path(export_dir) if export_dir else None
        outer = self

        class Handler(BaseHTTPRequestHandler):
            protocol_version = "HTTP/1.1"

            def log_message(self, format: str, *args) -> None:
                pass  # tests and scripted runs stay quiet

            def do_GET(self) -> None:
                outer._handle(self, "GET")

            def do_POST(self) -> None:
                outer._handle(self, "POST")

        self._httpd = ThreadingHTTPServer((host, port), Handler)
        self._thread: Optional[threading.Thread] = None

    @property
    def address(self) -> tuple[str, int]:
        return self._httpd.server_address[:2]

    @property
    def url(self) -> str:
        host, port = self.address
        return f"http://{host}:{port}"

    def start(self) -> None:
        self._thread = threading.Thread(
            target=self._httpd.serve_forever, name="annotation-http", daemon=True
        )
        self._thread.start()

    def serve_forever(self) -> None:
        self._httpd.serve_forever()

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        if self._thread:
            self._thread.join(timeout=5)

    # -- request handling ---------------------------------------------------

    def _handle(self, handler: BaseHTTPRequestHandler, method: str) -> None:
        parsed = urllib.parse.urlsplit(handler.path)
        query = urllib.parse.parse_qs(parsed.query)
        try:
            if parsed.path.startswith("/api/"):
                self._handle_api(handler, method, parsed.path, query)
            elif method == "GET":
                self._serve_static(handler, parsed.path)
            else:
                raise ApiError("not_found", f"no route {method} {parsed.path}")
        except ApiError as err:
            body = json.dumps(
                {"code": err.code, "message": err.message, "details": err.details}
            ).encode("utf-8")
            self._respond(handler, err.status, body, "application/json")
        except Exception as exc:  # keep the connection usable on bugs
            body = json.dumps(
                {"code": "internal", "message": str(exc), "details": {}}
            ).encode("utf-8")
            self._respond(handler, 500, body, "application/json")

    def _handle_api(
        self,
        handler: BaseHTTPRequestHandler,
        method: str,
        path: str,
        query: dict,
    ) -> None:
        route = (method, path)
        if route == ("GET", "/api/tasks/next"):
            annotator = self._query_param(query, "annotator")
            try:
                record = self.service.next_task(annotator)
            except Exception as exc:
                raise _translate(exc)
            if record is None:
                self._respond(handler, 204, b"", None)
                return
            self._json(handler, 200, _entity_payload(record))
        elif route == ("POST", "/api/labels"):
            body = self._read_json(handler)
            try:
                self.service.submit_label(
                    self._field(body, "annotator"),
                    self._field(body, "entity_id"),
                    self._field(body, "label"),
                )
            except Exception as exc:
                raise _translate(exc)
            self._json(handler, 200, {"status": "ok"})
        elif route == ("GET", "/api/progress"):
            self._json(handler, 200, self.service.progress())
        elif route == ("GET", "/api/agreement"):
            try:
                report = self.service.agreement()
            except Exception as exc:
                raise _translate(exc)
            self._json(handler, 200, report.to_json())
        elif route == ("GET", "/api/disagreements"):
            try:
                queue = self.service.disagreements()
            except Exception as exc:
                raise _translate(exc)
            self._json(handler, 200, {"disagreements": queue})
        elif route == ("POST", "/api/adjudications"):
            body = self._read_json(handler)
            try:
                self.service.adjudicate(
                    self._field(body, "entity_id"), self._field(body, "label")
                )
            except Exception as exc:
                raise _translate(exc)
            self._json(handler, 200, {"status": "ok"})
        elif route == ("POST", "/api/finalize"):
            try:
                records = self.service.finalize()
            except Exception as exc:
                raise _translate(exc)
            if self.export_dir is not None:
                export_corpus(records, self.export_dir / "corpus.tsv", "tsv")
                export_corpus(records, self.export_dir / "corpus.jsonl", "jsonl")
            self._json(handler, 200, {"status": "ok", "entities": len(records)})
        elif route == ("GET", "/api/export"):
            fmt = self._query_param(query, "format", default="tsv")
            if fmt not in ("tsv", "jsonl"):
                raise ApiError("bad_request", f"unknown export format {fmt!r}")
            try:
                records = self.service.finalize()
            except Exception as exc:
                raise _translate(exc)
            buffer = io.StringIO()
            if fmt == "tsv":
                for rec in records:
                    buffer.write(f"{rec.surface}\t{rec.final_label}\n")
                content_type = "text/tab-separated-values; charset=utf-8"
            else:
                for rec in records:
                    buffer.write(json.dumps(rec.to_json(), ensure_ascii=False) + "\n")
                content_type = "application/jsonl; charset=utf-8"
            self._respond(
                handler, 200, buffer.getvalue().encode("utf-8"), content_type
            )
        else:
            raise ApiError("not_found", f"no route {method} {path}")

    def _serve_static(self, handler: BaseHTTPRequestHandler, path: str) -> None:
        if self.static_dir is None:
            raise ApiError("not_found", "no static directory configured")
        rel = path.lstrip("/") or "index.html"
        target = (self.static_dir / rel).resolve()
        if not str(target).startswith(str(self.static_dir)) or not target.is_file():
            raise ApiError("not_found", f"no such file {path!r}")
        content_type = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        self._respond(handler, 200, target.read_bytes(), content_type)

    @staticmethod
    def _query_param(query: dict, name: str, default: Optional[str] = None) -> str:
        values = query.get(name)
        if not values:
            if default is not None:
                return default
            raise ApiError("bad_request", f"missing query parameter {name!r}")
        return values[0]

    @staticmethod
    def _field(body: dict, name: str) -> str:
        value = body.get(name)
        if not isinstance(value, str) or not value:
            raise ApiError("bad_request", f"missing or non-string field {name!r}")
        return value

    @staticmethod
    def _read_json(handler: BaseHTTPRequestHandler) -> dict:
        length = int(handler.headers.get("Content-Length") or 0)
        raw = handler.rfile.read(length) if length else b""
        try:
            body = json.loads(raw.decode("utf-8") or "{}")
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ApiError("bad_request", f"malformed JSON body: {exc}")
        if not isinstance(body, dict):
            raise ApiError("bad_request", "JSON body must be an object")
        return body

    def _json(self, handler: BaseHTTPRequestHandler, status: int, obj: dict) -> None:
        self._respond(
            handler,
            status,
            json.dumps(obj, ensure_ascii=False).encode("utf-8"),
            "application/json; charset=utf-8",
        )

    @staticmethod
    def _respond(
        handler: BaseHTTPRequestHandler,
        status: int,
        body: bytes,
        content_type: Optional[str],
    ) -> None:
        handler.send_response(status)
        if content_type:
            handler.send_header("Content-Type", content_type)
        handler.send_header("Content-Length", str(len(body)))
        handler.end_headers()
        if body:
            handler.wfile.write(body)
