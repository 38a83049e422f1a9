"""Local HTTP service exposing the checker to the browser UI.

Stateless: every ``POST /api/check`` runs the full pipeline on the sources
carried by the request, so identical requests always produce identical
responses. Static UI assets are served from the directory named by the
``LIVECHECK_UI_DIR`` environment variable, falling back to the bundled
page. Binds loopback only.
"""

from __future__ import annotations

import json
import mimetypes
import os
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .pipeline import DEFAULT_BOUND, DEFAULT_CONFIG_CAP, UnknownFocus, run_pipeline

VERSION = "0.1.0"
REQUEST_TIME_CAP = 10.0  # seconds per check request

_STATIC_FALLBACK = Path(__file__).parent / "static"


class BadRequest(Exception):
    pass


def parse_check_request(body: bytes) -> tuple[list[tuple[str, str]], str | None, int | None]:
    """Validate a check request body; raises BadRequest on anything that is
    not a well-formed request (language errors are not request errors)."""
    try:
        payload = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as err:
        raise BadRequest(f"malformed JSON body: {err}") from err
    if not isinstance(payload, dict):
        raise BadRequest("request body must be a JSON object")
    files = payload.get("files")
    if not isinstance(files, list) or not files:
        raise BadRequest("files must be a nonempty list")
    sources: list[tuple[str, str]] = []
    names: set[str] = set()
    for entry in files:
        if (
            not isinstance(entry, dict)
            or not isinstance(entry.get("name"), str)
            or not isinstance(entry.get("text"), str)
        ):
            raise BadRequest("each file needs a string name and text")
        if entry["name"] in names:
            raise BadRequest(f"duplicate file name {entry['name']}")
        names.add(entry["name"])
        sources.append((entry["name"], entry["text"]))
    focus = payload.get("focus")
    if focus is not None and not isinstance(focus, str):
        raise BadRequest("focus must be a string")
    bound = payload.get("bound")
    if bound is not None and (
        not isinstance(bound, int) or isinstance(bound, bool) or bound < 1
    ):
        raise BadRequest("bound must be a positive integer")
    return sources, focus, bound


def make_handler(default_bound: int, config_cap: int, static_dir: Path | None):
    from .diagnostics import render_json

    asset_root = static_dir if static_dir is not None else _resolve_static_dir()

    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt: str, *args) -> None:  # quiet by default
            if os.environ.get("LIVECHECK_HTTP_LOG"):
                super().log_message(fmt, *args)

        def _reply(self, status: int, body: bytes, content_type: str) -> None:
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _reply_json(self, status: int, body: bytes) -> None:
            self._reply(status, body, "application/json; charset=utf-8")

        def do_POST(self) -> None:
            if self.path != "/api/check":
                self._reply_json(404, b'{"error":"not found"}')
                return
            length = int(self.headers.get("Content-Length") or 0)
            body = self.rfile.read(length)
            try:
                sources, focus, bound = parse_check_request(body)
                result = run_pipeline(
                    sources,
                    focus=focus,
                    bound=bound if bound is not None else default_bound,
                    config_cap=config_cap,
                    time_cap=REQUEST_TIME_CAP,
                )
            except BadRequest as err:
                self._reply_json(400, json.dumps({"error": str(err)}).encode("utf-8"))
                return
            except UnknownFocus as err:
                self._reply_json(400, json.dumps({"error": str(err)}).encode("utf-8"))
                return
            self._reply_json(200, render_json(result.diagnostics, result.stats))

        def do_GET(self) -> None:
            if self.path == "/api/version":
                body = json.dumps(
                    {"name": "livecheck", "version": VERSION}, separators=(",", ":")
                ).encode("utf-8")
                self._reply_json(200, body)
                return
            self._serve_asset(self.path)

        def _serve_asset(self, path: str) -> None:
            name = path.split("?", 1)[0]
            if name in ("", "/"):
                name = "/index.html"
            target = (asset_root / name.lstrip("/")).resolve()
            root = asset_root.resolve()
            inside = target == root or root in target.parents
            if not inside or not target.is_file():
                self._reply(404, b"not found", "text/plain; charset=utf-8")
                return
            ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
            self._reply(200, target.read_bytes(), ctype)

    return Handler


def _resolve_static_dir() -> Path:
    configured = os.environ.get("LIVECHECK_UI_DIR")
    if configured:
        return Path(configured)
    return _STATIC_FALLBACK


def make_server(
    port: int,
    bound: int = DEFAULT_BOUND,
    config_cap: int = DEFAULT_CONFIG_CAP,
    static_dir: Path | None = None,
    host: str = "127.0.0.1",
) -> ThreadingHTTPServer:
    handler = make_handler(bound, config_cap, static_dir)
    server = ThreadingHTTPServer((host, port), handler)
    server.daemon_threads = True
    return server


def serve_forever(
    port: int, bound: int = DEFAULT_BOUND, config_cap: int = DEFAULT_CONFIG_CAP
) -> None:
    server = make_server(port, bound=bound, config_cap=config_cap)
    host, actual_port = server.server_address[:2]
    print(f"livecheck serving on http://{host}:{actual_port}/", flush=True)
    try:
        server.serve_forever()
    finally:
        server.server_close()
